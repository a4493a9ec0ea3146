#pragma once

#include <stdexcept>
#include <string>

namespace zup {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands whose dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Argument outside an operation's documented domain.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Filesystem or stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported file payload.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace zup
