#pragma once

#include <filesystem>
#include <vector>

#include "zup/image.hpp"

namespace zup::cli {

/// Loads one grayscale slice from a PNG or the first page of a TIFF/raw volume.
[[nodiscard]] Image read_slice(const std::filesystem::path& path);

/// Writes interleaved 8-bit RGB as PNG.
void write_rgb_png(const std::filesystem::path& path, int height, int width,
                   const std::vector<unsigned char>& rgb);

}  // namespace zup::cli
