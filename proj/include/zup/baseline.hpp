#pragma once

#include <array>

#include "zup/volume.hpp"

namespace zup {

enum class KernelKind { CubicConvolution, Linear, Nearest };

struct KernelSpec {
    KernelKind kind = KernelKind::CubicConvolution;
    /// Cubic free parameter; -0.5 reproduces linear signals (Catmull-Rom).
    double a = -0.5;

    void validate() const;
};

/// Cubic convolution kernel W(s) with parameter a.
[[nodiscard]] double cubic_kernel(double s, double a) noexcept;

/// Weights for samples at offsets -1, 0, +1, +2 around a fractional position t in [0, 1).
[[nodiscard]] std::array<double, 4> cubic_weights(double t, double a) noexcept;

/// Resamples every z-column to (depth-1)*factor + 1 slices, with end slices
/// replicated past the boundary and the result clamped to [0, 1]. Kept slices
/// land bit-exact at k*factor. Cubic on fewer than 4 slices falls back to linear.
/// Columns are distributed over `threads` OpenMP threads (0: runtime default).
[[nodiscard]] Volume interp_z(const Volume& volume, int factor, KernelSpec kernel = {}, int threads = 0);

/// Plain mean of the two bracketing kept slices for every inserted slice.
[[nodiscard]] Volume average_z(const Volume& volume, int factor);

namespace serial {

/// Straight loop over output slices; the reference for zup::interp_z.
[[nodiscard]] Volume interp_z(const Volume& volume, int factor, KernelSpec kernel = {});

}  // namespace serial

}  // namespace zup
