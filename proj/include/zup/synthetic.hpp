#pragma once

#include <cstdint>

#include "zup/image.hpp"
#include "zup/volume.hpp"

namespace zup::synth {

/// Anti-aliased disk: clamp(radius + 0.5 - distance, 0, 1). Half maximum sits at `radius`.
[[nodiscard]] Image disk(int height, int width, double cx, double cy, double radius,
                         double intensity = 1.0);

/// exp(-r^2 / (2 sigma^2)) scaled by `peak`.
[[nodiscard]] Image gaussian_blob(int height, int width, double cx, double cy, double sigma,
                                  double peak = 1.0);

/// Gaussian-blurred uniform noise evaluated in closed form at positions
/// shifted by (shift_x, shift_y): the result at p equals the unshifted texture
/// at p - shift, so content moves by +shift. Values lie in [0, 1]; |shift| <= 32.
[[nodiscard]] Image smooth_texture(int height, int width, double sigma, std::uint64_t seed,
                                   double shift_x = 0.0, double shift_y = 0.0);

struct SphereParams {
    double cz = -1.0;  ///< negative: volume centre
    double cy = -1.0;
    double cx = -1.0;
    double radius = 24.0;
};

/// Solid anti-aliased sphere: clamp(radius + 0.5 - distance, 0, 1).
[[nodiscard]] Volume sphere(int depth, int height, int width, const SphereParams& p);

enum class Axis { Z, Y, X };

/// Linear ramp along one axis: value = index / (extent - 1).
[[nodiscard]] Volume ramp(int depth, int height, int width, Axis axis);

struct DiskTranslateParams {
    double radius = 10.0;
    double dx = 8.0;  ///< total displacement from first to last slice
    double dy = 0.0;
    double x0 = -1.0;  ///< negative: centred so the path is symmetric about the middle
    double y0 = -1.0;
    bool populate_interior = false;
};

/// Disk moving linearly across the stack. By default only the first and last
/// slices are drawn; interior slices are left black for synthesis tests.
[[nodiscard]] Volume disk_translate(int depth, int height, int width, const DiskTranslateParams& p);

}  // namespace zup::synth
