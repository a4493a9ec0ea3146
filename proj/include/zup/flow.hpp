#pragma once

#include <filesystem>

#include "zup/image.hpp"

namespace zup {

/// Dense per-pixel displacement in pixels. A pixel at p in the reference
/// image appears at p + (u(p), v(p)) in the target.
struct FlowField {
    Image u;  ///< x displacement
    Image v;  ///< y displacement

    FlowField() = default;
    FlowField(int height, int width, double u0 = 0.0, double v0 = 0.0)
        : u(height, width, u0), v(height, width, v0) {}
    FlowField(Image u_, Image v_);

    [[nodiscard]] int height() const noexcept { return u.height(); }
    [[nodiscard]] int width() const noexcept { return u.width(); }
    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double max_magnitude() const noexcept;

    friend bool operator==(const FlowField&, const FlowField&) = default;
};

struct FlowConfig {
    int max_levels = 7;
    /// Weight of the smoothness term, in unit-intensity units. See estimate_flow.
    double smoothness_weight = 15.0;
    int iterations_per_level = 100;
    int warps_per_level = 3;
    /// Relaxation stops early once the mean |update| of a sweep drops below this.
    double convergence_epsilon = 1e-4;

    void validate() const;
};

/// Coarse-to-fine Horn-Schunck flow from `reference` to `target`.
///
/// Per level (coarsest first) the incoming flow is bilinearly upsampled and
/// doubled. Each warp resamples the target at p + flow, linearises brightness
/// constancy around the current flow and relaxes
///
///     sum (Ix du + Iy dv + It)^2 + alpha^2 * (|grad u|^2 + |grad v|^2)
///
/// with red-black Gauss-Seidel sweeps, where alpha is expressed relative to
/// an 8-bit intensity scale: alpha = smoothness_weight / 255 for unit-range
/// images. Derivatives are central differences averaged over the reference
/// and the warped target, with replicate borders.
[[nodiscard]] FlowField estimate_flow(const Image& reference, const Image& target,
                                      const FlowConfig& config = {});

/// Per-pixel weight max(0, 1 - |F(p) + B(p + F(p))| / tolerance); samples of
/// B that fall outside the grid give weight 0.
[[nodiscard]] Image consistency_mask(const FlowField& forward, const FlowField& backward,
                                     double tolerance_px = 1.0);

/// Bilinear upsampling of each component onto a finer grid, scaled by 2.
[[nodiscard]] FlowField upsample_flow(const FlowField& coarse, int height, int width);

/// Middlebury .flo: "PIEH", int32 width, int32 height, then row-major (u, v) float32,
/// all little-endian.
void write_flo(const FlowField& flow, const std::filesystem::path& path);
[[nodiscard]] FlowField read_flo(const std::filesystem::path& path);

/// RGB visualisation on the Middlebury colour wheel; hue encodes direction and
/// saturation the magnitude normalised by its 99th percentile. Interleaved 8-bit RGB.
[[nodiscard]] std::vector<unsigned char> flow_to_rgb(const FlowField& flow);

}  // namespace zup
