#pragma once

#include <functional>
#include <utility>

#include "zup/flow.hpp"
#include "zup/volume.hpp"

namespace zup {

enum class SplitMode { Simple, Symmetric };

struct SynthesisConfig {
    FlowConfig flow;
    SplitMode split_mode = SplitMode::Symmetric;
    double consistency_tolerance_px = 1.0;
    /// Weights of (first, last) warped images where both consistency weights vanish.
    std::pair<double, double> fallback_blend{0.5, 0.5};

    void validate() const;
};

struct MidframeResult {
    Image slice;
    FlowField flow_to_first;
    FlowField flow_to_last;
    /// Per-pixel weight given to the warped first slice; the last gets 1 - w.
    Image fusion_weights;
};

/// Approximates flows from the unknown middle slice to its neighbours from the
/// neighbour-to-neighbour flows, assuming linear motion at t = 0.5.
///
/// simple:    to_first = -F13/2,            to_last = -F31/2
/// symmetric: to_first = (F31 - F13)/4,     to_last = (F13 - F31)/4
[[nodiscard]] std::pair<FlowField, FlowField> midframe_flows(const FlowField& f13,
                                                             const FlowField& f31,
                                                             SplitMode mode);

/// Estimates the slice halfway between `first` and `last`: bidirectional flow,
/// split to the mid-frame, backward warp of both inputs, and fusion weighted by
/// forward-backward consistency.
[[nodiscard]] MidframeResult synthesize_midframe(const Image& first, const Image& last,
                                                 const SynthesisConfig& config = {});

struct UpscaleProgress {
    int round = 0;   ///< 1-based
    int rounds = 0;
    int done = 0;    ///< pairs finished in this round
    int total = 0;   ///< pairs in this round
};

using ProgressSink = std::function<void(const UpscaleProgress&)>;

/// Inserts synthesized slices recursively until depth = (depth-1)*factor + 1.
/// factor must be a power of two >= 2. Original slices are copied bit-exact to
/// indices k*factor. Pairs within a round run in parallel on `threads` OpenMP
/// threads (0: runtime default); results do not depend on the thread count.
[[nodiscard]] Volume upscale_volume(const Volume& volume, int factor, const SynthesisConfig& config = {},
                                    const ProgressSink& progress = {}, int threads = 0);

/// Throws ArgumentError unless factor is a power of two >= 2. Returns log2(factor).
int require_power_of_two(int factor);

/// Output depth of a 2^n upscale: (depth - 1) * factor + 1.
[[nodiscard]] constexpr int upscaled_depth(int depth, int factor) noexcept {
    return (depth - 1) * factor + 1;
}

namespace serial {

/// Single-threaded reference for zup::upscale_volume.
[[nodiscard]] Volume upscale_volume(const Volume& volume, int factor, const SynthesisConfig& config = {});

}  // namespace serial

}  // namespace zup
