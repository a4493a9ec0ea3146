#include "zup/midframe.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "zup/warp.hpp"

namespace zup {

namespace {

FlowField combine(const FlowField& a, double wa, const FlowField& b, double wb) {
    FlowField out(a.height(), a.width());
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        out.u.pixels()[i] = wa * a.u.pixels()[i] + wb * b.u.pixels()[i];
        out.v.pixels()[i] = wa * a.v.pixels()[i] + wb * b.v.pixels()[i];
    }
    return out;
}

void check_upscale_input(const Volume& volume, int factor) {
    require_power_of_two(factor);
    if (volume.depth() < 2) {
        throw ArgumentError("upscale needs depth >= 2, got " + std::to_string(volume.depth()));
    }
}

Volume finish(const Volume& input, std::vector<Image> slices, int factor) {
    Volume out = Volume::from_slices(slices, input.source_bit_depth());
    if (input.voxel_size()) {
        VoxelSize vs = *input.voxel_size();
        vs.z /= factor;
        out.set_voxel_size(vs);
    }
    return out;
}

/// Interleaves `stack` with the synthesized midpoints of each adjacent pair.
std::vector<Image> interleave(std::vector<Image> stack, std::vector<Image> mids) {
    std::vector<Image> next;
    next.reserve(stack.size() + mids.size());
    for (std::size_t i = 0; i < stack.size(); ++i) {
        next.push_back(std::move(stack[i]));
        if (i < mids.size()) next.push_back(std::move(mids[i]));
    }
    return next;
}

}  // namespace

void SynthesisConfig::validate() const {
    flow.validate();
    if (!(consistency_tolerance_px > 0.0)) {
        throw ArgumentError("consistency tolerance must be > 0");
    }
    const auto [a, b] = fallback_blend;
    if (a < 0.0 || b < 0.0 || std::abs(a + b - 1.0) > 1e-12) {
        throw ArgumentError("fallback blend weights must be non-negative and sum to 1");
    }
}

int require_power_of_two(int factor) {
    if (factor < 2 || (factor & (factor - 1)) != 0) {
        throw ArgumentError("factor must be a power of two (2^n, n >= 1), got " + std::to_string(factor));
    }
    int n = 0;
    while ((1 << n) < factor) ++n;
    return n;
}

std::pair<FlowField, FlowField> midframe_flows(const FlowField& f13, const FlowField& f31, SplitMode mode) {
    require_same_shape(f13.u, f31.u, "midframe_flows");
    if (mode == SplitMode::Simple) {
        return {combine(f13, -0.5, f31, 0.0), combine(f13, 0.0, f31, -0.5)};
    }
    return {combine(f13, -0.25, f31, 0.25), combine(f13, 0.25, f31, -0.25)};
}

MidframeResult synthesize_midframe(const Image& first, const Image& last, const SynthesisConfig& config) {
    require_same_shape(first, last, "synthesize_midframe");
    if (first.height() < 8 || first.width() < 8) {
        throw ArgumentError("synthesize_midframe: slices must be at least 8x8");
    }
    config.validate();

    const FlowField f13 = estimate_flow(first, last, config.flow);
    const FlowField f31 = estimate_flow(last, first, config.flow);
    auto [to_first, to_last] = midframe_flows(f13, f31, config.split_mode);

    const Image warped_first = backward_warp(first, to_first);
    const Image warped_last = backward_warp(last, to_last);

    // Consistency lives on the source grids; carry it to the mid-frame with the same warps.
    const Image c1 = backward_warp(consistency_mask(f13, f31, config.consistency_tolerance_px), to_first);
    const Image c3 = backward_warp(consistency_mask(f31, f13, config.consistency_tolerance_px), to_last);

    const int h = first.height();
    const int w = first.width();
    MidframeResult r{Image(h, w), std::move(to_first), std::move(to_last), Image(h, w)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double sum = c1.at(y, x) + c3.at(y, x);
            const double w1 = sum > 0.0 ? c1.at(y, x) / sum : config.fallback_blend.first;
            const double w3 = sum > 0.0 ? c3.at(y, x) / sum : config.fallback_blend.second;
            const double fused = w1 * warped_first.at(y, x) + w3 * warped_last.at(y, x);
            r.slice.at(y, x) = std::clamp(fused, 0.0, 1.0);
            r.fusion_weights.at(y, x) = w1;
        }
    }
    return r;
}

Volume upscale_volume(const Volume& volume, int factor, const SynthesisConfig& config,
                      const ProgressSink& progress, int threads) {
    check_upscale_input(volume, factor);
    config.validate();
    const int rounds = require_power_of_two(factor);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

    std::vector<Image> stack;
    stack.reserve(volume.depth());
    for (int z = 0; z < volume.depth(); ++z) stack.push_back(volume.slice(z));

    for (int round = 1; round <= rounds; ++round) {
        const int pairs = static_cast<int>(stack.size()) - 1;
        std::vector<Image> mids(pairs);
        int done = 0;
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
        for (int i = 0; i < pairs; ++i) {
            try {
                mids[i] = synthesize_midframe(stack[i], stack[i + 1], config).slice;
                if (progress) {
#pragma omp critical(zup_upscale_progress)
                    progress(UpscaleProgress{round, rounds, ++done, pairs});
                }
            } catch (...) {
#pragma omp critical(zup_upscale_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        stack = interleave(std::move(stack), std::move(mids));
    }
    return finish(volume, std::move(stack), factor);
}

namespace serial {

Volume upscale_volume(const Volume& volume, int factor, const SynthesisConfig& config) {
    check_upscale_input(volume, factor);
    config.validate();
    const int rounds = require_power_of_two(factor);
    std::vector<Image> stack;
    for (int z = 0; z < volume.depth(); ++z) stack.push_back(volume.slice(z));
    for (int round = 0; round < rounds; ++round) {
        std::vector<Image> mids;
        for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
            mids.push_back(synthesize_midframe(stack[i], stack[i + 1], config).slice);
        }
        stack = interleave(std::move(stack), std::move(mids));
    }
    return finish(volume, std::move(stack), factor);
}

}  // namespace serial

}  // namespace zup
