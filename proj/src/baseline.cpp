#include "zup/baseline.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

namespace zup {

namespace {

void check_factor(int factor) {
    if (factor != 2 && factor != 4 && factor != 8) {
        throw ArgumentError("interpolation factor must be 2, 4 or 8, got " + std::to_string(factor));
    }
}

KernelSpec effective_kernel(const Volume& volume, KernelSpec kernel) {
    kernel.validate();
    if (volume.depth() < 2) {
        throw ArgumentError("z interpolation needs depth >= 2, got " + std::to_string(volume.depth()));
    }
    if (kernel.kind == KernelKind::CubicConvolution && volume.depth() < 4) {
        spdlog::warn("interp_z: depth {} < 4, cubic convolution degrades to linear", volume.depth());
        kernel.kind = KernelKind::Linear;
    }
    return kernel;
}

/// Source slice index and taps for output index i.
struct Taps {
    int base = 0;  // slice at or below the output position
    std::array<int, 4> index{};
    std::array<double, 4> weight{};
    int count = 0;  // 0 means pass-through of `base`
};

Taps taps_for(int i, int factor, int depth, const KernelSpec& kernel) {
    Taps t;
    t.base = i / factor;
    const int rem = i % factor;
    if (rem == 0) return t;
    const double frac = static_cast<double>(rem) / factor;
    const auto clampz = [depth](int z) { return std::clamp(z, 0, depth - 1); };
    switch (kernel.kind) {
        case KernelKind::Nearest:
            t.count = 1;
            t.index[0] = clampz(frac < 0.5 ? t.base : t.base + 1);
            t.weight[0] = 1.0;
            break;
        case KernelKind::Linear:
            t.count = 2;
            t.index = {t.base, clampz(t.base + 1), 0, 0};
            t.weight = {1.0 - frac, frac, 0.0, 0.0};
            break;
        case KernelKind::CubicConvolution:
            t.count = 4;
            for (int k = 0; k < 4; ++k) t.index[k] = clampz(t.base - 1 + k);
            t.weight = cubic_weights(frac, kernel.a);
            break;
    }
    return t;
}

}  // namespace

void KernelSpec::validate() const {
    if (kind == KernelKind::CubicConvolution && !(a >= -1.0 && a < 0.0)) {
        throw ArgumentError("cubic parameter a must lie in [-1, 0)");
    }
}

double cubic_kernel(double s, double a) noexcept {
    s = std::abs(s);
    if (s <= 1.0) return ((a + 2.0) * s - (a + 3.0)) * s * s + 1.0;
    if (s < 2.0) return ((a * s - 5.0 * a) * s + 8.0 * a) * s - 4.0 * a;
    return 0.0;
}

std::array<double, 4> cubic_weights(double t, double a) noexcept {
    return {cubic_kernel(t + 1.0, a), cubic_kernel(t, a), cubic_kernel(1.0 - t, a),
            cubic_kernel(2.0 - t, a)};
}

Volume interp_z(const Volume& volume, int factor, KernelSpec kernel, int threads) {
    check_factor(factor);
    kernel = effective_kernel(volume, kernel);
    const int depth = volume.depth();
    const int out_depth = (depth - 1) * factor + 1;
    Volume out(out_depth, volume.height(), volume.width(), 0.0, volume.source_bit_depth());

    std::vector<Taps> taps(out_depth);
    for (int i = 0; i < out_depth; ++i) taps[i] = taps_for(i, factor, depth, kernel);

    const auto plane = static_cast<std::ptrdiff_t>(volume.slice_size());
    const double* src = volume.voxels().data();
    double* dst = out.voxels().data();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::ptrdiff_t p = 0; p < plane; ++p) {
        for (int i = 0; i < out_depth; ++i) {
            const Taps& t = taps[i];
            double v = 0.0;
            if (t.count == 0) {
                v = src[t.base * plane + p];
            } else {
                for (int k = 0; k < t.count; ++k) v += t.weight[k] * src[t.index[k] * plane + p];
                v = std::clamp(v, 0.0, 1.0);
            }
            dst[i * plane + p] = v;
        }
    }
    if (volume.voxel_size()) {
        VoxelSize vs = *volume.voxel_size();
        vs.z /= factor;
        out.set_voxel_size(vs);
    }
    return out;
}

Volume average_z(const Volume& volume, int factor) {
    check_factor(factor);
    if (volume.depth() < 2) throw ArgumentError("z interpolation needs depth >= 2");
    const int out_depth = (volume.depth() - 1) * factor + 1;
    Volume out(out_depth, volume.height(), volume.width(), 0.0, volume.source_bit_depth());
    for (int i = 0; i < out_depth; ++i) {
        const int base = i / factor;
        auto dst = out.slice_view(i);
        if (i % factor == 0) {
            std::ranges::copy(volume.slice_view(base), dst.begin());
            continue;
        }
        const auto lo = volume.slice_view(base);
        const auto hi = volume.slice_view(base + 1);
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = 0.5 * (lo[p] + hi[p]);
    }
    if (volume.voxel_size()) {
        VoxelSize vs = *volume.voxel_size();
        vs.z /= factor;
        out.set_voxel_size(vs);
    }
    return out;
}

namespace serial {

Volume interp_z(const Volume& volume, int factor, KernelSpec kernel) {
    check_factor(factor);
    kernel = effective_kernel(volume, kernel);
    const int out_depth = (volume.depth() - 1) * factor + 1;
    Volume out(out_depth, volume.height(), volume.width(), 0.0, volume.source_bit_depth());
    for (int i = 0; i < out_depth; ++i) {
        const Taps t = taps_for(i, factor, volume.depth(), kernel);
        for (int y = 0; y < volume.height(); ++y) {
            for (int x = 0; x < volume.width(); ++x) {
                if (t.count == 0) {
                    out.at(i, y, x) = volume.at(t.base, y, x);
                    continue;
                }
                double v = 0.0;
                for (int k = 0; k < t.count; ++k) v += t.weight[k] * volume.at(t.index[k], y, x);
                out.at(i, y, x) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    if (volume.voxel_size()) {
        VoxelSize vs = *volume.voxel_size();
        vs.z /= factor;
        out.set_voxel_size(vs);
    }
    return out;
}

}  // namespace serial

}  // namespace zup
