#include "zup/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zup/pyramid.hpp"
#include "zup/warp.hpp"

namespace zup {

namespace {

constexpr double kIntensityScale = 255.0;

Image central_dx(const Image& img) {
    Image out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.at(y, x) = 0.5 * (img.clamped(y, x + 1) - img.clamped(y, x - 1));
        }
    }
    return out;
}

Image central_dy(const Image& img) {
    Image out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.at(y, x) = 0.5 * (img.clamped(y + 1, x) - img.clamped(y - 1, x));
        }
    }
    return out;
}

/// Linearised data term of one warp: residual(p) = ix*u + iy*v + offset.
struct DataTerm {
    Image ix;
    Image iy;
    Image offset;
};

DataTerm linearise(const Image& reference, const Image& target, const FlowField& flow) {
    const Image warped = backward_warp(target, flow);
    const Image rx = central_dx(reference);
    const Image ry = central_dy(reference);
    const Image wx = central_dx(warped);
    const Image wy = central_dy(warped);
    const int h = reference.height();
    const int w = reference.width();
    DataTerm d{Image(h, w), Image(h, w), Image(h, w)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double ix = 0.5 * (rx.at(y, x) + wx.at(y, x));
            const double iy = 0.5 * (ry.at(y, x) + wy.at(y, x));
            const double it = warped.at(y, x) - reference.at(y, x);
            d.ix.at(y, x) = ix;
            d.iy.at(y, x) = iy;
            d.offset.at(y, x) = it - ix * flow.u.at(y, x) - iy * flow.v.at(y, x);
        }
    }
    return d;
}

/// In-place red-black Gauss-Seidel relaxation. Returns the number of sweeps run.
int relax(FlowField& flow, const DataTerm& d, double alpha_sq, int max_sweeps, double epsilon) {
    const int h = flow.height();
    const int w = flow.width();
    const double n_pixels = static_cast<double>(h) * w;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double total_update = 0.0;
        for (int colour = 0; colour < 2; ++colour) {
            for (int y = 0; y < h; ++y) {
                for (int x = (y + colour) & 1; x < w; x += 2) {
                    double su = 0.0;
                    double sv = 0.0;
                    int n = 0;
                    const auto add = [&](int yy, int xx) {
                        su += flow.u.at(yy, xx);
                        sv += flow.v.at(yy, xx);
                        ++n;
                    };
                    if (x > 0) add(y, x - 1);
                    if (x + 1 < w) add(y, x + 1);
                    if (y > 0) add(y - 1, x);
                    if (y + 1 < h) add(y + 1, x);
                    const double ubar = su / n;
                    const double vbar = sv / n;
                    const double ix = d.ix.at(y, x);
                    const double iy = d.iy.at(y, x);
                    const double r = ix * ubar + iy * vbar + d.offset.at(y, x);
                    const double k = r / (alpha_sq * n + ix * ix + iy * iy);
                    const double nu = ubar - ix * k;
                    const double nv = vbar - iy * k;
                    total_update += std::abs(nu - flow.u.at(y, x)) + std::abs(nv - flow.v.at(y, x));
                    flow.u.at(y, x) = nu;
                    flow.v.at(y, x) = nv;
                }
            }
        }
        if (total_update / n_pixels < epsilon) {
            ++sweep;
            break;
        }
    }
    return sweep;
}

}  // namespace

FlowField::FlowField(Image u_, Image v_) : u(std::move(u_)), v(std::move(v_)) {
    require_same_shape(u, v, "FlowField");
}

bool FlowField::all_finite() const noexcept {
    return std::ranges::all_of(u.pixels(), [](double x) { return std::isfinite(x); }) &&
           std::ranges::all_of(v.pixels(), [](double x) { return std::isfinite(x); });
}

double FlowField::max_magnitude() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        m = std::max(m, std::hypot(u.pixels()[i], v.pixels()[i]));
    }
    return m;
}

void FlowConfig::validate() const {
    if (max_levels < 1) throw ArgumentError("flow: max_levels must be >= 1");
    if (!(smoothness_weight > 0.0)) throw ArgumentError("flow: smoothness weight must be > 0");
    if (iterations_per_level < 1) throw ArgumentError("flow: iterations_per_level must be >= 1");
    if (warps_per_level < 1) throw ArgumentError("flow: warps_per_level must be >= 1");
    if (!(convergence_epsilon >= 0.0)) throw ArgumentError("flow: convergence_epsilon must be >= 0");
}

FlowField upsample_flow(const FlowField& coarse, int height, int width) {
    FlowField out(upsample_to(coarse.u, height, width), upsample_to(coarse.v, height, width));
    for (double& x : out.u.pixels()) x *= 2.0;
    for (double& x : out.v.pixels()) x *= 2.0;
    return out;
}

FlowField estimate_flow(const Image& reference, const Image& target, const FlowConfig& config) {
    require_same_shape(reference, target, "estimate_flow");
    config.validate();
    const ImagePyramid ref_pyr = build_pyramid(reference, config.max_levels);
    const ImagePyramid tgt_pyr = build_pyramid(target, config.max_levels);
    const double alpha = config.smoothness_weight / kIntensityScale;
    const double alpha_sq = alpha * alpha;

    FlowField flow;
    for (int level = ref_pyr.size() - 1; level >= 0; --level) {
        const Image& ref = ref_pyr.levels[level];
        const Image& tgt = tgt_pyr.levels[level];
        if (flow.u.empty()) {
            flow = FlowField(ref.height(), ref.width());
        } else {
            flow = upsample_flow(flow, ref.height(), ref.width());
        }
        for (int warp = 0; warp < config.warps_per_level; ++warp) {
            const DataTerm d = linearise(ref, tgt, flow);
            relax(flow, d, alpha_sq, config.iterations_per_level, config.convergence_epsilon);
        }
    }
    return flow;
}

Image consistency_mask(const FlowField& forward, const FlowField& backward, double tolerance_px) {
    require_same_shape(forward.u, backward.u, "consistency_mask");
    if (!(tolerance_px > 0.0)) throw ArgumentError("consistency tolerance must be > 0");
    const int h = forward.height();
    const int w = forward.width();
    Image mask(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double fu = forward.u.at(y, x);
            const double fv = forward.v.at(y, x);
            const double tx = x + fu;
            const double ty = y + fv;
            if (tx < 0.0 || ty < 0.0 || tx > w - 1 || ty > h - 1) continue;
            const double ru = fu + sample_bilinear(backward.u, tx, ty);
            const double rv = fv + sample_bilinear(backward.v, tx, ty);
            mask.at(y, x) = std::max(0.0, 1.0 - std::hypot(ru, rv) / tolerance_px);
        }
    }
    return mask;
}

}  // namespace zup
