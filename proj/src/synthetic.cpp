#include "zup/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace zup::synth {

namespace {
constexpr int kMaxTextureShift = 32;
}  // namespace

Image disk(int height, int width, double cx, double cy, double radius, double intensity) {
    Image out(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            out.at(y, x) = intensity * std::clamp(radius + 0.5 - d, 0.0, 1.0);
        }
    }
    return out;
}

Image gaussian_blob(int height, int width, double cx, double cy, double sigma, double peak) {
    Image out(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            out.at(y, x) = peak * std::exp(-r2 / (2.0 * sigma * sigma));
        }
    }
    return out;
}

Image smooth_texture(int height, int width, double sigma, std::uint64_t seed, double shift_x,
                     double shift_y) {
    const int reach = static_cast<int>(std::ceil(4.0 * sigma));
    // The noise lattice must not depend on the shift, so the margin is fixed.
    if (std::abs(shift_x) > kMaxTextureShift || std::abs(shift_y) > kMaxTextureShift) {
        throw ArgumentError("smooth_texture: shift exceeds " + std::to_string(kMaxTextureShift) + " px");
    }
    const int pad_x = reach + kMaxTextureShift + 1;
    const int pad_y = pad_x;
    const int nw = width + 2 * pad_x;
    const int nh = height + 2 * pad_y;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> noise(static_cast<std::size_t>(nw) * nh);
    for (double& n : noise) n = dist(rng);

    const auto g = [sigma](double t) { return std::exp(-t * t / (2.0 * sigma * sigma)); };
    // Discrete normaliser so the blur has unit gain for any subpixel phase.
    double norm = 0.0;
    for (int k = -reach - 1; k <= reach + 1; ++k) norm += g(k);
    // Keeps the output standard deviation near 0.15 for any sigma.
    const double gain = 0.15 * 2.0 * std::sqrt(std::numbers::pi) * sigma / std::sqrt(1.0 / 3.0);

    // Noise sample (i, j) sits at image coordinate (i - pad_x, j - pad_y).
    std::vector<double> rows(static_cast<std::size_t>(nh) * width);
    for (int j = 0; j < nh; ++j) {
        for (int x = 0; x < width; ++x) {
            const double sx = x - shift_x;
            const int lo = std::max(0, static_cast<int>(std::floor(sx)) - reach - 1 + pad_x);
            const int hi = std::min(nw - 1, static_cast<int>(std::ceil(sx)) + reach + 1 + pad_x);
            double acc = 0.0;
            for (int i = lo; i <= hi; ++i) acc += noise[static_cast<std::size_t>(j) * nw + i] * g(sx - (i - pad_x));
            rows[static_cast<std::size_t>(j) * width + x] = acc / norm;
        }
    }
    Image out(height, width);
    for (int y = 0; y < height; ++y) {
        const double sy = y - shift_y;
        const int lo = std::max(0, static_cast<int>(std::floor(sy)) - reach - 1 + pad_y);
        const int hi = std::min(nh - 1, static_cast<int>(std::ceil(sy)) + reach + 1 + pad_y);
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int j = lo; j <= hi; ++j) acc += rows[static_cast<std::size_t>(j) * width + x] * g(sy - (j - pad_y));
            out.at(y, x) = std::clamp(0.5 + gain * acc / norm, 0.0, 1.0);
        }
    }
    return out;
}

Volume sphere(int depth, int height, int width, const SphereParams& p) {
    const double cz = p.cz < 0 ? 0.5 * (depth - 1) : p.cz;
    const double cy = p.cy < 0 ? 0.5 * (height - 1) : p.cy;
    const double cx = p.cx < 0 ? 0.5 * (width - 1) : p.cx;
    Volume v(depth, height, width);
    for (int z = 0; z < depth; ++z) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const double d = std::sqrt((z - cz) * (z - cz) + (y - cy) * (y - cy) + (x - cx) * (x - cx));
                v.at(z, y, x) = std::clamp(p.radius + 0.5 - d, 0.0, 1.0);
            }
        }
    }
    return v;
}

Volume ramp(int depth, int height, int width, Axis axis) {
    Volume v(depth, height, width);
    const int extent = axis == Axis::Z ? depth : axis == Axis::Y ? height : width;
    const double denom = extent > 1 ? extent - 1 : 1;
    for (int z = 0; z < depth; ++z) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const int i = axis == Axis::Z ? z : axis == Axis::Y ? y : x;
                v.at(z, y, x) = i / denom;
            }
        }
    }
    return v;
}

Volume disk_translate(int depth, int height, int width, const DiskTranslateParams& p) {
    const double x0 = p.x0 < 0 ? 0.5 * (width - 1) - 0.5 * p.dx : p.x0;
    const double y0 = p.y0 < 0 ? 0.5 * (height - 1) - 0.5 * p.dy : p.y0;
    Volume v(depth, height, width);
    for (int z = 0; z < depth; ++z) {
        if (!p.populate_interior && z != 0 && z != depth - 1) continue;
        const double t = depth > 1 ? static_cast<double>(z) / (depth - 1) : 0.0;
        v.set_slice(z, disk(height, width, x0 + t * p.dx, y0 + t * p.dy, p.radius));
    }
    return v;
}

}  // namespace zup::synth
