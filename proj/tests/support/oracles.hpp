#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "zup/flow.hpp"
#include "zup/image.hpp"

namespace zup::test {

/// Catmull-Rom (cubic convolution, a = -0.5) in its polynomial form on a
/// z-profile, end samples replicated, output clamped to [0, 1].
inline std::vector<double> catmull_rom_resample(const std::vector<double>& p, int factor) {
    const int n = static_cast<int>(p.size());
    const auto at = [&](int k) { return p[std::clamp(k, 0, n - 1)]; };
    std::vector<double> out;
    for (int i = 0; i <= (n - 1) * factor; ++i) {
        const int k = i / factor;
        const double t = static_cast<double>(i % factor) / factor;
        if (i % factor == 0) {
            out.push_back(p[k]);
            continue;
        }
        const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
        const double v = 0.5 * (2 * p1 + (-p0 + p2) * t + (2 * p0 - 5 * p1 + 4 * p2 - p3) * t * t +
                                (-p0 + 3 * p1 - 3 * p2 + p3) * t * t * t);
        out.push_back(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

inline double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

/// Endpoint errors against a constant true flow over the central `fraction` of the grid.
inline std::vector<double> central_epe(const FlowField& f, double tu, double tv, double fraction = 0.75) {
    const int my = static_cast<int>(std::round(f.height() * (1.0 - fraction) / 2.0));
    const int mx = static_cast<int>(std::round(f.width() * (1.0 - fraction) / 2.0));
    std::vector<double> e;
    for (int y = my; y < f.height() - my; ++y) {
        for (int x = mx; x < f.width() - mx; ++x) {
            e.push_back(std::hypot(f.u.at(y, x) - tu, f.v.at(y, x) - tv));
        }
    }
    return e;
}

inline double mse(const Image& a, const Image& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.pixels()[i] - b.pixels()[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

inline double max_abs_diff(const Image& a, const Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
    return m;
}

inline Image random_image(int h, int w, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    Image img(h, w);
    for (double& v : img.pixels()) v = d(rng);
    return img;
}

/// Intensity-weighted centroid (x, y).
inline std::pair<double, double> centroid(const Image& img) {
    double s = 0, sx = 0, sy = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            s += img.at(y, x);
            sx += img.at(y, x) * x;
            sy += img.at(y, x) * y;
        }
    }
    return {sx / s, sy / s};
}

/// Radius where a centred radial profile along +x crosses 0.5 (linear interpolation).
inline double half_max_radius_x(const Image& img, int cy, int cx) {
    for (int x = cx; x + 1 < img.width(); ++x) {
        const double a = img.at(cy, x);
        const double b = img.at(cy, x + 1);
        if (a >= 0.5 && b < 0.5) return (x - cx) + (a - 0.5) / (a - b);
    }
    return -1.0;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static int counter = 0;
    auto p = std::filesystem::temp_directory_path() /
             ("zup_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace zup::test
