#include "zup/metrics.hpp"

#include <omp.h>

#include <cmath>
#include <string>
#include <vector>

namespace zup {

namespace {

std::vector<double> gaussian_window(const SsimParams& p) {
    std::vector<double> g(p.window);
    const double c = 0.5 * (p.window - 1);
    double sum = 0.0;
    for (int i = 0; i < p.window; ++i) {
        g[i] = std::exp(-(i - c) * (i - c) / (2.0 * p.sigma * p.sigma));
        sum += g[i];
    }
    for (double& v : g) v /= sum;
    return g;
}

void check_ssim_args(const Image& a, const Image& b, const SsimParams& p) {
    require_same_shape(a, b, "ssim");
    if (p.window < 1 || !(p.sigma > 0.0) || !(p.data_range > 0.0)) {
        throw ArgumentError("ssim: window, sigma and data_range must be positive");
    }
    if (a.height() < p.window || a.width() < p.window) {
        throw ArgumentError("ssim: image " + std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                            " smaller than window " + std::to_string(p.window));
    }
}

double ssim_value(double mu_a, double mu_b, double saa, double sbb, double sab, double c1, double c2) {
    const double var_a = saa - mu_a * mu_a;
    const double var_b = sbb - mu_b * mu_b;
    const double cov = sab - mu_a * mu_b;
    return ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
           ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
}

}  // namespace

double psnr(const Image& reference, const Image& test, double data_range) {
    require_same_shape(reference, test, "psnr");
    if (!(data_range > 0.0)) throw ArgumentError("psnr: data_range must be > 0");
    if (reference.empty()) throw ArgumentError("psnr: empty images");
    double sse = 0.0;
    const auto a = reference.pixels();
    const auto b = test.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sse += d * d;
    }
    const double mse = sse / static_cast<double>(a.size());
    if (mse == 0.0) return kPsnrCap;
    return 10.0 * std::log10(data_range * data_range / mse);
}

Image ssim_map(const Image& a, const Image& b, const SsimParams& p, int threads) {
    check_ssim_args(a, b, p);
    const std::vector<double> g = gaussian_window(p);
    const int win = p.window;
    const int oh = a.height() - win + 1;
    const int ow = a.width() - win + 1;
    const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
    const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);

    Image out(oh, ow);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
    {
        // Horizontally filtered rows of a, b, a^2, b^2, ab for one window band.
        std::vector<double> rows(static_cast<std::size_t>(5) * win * ow);
#pragma omp for schedule(static)
        for (int y = 0; y < oh; ++y) {
            for (int r = 0; r < win; ++r) {
                double* ra = &rows[(0 * win + r) * static_cast<std::size_t>(ow)];
                double* rb = &rows[(1 * win + r) * static_cast<std::size_t>(ow)];
                double* raa = &rows[(2 * win + r) * static_cast<std::size_t>(ow)];
                double* rbb = &rows[(3 * win + r) * static_cast<std::size_t>(ow)];
                double* rab = &rows[(4 * win + r) * static_cast<std::size_t>(ow)];
                for (int x = 0; x < ow; ++x) {
                    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
                    for (int k = 0; k < win; ++k) {
                        const double va = a.at(y + r, x + k);
                        const double vb = b.at(y + r, x + k);
                        sa += g[k] * va;
                        sb += g[k] * vb;
                        saa += g[k] * va * va;
                        sbb += g[k] * vb * vb;
                        sab += g[k] * va * vb;
                    }
                    ra[x] = sa;
                    rb[x] = sb;
                    raa[x] = saa;
                    rbb[x] = sbb;
                    rab[x] = sab;
                }
            }
            for (int x = 0; x < ow; ++x) {
                double m[5] = {0, 0, 0, 0, 0};
                for (int q = 0; q < 5; ++q) {
                    for (int r = 0; r < win; ++r) m[q] += g[r] * rows[(q * win + r) * static_cast<std::size_t>(ow) + x];
                }
                out.at(y, x) = ssim_value(m[0], m[1], m[2], m[3], m[4], c1, c2);
            }
        }
    }
    return out;
}

double ssim(const Image& a, const Image& b, const SsimParams& p, int threads) {
    const Image map = ssim_map(a, b, p, threads);
    double sum = 0.0;
    for (const double v : map.pixels()) sum += v;
    return sum / static_cast<double>(map.size());
}

namespace serial {

double ssim(const Image& a, const Image& b, const SsimParams& p) {
    check_ssim_args(a, b, p);
    const std::vector<double> g = gaussian_window(p);
    const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
    const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);
    double sum = 0.0;
    int count = 0;
    for (int y = 0; y + p.window <= a.height(); ++y) {
        for (int x = 0; x + p.window <= a.width(); ++x) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int i = 0; i < p.window; ++i) {
                for (int j = 0; j < p.window; ++j) {
                    const double wgt = g[i] * g[j];
                    const double va = a.at(y + i, x + j);
                    const double vb = b.at(y + i, x + j);
                    ma += wgt * va;
                    mb += wgt * vb;
                    saa += wgt * va * va;
                    sbb += wgt * vb * vb;
                    sab += wgt * va * vb;
                }
            }
            sum += ssim_value(ma, mb, saa, sbb, sab, c1, c2);
            ++count;
        }
    }
    return sum / count;
}

}  // namespace serial

}  // namespace zup
