#pragma once

#include "zup/image.hpp"

namespace zup {

/// Returned by psnr when the images are identical.
inline constexpr double kPsnrCap = 99.0;

/// 10 log10(range^2 / MSE) in dB, or kPsnrCap when MSE is zero.
[[nodiscard]] double psnr(const Image& reference, const Image& test, double data_range = 1.0);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 1.0;
};

/// Gaussian-weighted SSIM averaged over all window positions that fit inside
/// the image (no padding). Rows of the SSIM map are computed on `threads`
/// OpenMP threads (0: runtime default) and reduced in a fixed order.
[[nodiscard]] double ssim(const Image& reference, const Image& test, const SsimParams& params = {},
                          int threads = 0);

/// Per-window SSIM values, (h - window + 1) x (w - window + 1).
[[nodiscard]] Image ssim_map(const Image& reference, const Image& test, const SsimParams& params = {},
                             int threads = 0);

namespace serial {

/// Direct windowed sums per position; reference for zup::ssim.
[[nodiscard]] double ssim(const Image& reference, const Image& test, const SsimParams& params = {});

}  // namespace serial

}  // namespace zup
