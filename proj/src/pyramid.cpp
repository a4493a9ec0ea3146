#include "zup/pyramid.hpp"

#include <string>

namespace zup {

namespace {

constexpr double kTaps[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
constexpr int kMinSide = 4;

}  // namespace

int pyramid_depth(int height, int width, int max_levels) {
    int levels = 1;
    int h = height;
    int w = width;
    while (levels < max_levels) {
        const int nh = (h + 1) / 2;
        const int nw = (w + 1) / 2;
        if (nh < kMinSide || nw < kMinSide) break;
        h = nh;
        w = nw;
        ++levels;
    }
    return levels;
}

Image binomial_blur(const Image& image) {
    const int h = image.height();
    const int w = image.width();
    Image tmp(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * image.clamped(y, x + k);
            tmp.at(y, x) = acc;
        }
    }
    Image out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * tmp.clamped(y + k, x);
            out.at(y, x) = acc;
        }
    }
    return out;
}

Image downsample(const Image& image) {
    const Image blurred = binomial_blur(image);
    Image out((image.height() + 1) / 2, (image.width() + 1) / 2);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) out.at(y, x) = blurred.at(2 * y, 2 * x);
    }
    return out;
}

ImagePyramid build_pyramid(const Image& slice, int max_levels) {
    if (slice.height() < 8 || slice.width() < 8) {
        throw ArgumentError("pyramid input must be at least 8x8, got " +
                            std::to_string(slice.height()) + "x" + std::to_string(slice.width()));
    }
    if (max_levels < 1) throw ArgumentError("max_levels must be >= 1");
    const int n = pyramid_depth(slice.height(), slice.width(), max_levels);
    ImagePyramid pyr;
    pyr.levels.reserve(n);
    pyr.levels.push_back(slice);
    for (int l = 1; l < n; ++l) pyr.levels.push_back(downsample(pyr.levels.back()));
    return pyr;
}

Image upsample_to(const Image& coarse, int height, int width) {
    Image out(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) out.at(y, x) = sample_bilinear(coarse, 0.5 * x, 0.5 * y);
    }
    return out;
}

}  // namespace zup
