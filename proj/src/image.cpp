#include "zup/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zup {

Image::Image(int height, int width, double fill) : height_(height), width_(width) {
    if (height < 0 || width < 0) {
        throw ArgumentError("image dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

Image::Image(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (height < 0 || width < 0 ||
        data_.size() != static_cast<std::size_t>(height) * width) {
        throw ShapeError("image payload does not match " + std::to_string(height) + "x" +
                         std::to_string(width));
    }
}

double Image::clamped(int y, int x) const noexcept {
    y = std::clamp(y, 0, height_ - 1);
    x = std::clamp(x, 0, width_ - 1);
    return at(y, x);
}

double sample_bilinear(const Image& image, double x, double y) noexcept {
    const double max_x = image.width() - 1;
    const double max_y = image.height() - 1;
    x = std::clamp(x, 0.0, max_x);
    y = std::clamp(y, 0.0, max_y);
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, image.width() - 1);
    const int y1 = std::min(y0 + 1, image.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = image.at(y0, x0) * (1.0 - fx) + image.at(y0, x1) * fx;
    const double bottom = image.at(y1, x0) * (1.0 - fx) + image.at(y1, x1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shape mismatch (" + std::to_string(a.height()) +
                         "x" + std::to_string(a.width()) + " vs " + std::to_string(b.height()) +
                         "x" + std::to_string(b.width()) + ")");
    }
}

}  // namespace zup
