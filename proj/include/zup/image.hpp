#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zup/error.hpp"

namespace zup {

/// Row-major 2D grid of doubles. Used for slices, flow components and masks.
class Image {
public:
    Image() = default;
    Image(int height, int width, double fill = 0.0);
    Image(int height, int width, std::vector<double> data);

    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] double& at(int y, int x) noexcept {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    [[nodiscard]] double at(int y, int x) const noexcept {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    /// Replicate-border access.
    [[nodiscard]] double clamped(int y, int x) const noexcept;

    [[nodiscard]] std::span<double> pixels() noexcept { return data_; }
    [[nodiscard]] std::span<const double> pixels() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Bilinear sample at continuous (x, y); coordinates are clamped to the grid.
[[nodiscard]] double sample_bilinear(const Image& image, double x, double y) noexcept;

void require_same_shape(const Image& a, const Image& b, const char* what);

}  // namespace zup
