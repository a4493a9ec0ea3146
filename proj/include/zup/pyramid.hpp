#pragma once

#include <vector>

#include "zup/image.hpp"

namespace zup {

/// Coarse-to-fine stack; level 0 is the finest (the input itself).
struct ImagePyramid {
    std::vector<Image> levels;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(levels.size()); }
    [[nodiscard]] const Image& finest() const { return levels.front(); }
    [[nodiscard]] const Image& coarsest() const { return levels.back(); }
};

/// Number of levels a height x width image supports with every level >= 4x4.
[[nodiscard]] int pyramid_depth(int height, int width, int max_levels);

/// Separable (1,4,6,4,1)/16 blur with replicate borders.
[[nodiscard]] Image binomial_blur(const Image& image);

/// Blur then keep even rows and columns; output is ceil(h/2) x ceil(w/2).
[[nodiscard]] Image downsample(const Image& image);

/// Requires the slice to be at least 8x8.
[[nodiscard]] ImagePyramid build_pyramid(const Image& slice, int max_levels);

/// Bilinear resample of a coarse level onto a finer grid where fine (y, x)
/// corresponds to coarse (y/2, x/2).
[[nodiscard]] Image upsample_to(const Image& coarse, int height, int width);

}  // namespace zup
