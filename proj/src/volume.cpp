#include "zup/volume.hpp"

#include <algorithm>
#include <cmath>

namespace zup {

namespace {

void check_dims(int depth, int height, int width) {
    if (depth < 1 || height < 1 || width < 1) {
        throw ArgumentError("volume dimensions must be positive, got " + std::to_string(depth) +
                            "x" + std::to_string(height) + "x" + std::to_string(width));
    }
}

void check_bits(int bits) {
    if (bits != 8 && bits != 16) {
        throw ArgumentError("source bit depth must be 8 or 16, got " + std::to_string(bits));
    }
}

}  // namespace

Volume::Volume(int depth, int height, int width, double fill, int source_bit_depth)
    : depth_(depth), height_(height), width_(width), bit_depth_(source_bit_depth) {
    check_dims(depth, height, width);
    check_bits(source_bit_depth);
    data_.assign(static_cast<std::size_t>(depth) * height * width, fill);
}

Volume::Volume(int depth, int height, int width, std::vector<double> data, int source_bit_depth)
    : depth_(depth), height_(height), width_(width), data_(std::move(data)),
      bit_depth_(source_bit_depth) {
    check_dims(depth, height, width);
    check_bits(source_bit_depth);
    if (data_.size() != static_cast<std::size_t>(depth) * height * width) {
        throw ShapeError("volume payload has " + std::to_string(data_.size()) +
                         " voxels, expected " + std::to_string(depth) + "x" +
                         std::to_string(height) + "x" + std::to_string(width));
    }
}

Volume Volume::from_slices(std::span<const Image> slices, int source_bit_depth) {
    if (slices.empty()) {
        throw ArgumentError("cannot build a volume from zero slices");
    }
    const int h = slices.front().height();
    const int w = slices.front().width();
    Volume out(static_cast<int>(slices.size()), h, w, 0.0, source_bit_depth);
    for (int z = 0; z < out.depth(); ++z) {
        out.set_slice(z, slices[z]);
    }
    return out;
}

std::span<const double> Volume::slice_view(int z) const {
    if (z < 0 || z >= depth_) throw ArgumentError("slice index out of range");
    return std::span<const double>(data_).subspan(z * slice_size(), slice_size());
}

std::span<double> Volume::slice_view(int z) {
    if (z < 0 || z >= depth_) throw ArgumentError("slice index out of range");
    return std::span<double>(data_).subspan(z * slice_size(), slice_size());
}

Image Volume::slice(int z) const {
    const auto view = slice_view(z);
    return Image(height_, width_, std::vector<double>(view.begin(), view.end()));
}

void Volume::set_slice(int z, const Image& image) {
    if (image.height() != height_ || image.width() != width_) {
        throw ShapeError("slice shape does not match volume");
    }
    std::ranges::copy(image.pixels(), slice_view(z).begin());
}

void Volume::set_source_bit_depth(int bits) {
    check_bits(bits);
    bit_depth_ = bits;
}

void Volume::validate() const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
        const double v = data_[i];
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ArgumentError("intensity out of [0,1] at voxel " + std::to_string(i));
        }
    }
}

std::string shape_string(const Volume& v) {
    return std::to_string(v.depth()) + "x" + std::to_string(v.height()) + "x" +
           std::to_string(v.width());
}

}  // namespace zup
