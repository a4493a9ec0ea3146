#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zup/image.hpp"

namespace zup {

/// Physical voxel edge lengths in nanometres, ordered (z, y, x).
struct VoxelSize {
    double z = 1.0;
    double y = 1.0;
    double x = 1.0;

    friend bool operator==(const VoxelSize&, const VoxelSize&) = default;
};

/// Dense z-major stack of unit-interval intensities.
///
/// Intensities always lie in [0, 1]; the bit depth of the file the volume came
/// from is kept so that writing it back reproduces the original samples.
class Volume {
public:
    Volume() = default;
    Volume(int depth, int height, int width, double fill = 0.0, int source_bit_depth = 8);
    Volume(int depth, int height, int width, std::vector<double> data, int source_bit_depth = 8);

    /// Stacks equally-shaped slices in order.
    static Volume from_slices(std::span<const Image> slices, int source_bit_depth = 8);

    [[nodiscard]] int depth() const noexcept { return depth_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] std::size_t slice_size() const noexcept {
        return static_cast<std::size_t>(height_) * width_;
    }

    [[nodiscard]] double at(int z, int y, int x) const noexcept {
        return data_[z * slice_size() + static_cast<std::size_t>(y) * width_ + x];
    }
    [[nodiscard]] double& at(int z, int y, int x) noexcept {
        return data_[z * slice_size() + static_cast<std::size_t>(y) * width_ + x];
    }

    [[nodiscard]] std::span<const double> voxels() const noexcept { return data_; }
    [[nodiscard]] std::span<double> voxels() noexcept { return data_; }
    [[nodiscard]] std::span<const double> slice_view(int z) const;
    [[nodiscard]] std::span<double> slice_view(int z);

    [[nodiscard]] Image slice(int z) const;
    void set_slice(int z, const Image& image);

    [[nodiscard]] int source_bit_depth() const noexcept { return bit_depth_; }
    void set_source_bit_depth(int bits);

    [[nodiscard]] const std::optional<VoxelSize>& voxel_size() const noexcept { return voxel_size_; }
    void set_voxel_size(std::optional<VoxelSize> size) { voxel_size_ = size; }

    /// Throws if any intensity is outside [0, 1] or non-finite.
    void validate() const;

    friend bool operator==(const Volume&, const Volume&) = default;

private:
    int depth_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
    std::optional<VoxelSize> voxel_size_;
    int bit_depth_ = 8;
};

/// Three consecutive slices: two inputs and the withheld middle.
struct SliceTriplet {
    Image first;
    Image middle;
    Image last;
    std::array<int, 3> z_indices{};
};

[[nodiscard]] std::string shape_string(const Volume& v);

}  // namespace zup
