#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "zup/volume.hpp"

namespace zup {

enum class VolumeFormat { TiffStack, Raw };

/// Describes a volume file without holding its samples.
struct VolumeMeta {
    std::filesystem::path path;
    VolumeFormat format = VolumeFormat::TiffStack;
    int bit_depth = 8;
    int depth = 0;
    int height = 0;
    int width = 0;
    std::optional<VoxelSize> voxel_size;
};

/// Picks a format from the file extension (.tif/.tiff or .raw).
[[nodiscard]] VolumeFormat guess_format(const std::filesystem::path& path);

/// Location of the JSON sidecar that accompanies a raw volume: "<path>.json".
[[nodiscard]] std::filesystem::path raw_sidecar_path(const std::filesystem::path& raw);

[[nodiscard]] VolumeMeta probe_volume(const std::filesystem::path& path,
                                      std::optional<VolumeFormat> format_hint = std::nullopt);

/// Loads a multi-page grayscale TIFF or a raw volume with JSON sidecar.
/// Intensities are divided by 2^bits - 1.
[[nodiscard]] Volume read_volume(const std::filesystem::path& path,
                                 std::optional<VolumeFormat> format_hint = std::nullopt);

/// Quantizes with round-half-away-from-zero at the volume's source bit depth.
void write_volume(const Volume& volume, const std::filesystem::path& path,
                  std::optional<VolumeFormat> format = std::nullopt);

[[nodiscard]] std::uint16_t quantize(double value, int bit_depth) noexcept;
[[nodiscard]] double dequantize(std::uint16_t sample, int bit_depth) noexcept;

/// Returns a copy of `volume` whose intensities are snapped to its bit depth grid.
[[nodiscard]] Volume quantized(const Volume& volume);

/// Slices {z, z+1, z+2} for z = 0, 2, 4, ...; count = floor((depth-1)/2).
[[nodiscard]] std::vector<SliceTriplet> generate_triplets(const Volume& volume);

/// Index-only form of generate_triplets.
[[nodiscard]] std::vector<std::array<int, 3>> triplet_indices(int depth);

struct SubShape {
    int depth = 0;
    int height = 0;
    int width = 0;
};

/// Non-overlapping tiles in z-major, then y, then x order; at most max_count.
[[nodiscard]] std::vector<Volume> crop_subvolumes(const Volume& volume, SubShape sub_shape,
                                                  int max_count);

struct Decimation {
    Volume kept;
    std::vector<int> kept_indices;
    std::vector<int> skipped_indices;
    int trimmed = 0;  ///< trailing slices dropped so that depth = k*factor + 1
};

/// Keeps every factor-th slice. factor must be 2, 4 or 8.
[[nodiscard]] Decimation decimate_z(const Volume& volume, int factor);

/// Number of leading slices usable for a decimation: largest k*factor+1 <= depth.
[[nodiscard]] int aligned_depth(int depth, int factor);

}  // namespace zup
