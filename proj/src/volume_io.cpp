#include "zup/volume_io.hpp"

#include <tiffio.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace zup {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxPages = 1 << 20;

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

struct TiffCloser {
    void operator()(TIFF* tif) const noexcept {
        if (tif != nullptr) TIFFClose(tif);
    }
};
using TiffHandle = std::unique_ptr<TIFF, TiffCloser>;

TiffHandle open_tiff(const fs::path& path, const char* mode) {
    // libtiff prints to stderr by default; errors are reported through exceptions instead.
    TIFFSetWarningHandler(nullptr);
    TIFFSetErrorHandler(nullptr);
    TiffHandle tif(TIFFOpen(path.string().c_str(), mode));
    if (!tif) {
        throw IoError("cannot open TIFF '" + path.string() + "'");
    }
    return tif;
}

std::optional<VoxelSize> parse_voxel_size(const json& j) {
    if (!j.is_array() || j.size() != 3) return std::nullopt;
    return VoxelSize{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json voxel_size_json(const VoxelSize& vs) { return json::array({vs.z, vs.y, vs.x}); }

struct PageInfo {
    int width = 0;
    int height = 0;
    int bits = 0;
};

PageInfo inspect_page(TIFF* tif, int page) {
    const auto fail = [&](const std::string& what) {
        return FormatError("TIFF page " + std::to_string(page) + ": " + what);
    };
    std::uint32_t w = 0;
    std::uint32_t h = 0;
    std::uint16_t bits = 0;
    std::uint16_t spp = 1;
    std::uint16_t fmt = SAMPLEFORMAT_UINT;
    std::uint16_t photometric = PHOTOMETRIC_MINISBLACK;
    if (!TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &w) || !TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &h)) {
        throw fail("missing image dimensions");
    }
    TIFFGetFieldDefaulted(tif, TIFFTAG_BITSPERSAMPLE, &bits);
    TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLEFORMAT, &fmt);
    TIFFGetField(tif, TIFFTAG_PHOTOMETRIC, &photometric);
    if (spp != 1 || (photometric != PHOTOMETRIC_MINISBLACK && photometric != PHOTOMETRIC_MINISWHITE)) {
        throw fail("only single-channel grayscale is supported");
    }
    if (fmt != SAMPLEFORMAT_UINT) {
        throw fail("unsupported sample format (only unsigned integer samples)");
    }
    if (bits != 8 && bits != 16) {
        throw fail("unsupported bit depth " + std::to_string(bits));
    }
    if (photometric == PHOTOMETRIC_MINISWHITE) {
        throw fail("inverted (min-is-white) grayscale is not supported");
    }
    return {static_cast<int>(w), static_cast<int>(h), bits};
}

Volume read_tiff(const fs::path& path) {
    auto tif = open_tiff(path, "r");
    std::vector<double> data;
    PageInfo first;
    int page = 0;
    std::optional<VoxelSize> voxel_size;
    do {
        if (page >= kMaxPages) throw FormatError("TIFF has too many pages");
        const PageInfo info = inspect_page(tif.get(), page);
        if (page == 0) {
            first = info;
            char* desc = nullptr;
            if (TIFFGetField(tif.get(), TIFFTAG_IMAGEDESCRIPTION, &desc) && desc != nullptr) {
                const json j = json::parse(desc, nullptr, false);
                if (j.is_object() && j.contains("voxel_size")) {
                    voxel_size = parse_voxel_size(j["voxel_size"]);
                }
            }
        } else if (info.width != first.width || info.height != first.height) {
            throw FormatError("TIFF page " + std::to_string(page) + ": dimensions " +
                              std::to_string(info.height) + "x" + std::to_string(info.width) +
                              " differ from first page " + std::to_string(first.height) + "x" +
                              std::to_string(first.width));
        } else if (info.bits != first.bits) {
            throw FormatError("TIFF page " + std::to_string(page) + ": bit depth differs from first page");
        }

        const double scale = 1.0 / ((1 << info.bits) - 1);
        std::vector<unsigned char> row(static_cast<std::size_t>(TIFFScanlineSize(tif.get())));
        for (int y = 0; y < info.height; ++y) {
            if (TIFFReadScanline(tif.get(), row.data(), static_cast<std::uint32_t>(y), 0) < 0) {
                throw FormatError("TIFF page " + std::to_string(page) + ": cannot decode row " +
                                  std::to_string(y));
            }
            for (int x = 0; x < info.width; ++x) {
                std::uint32_t sample = 0;
                if (info.bits == 8) {
                    sample = row[x];
                } else {
                    std::uint16_t s16 = 0;
                    std::memcpy(&s16, row.data() + 2 * x, 2);  // libtiff delivers native order
                    sample = s16;
                }
                data.push_back(sample * scale);
            }
        }
        ++page;
    } while (TIFFReadDirectory(tif.get()));

    Volume v(page, first.height, first.width, std::move(data), first.bits);
    v.set_voxel_size(voxel_size);
    return v;
}

void write_tiff(const Volume& volume, const fs::path& path) {
    auto tif = open_tiff(path, volume.voxels().size() * 2 > 0xF0000000ull ? "w8" : "w");
    const int bits = volume.source_bit_depth();
    std::string desc;
    if (volume.voxel_size()) {
        desc = json{{"voxel_size", voxel_size_json(*volume.voxel_size())}}.dump();
    }
    std::vector<unsigned char> row(static_cast<std::size_t>(volume.width()) * (bits / 8));
    for (int z = 0; z < volume.depth(); ++z) {
        TIFF* t = tif.get();
        TIFFSetField(t, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(volume.width()));
        TIFFSetField(t, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(volume.height()));
        TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, static_cast<std::uint16_t>(bits));
        TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(1));
        TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_UINT);
        TIFFSetField(t, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
        TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
        TIFFSetField(t, TIFFTAG_COMPRESSION, COMPRESSION_NONE);
        TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, TIFFDefaultStripSize(t, 0));
        TIFFSetField(t, TIFFTAG_SUBFILETYPE, FILETYPE_PAGE);
        TIFFSetField(t, TIFFTAG_PAGENUMBER, static_cast<std::uint16_t>(z),
                     static_cast<std::uint16_t>(volume.depth()));
        if (!desc.empty()) TIFFSetField(t, TIFFTAG_IMAGEDESCRIPTION, desc.c_str());

        for (int y = 0; y < volume.height(); ++y) {
            for (int x = 0; x < volume.width(); ++x) {
                const std::uint16_t q = quantize(volume.at(z, y, x), bits);
                if (bits == 8) {
                    row[x] = static_cast<unsigned char>(q);
                } else {
                    std::memcpy(row.data() + 2 * x, &q, 2);
                }
            }
            if (TIFFWriteScanline(t, row.data(), static_cast<std::uint32_t>(y), 0) < 0) {
                throw IoError("failed writing TIFF '" + path.string() + "' page " + std::to_string(z));
            }
        }
        if (!TIFFWriteDirectory(t)) {
            throw IoError("failed writing TIFF directory for page " + std::to_string(z));
        }
    }
}

json read_sidecar(const fs::path& raw) {
    const fs::path sidecar = raw_sidecar_path(raw);
    std::ifstream in(sidecar);
    if (!in) throw IoError("cannot open raw sidecar '" + sidecar.string() + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw FormatError("raw sidecar '" + sidecar.string() + "' is not a JSON object");
    }
    for (const char* key : {"depth", "height", "width", "bit_depth"}) {
        if (!j.contains(key) || !j[key].is_number_integer()) {
            throw FormatError(std::string("raw sidecar missing integer key '") + key + "'");
        }
    }
    return j;
}

bool sidecar_little_endian(const json& j) {
    const std::string endian = j.value("endianness", std::string("little"));
    if (endian != "little" && endian != "big") {
        throw FormatError("raw sidecar endianness must be 'little' or 'big'");
    }
    return endian == "little";
}

Volume read_raw(const fs::path& path) {
    const json j = read_sidecar(path);
    const int depth = j["depth"];
    const int height = j["height"];
    const int width = j["width"];
    const int bits = j["bit_depth"];
    if (bits != 8 && bits != 16) throw FormatError("raw sidecar bit_depth must be 8 or 16");
    if (depth < 1 || height < 1 || width < 1) throw FormatError("raw sidecar dimensions must be positive");
    const bool little = sidecar_little_endian(j);

    const std::size_t count = static_cast<std::size_t>(depth) * height * width;
    const std::size_t bytes = count * (bits / 8);
    std::error_code ec;
    const auto file_size = fs::file_size(path, ec);
    if (ec) throw IoError("cannot stat raw file '" + path.string() + "'");
    if (file_size != bytes) {
        throw FormatError("raw file '" + path.string() + "' holds " + std::to_string(file_size) +
                          " bytes, sidecar implies " + std::to_string(bytes));
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raw file '" + path.string() + "'");
    std::vector<unsigned char> buf(bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw IoError("short read on raw file '" + path.string() + "'");

    std::vector<double> data(count);
    const double scale = 1.0 / ((1 << bits) - 1);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t s = 0;
        if (bits == 8) {
            s = buf[i];
        } else {
            const unsigned lo = buf[2 * i + (little ? 0 : 1)];
            const unsigned hi = buf[2 * i + (little ? 1 : 0)];
            s = lo | (hi << 8);
        }
        data[i] = s * scale;
    }
    Volume v(depth, height, width, std::move(data), bits);
    if (j.contains("voxel_size")) v.set_voxel_size(parse_voxel_size(j["voxel_size"]));
    return v;
}

void write_raw(const Volume& volume, const fs::path& path) {
    const int bits = volume.source_bit_depth();
    std::vector<unsigned char> buf;
    buf.reserve(volume.voxels().size() * (bits / 8));
    for (const double v : volume.voxels()) {
        const std::uint16_t q = quantize(v, bits);
        if (bits == 8) {
            buf.push_back(static_cast<unsigned char>(q));
        } else {
            buf.push_back(static_cast<unsigned char>(q & 0xFF));
            buf.push_back(static_cast<unsigned char>(q >> 8));
        }
    }
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!out) throw IoError("failed writing '" + path.string() + "'");
    }
    json side = {{"depth", volume.depth()},
                 {"height", volume.height()},
                 {"width", volume.width()},
                 {"bit_depth", bits},
                 {"endianness", "little"}};
    if (volume.voxel_size()) side["voxel_size"] = voxel_size_json(*volume.voxel_size());
    std::ofstream out(raw_sidecar_path(path), std::ios::trunc);
    if (!out) throw IoError("cannot write raw sidecar for '" + path.string() + "'");
    out << side.dump(2) << '\n';
}

}  // namespace

VolumeFormat guess_format(const fs::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".tif" || ext == ".tiff") return VolumeFormat::TiffStack;
    if (ext == ".raw" || ext == ".bin") return VolumeFormat::Raw;
    throw ArgumentError("cannot infer volume format from '" + path.string() +
                        "' (expected .tif, .tiff or .raw)");
}

fs::path raw_sidecar_path(const fs::path& raw) {
    fs::path p = raw;
    p += ".json";
    return p;
}

VolumeMeta probe_volume(const fs::path& path, std::optional<VolumeFormat> format_hint) {
    const VolumeFormat fmt = format_hint.value_or(guess_format(path));
    VolumeMeta meta;
    meta.path = path;
    meta.format = fmt;
    if (fmt == VolumeFormat::Raw) {
        const json j = read_sidecar(path);
        meta.depth = j["depth"];
        meta.height = j["height"];
        meta.width = j["width"];
        meta.bit_depth = j["bit_depth"];
        if (j.contains("voxel_size")) meta.voxel_size = parse_voxel_size(j["voxel_size"]);
        return meta;
    }
    auto tif = open_tiff(path, "r");
    const PageInfo info = inspect_page(tif.get(), 0);
    meta.height = info.height;
    meta.width = info.width;
    meta.bit_depth = info.bits;
    meta.depth = TIFFNumberOfDirectories(tif.get());
    return meta;
}

Volume read_volume(const fs::path& path, std::optional<VolumeFormat> format_hint) {
    if (!fs::exists(path)) throw IoError("no such file '" + path.string() + "'");
    const VolumeFormat fmt = format_hint.value_or(guess_format(path));
    return fmt == VolumeFormat::Raw ? read_raw(path) : read_tiff(path);
}

void write_volume(const Volume& volume, const fs::path& path, std::optional<VolumeFormat> format) {
    if (volume.depth() < 1) throw ArgumentError("cannot write a volume with depth 0");
    const VolumeFormat fmt = format.value_or(guess_format(path));
    if (fmt == VolumeFormat::Raw) {
        write_raw(volume, path);
    } else {
        write_tiff(volume, path);
    }
}

std::uint16_t quantize(double value, int bit_depth) noexcept {
    const double max = static_cast<double>((1 << bit_depth) - 1);
    const double scaled = std::round(std::clamp(value, 0.0, 1.0) * max);
    return static_cast<std::uint16_t>(scaled);
}

double dequantize(std::uint16_t sample, int bit_depth) noexcept {
    return sample * (1.0 / ((1 << bit_depth) - 1));
}

Volume quantized(const Volume& volume) {
    Volume out = volume;
    const int bits = volume.source_bit_depth();
    for (double& v : out.voxels()) v = dequantize(quantize(v, bits), bits);
    return out;
}

std::vector<std::array<int, 3>> triplet_indices(int depth) {
    if (depth < 3) {
        throw ArgumentError("triplets need depth >= 3, got " + std::to_string(depth));
    }
    std::vector<std::array<int, 3>> out;
    out.reserve(static_cast<std::size_t>((depth - 1) / 2));
    for (int z = 0; z + 2 < depth; z += 2) out.push_back({z, z + 1, z + 2});
    return out;
}

std::vector<SliceTriplet> generate_triplets(const Volume& volume) {
    std::vector<SliceTriplet> out;
    for (const auto& idx : triplet_indices(volume.depth())) {
        out.push_back({volume.slice(idx[0]), volume.slice(idx[1]), volume.slice(idx[2]), idx});
    }
    return out;
}

std::vector<Volume> crop_subvolumes(const Volume& volume, SubShape s, int max_count) {
    if (s.depth < 1 || s.height < 1 || s.width < 1) {
        throw ArgumentError("sub-volume shape must be positive");
    }
    if (s.depth > volume.depth() || s.height > volume.height() || s.width > volume.width()) {
        throw ArgumentError("sub-volume shape " + std::to_string(s.depth) + "x" +
                            std::to_string(s.height) + "x" + std::to_string(s.width) +
                            " exceeds volume " + shape_string(volume));
    }
    if (max_count < 0) throw ArgumentError("max_count must be non-negative");
    std::vector<Volume> tiles;
    for (int z0 = 0; z0 + s.depth <= volume.depth(); z0 += s.depth) {
        for (int y0 = 0; y0 + s.height <= volume.height(); y0 += s.height) {
            for (int x0 = 0; x0 + s.width <= volume.width(); x0 += s.width) {
                if (static_cast<int>(tiles.size()) >= max_count) return tiles;
                Volume tile(s.depth, s.height, s.width, 0.0, volume.source_bit_depth());
                tile.set_voxel_size(volume.voxel_size());
                for (int z = 0; z < s.depth; ++z) {
                    for (int y = 0; y < s.height; ++y) {
                        const auto src = volume.slice_view(z0 + z).subspan(
                            static_cast<std::size_t>(y0 + y) * volume.width() + x0, s.width);
                        std::ranges::copy(src, &tile.at(z, y, 0));
                    }
                }
                tiles.push_back(std::move(tile));
            }
        }
    }
    return tiles;
}

int aligned_depth(int depth, int factor) { return ((depth - 1) / factor) * factor + 1; }

Decimation decimate_z(const Volume& volume, int factor) {
    if (factor != 2 && factor != 4 && factor != 8) {
        throw ArgumentError("decimation factor must be 2, 4 or 8, got " + std::to_string(factor));
    }
    if (volume.depth() < factor + 1) {
        throw ArgumentError("volume depth " + std::to_string(volume.depth()) +
                            " is too shallow for factor " + std::to_string(factor) + " (need >= " +
                            std::to_string(factor + 1) + ")");
    }
    Decimation out;
    const int usable = aligned_depth(volume.depth(), factor);
    out.trimmed = volume.depth() - usable;
    if (out.trimmed > 0) {
        spdlog::warn("decimate_z: trimming {} trailing slice(s) so depth {} aligns with factor {}",
                     out.trimmed, volume.depth(), factor);
    }
    std::vector<Image> kept;
    for (int z = 0; z < usable; ++z) {
        if (z % factor == 0) {
            out.kept_indices.push_back(z);
            kept.push_back(volume.slice(z));
        } else {
            out.skipped_indices.push_back(z);
        }
    }
    out.kept = Volume::from_slices(kept, volume.source_bit_depth());
    if (volume.voxel_size()) {
        VoxelSize vs = *volume.voxel_size();
        vs.z *= factor;
        out.kept.set_voxel_size(vs);
    }
    return out;
}

}  // namespace zup
