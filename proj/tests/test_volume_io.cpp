#include <doctest.h>

#include <fstream>
#include <random>

#include <tiffio.h>

#include "support/oracles.hpp"
#include "zup/volume_io.hpp"

using namespace zup;
namespace fs = std::filesystem;

namespace {

Volume random_volume(int d, int h, int w, int bits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, (1 << bits) - 1);
    Volume v(d, h, w, 0.0, bits);
    for (double& x : v.voxels()) x = dequantize(static_cast<std::uint16_t>(dist(rng)), bits);
    return v;
}

/// Every voxel distinct, so slice mix-ups are visible.
Volume synth_ramp_for_tests(int depth) {
    Volume v(depth, 3, 4);
    const double n = static_cast<double>(v.voxels().size());
    for (std::size_t i = 0; i < v.voxels().size(); ++i) v.voxels()[i] = static_cast<double>(i) / n;
    return v;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

/// Writes a TIFF page by hand with libtiff so reader error paths can be hit.
void write_page(TIFF* t, int w, int h, int bits, int spp, int fmt, std::uint16_t compression = COMPRESSION_NONE) {
    TIFFSetField(t, TIFFTAG_IMAGEWIDTH, w);
    TIFFSetField(t, TIFFTAG_IMAGELENGTH, h);
    TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, bits);
    TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, spp);
    TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, fmt);
    TIFFSetField(t, TIFFTAG_PHOTOMETRIC, spp == 1 ? PHOTOMETRIC_MINISBLACK : PHOTOMETRIC_RGB);
    TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(t, TIFFTAG_COMPRESSION, compression);
    TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, h);
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * spp * (bits / 8), 255);
    for (int y = 0; y < h; ++y) TIFFWriteScanline(t, row.data(), y, 0);
    TIFFWriteDirectory(t);
}

}  // namespace

TEST_CASE("8-bit TIFF of value 255 reads as 1.0") {
    const auto dir = test::temp_dir("io");
    const auto path = dir / "white.tif";
    {
        TIFF* t = TIFFOpen(path.c_str(), "w");
        for (int i = 0; i < 3; ++i) write_page(t, 4, 4, 8, 1, SAMPLEFORMAT_UINT);
        TIFFClose(t);
    }
    const Volume v = read_volume(path);
    CHECK(v.depth() == 3);
    CHECK(v.height() == 4);
    CHECK(v.width() == 4);
    CHECK(v.source_bit_depth() == 8);
    for (const double x : v.voxels()) CHECK(x == 1.0);
}

TEST_CASE("deflate-compressed TIFF pages decode") {
    const auto dir = test::temp_dir("io");
    const auto path = dir / "deflate.tif";
    {
        TIFF* t = TIFFOpen(path.c_str(), "w");
        for (int i = 0; i < 2; ++i) write_page(t, 5, 3, 16, 1, SAMPLEFORMAT_UINT, COMPRESSION_ADOBE_DEFLATE);
        TIFFClose(t);
    }
    const Volume v = read_volume(path);
    CHECK(v.depth() == 2);
    CHECK(v.source_bit_depth() == 16);
    // Rows were filled with 0xFF bytes -> 65535 in either byte order.
    for (const double x : v.voxels()) CHECK(x == 1.0);
}

TEST_CASE("TIFF reader reports the offending page") {
    const auto dir = test::temp_dir("io");
    SUBCASE("mixed dimensions") {
        const auto path = dir / "mixed.tif";
        TIFF* t = TIFFOpen(path.c_str(), "w");
        write_page(t, 4, 4, 8, 1, SAMPLEFORMAT_UINT);
        write_page(t, 4, 4, 8, 1, SAMPLEFORMAT_UINT);
        write_page(t, 5, 4, 8, 1, SAMPLEFORMAT_UINT);
        TIFFClose(t);
        try {
            (void)read_volume(path);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("page 2") != std::string::npos);
        }
    }
    SUBCASE("colour") {
        const auto path = dir / "rgb.tif";
        TIFF* t = TIFFOpen(path.c_str(), "w");
        write_page(t, 4, 4, 8, 3, SAMPLEFORMAT_UINT);
        TIFFClose(t);
        CHECK_THROWS_AS((void)read_volume(path), FormatError);
    }
    SUBCASE("float samples") {
        const auto path = dir / "float.tif";
        TIFF* t = TIFFOpen(path.c_str(), "w");
        write_page(t, 4, 4, 32, 1, SAMPLEFORMAT_IEEEFP);
        TIFFClose(t);
        CHECK_THROWS_WITH_AS((void)read_volume(path), doctest::Contains("page 0"), FormatError);
    }
    SUBCASE("unreadable") {
        write_bytes(dir / "junk.tif", {1, 2, 3, 4, 5});
        CHECK_THROWS_AS((void)read_volume(dir / "junk.tif"), IoError);
        CHECK_THROWS_AS((void)read_volume(dir / "missing.tif"), IoError);
    }
}

TEST_CASE("raw volume with sidecar normalizes by 2^bits - 1") {
    const auto dir = test::temp_dir("io");
    const auto path = dir / "v.raw";
    std::vector<unsigned char> bytes;
    for (int k = 0; k < 8; ++k) {
        bytes.push_back(static_cast<unsigned char>(k));
        bytes.push_back(0);
    }
    write_bytes(path, bytes);
    std::ofstream(raw_sidecar_path(path))
        << R"({"depth":2,"height":2,"width":2,"bit_depth":16,"endianness":"little"})";
    const Volume v = read_volume(path);
    CHECK(v.source_bit_depth() == 16);
    // k / 65535, evaluated independently.
    const double expected[8] = {0.0, 1.5259021896696422e-05, 3.0518043793392844e-05, 4.5777065690089265e-05,
                                6.103608758678569e-05, 7.629510948348211e-05, 9.155413138017853e-05,
                                0.00010681315327687495};
    for (int k = 0; k < 8; ++k) CHECK(v.voxels()[k] == doctest::Approx(expected[k]).epsilon(1e-15));

    SUBCASE("payload size must match the sidecar") {
        bytes.pop_back();
        write_bytes(path, bytes);
        CHECK_THROWS_AS((void)read_volume(path), FormatError);
    }
    SUBCASE("big-endian payload") {
        std::vector<unsigned char> be;
        for (int k = 0; k < 8; ++k) {
            be.push_back(0);
            be.push_back(static_cast<unsigned char>(k));
        }
        write_bytes(path, be);
        std::ofstream(raw_sidecar_path(path))
            << R"({"depth":2,"height":2,"width":2,"bit_depth":16,"endianness":"big"})";
        CHECK(read_volume(path).voxels()[7] == doctest::Approx(7.0 / 65535).epsilon(1e-15));
    }
}

TEST_CASE("write_volume quantizes with ties away from zero") {
    const auto dir = test::temp_dir("io");
    CHECK(quantize(0.5, 8) == 128);
    CHECK(quantize(1.0, 16) == 65535);
    CHECK(quantize(0.0, 16) == 0);

    Volume half(2, 3, 3, 0.5, 8);
    write_volume(half, dir / "half.raw");
    std::ifstream in(dir / "half.raw", std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 18);
    for (const auto b : bytes) CHECK(b == 128);

    Volume one(1, 2, 2, 1.0, 16);
    write_volume(one, dir / "one.raw");
    std::ifstream in16(dir / "one.raw", std::ios::binary);
    std::vector<unsigned char> b16((std::istreambuf_iterator<char>(in16)), std::istreambuf_iterator<char>());
    REQUIRE(b16.size() == 8);
    for (const auto b : b16) CHECK(b == 0xFF);
}

TEST_CASE("round trip is the identity on quantized volumes") {
    const auto dir = test::temp_dir("io");
    for (const int bits : {8, 16}) {
        for (const char* ext : {".tif", ".raw"}) {
            CAPTURE(bits);
            CAPTURE(ext);
            Volume v = random_volume(3, 7, 5, bits, 40 + bits);
            v.set_voxel_size(VoxelSize{40.0, 8.0, 8.0});
            const auto path = dir / (std::string("rt") + std::to_string(bits) + ext);
            write_volume(v, path);
            const Volume back = read_volume(path);
            CHECK(back == v);
            // Quantizing an arbitrary volume then round-tripping is also exact.
            Volume noisy(2, 4, 4, 0.0, bits);
            std::mt19937_64 rng(bits);
            std::uniform_real_distribution<double> d(0.0, 1.0);
            for (double& x : noisy.voxels()) x = d(rng);
            write_volume(noisy, path);
            CHECK(read_volume(path) == quantized(noisy));
        }
    }
}

TEST_CASE("probe_volume reads dimensions without samples") {
    const auto dir = test::temp_dir("io");
    const Volume v = random_volume(4, 6, 9, 16, 3);
    write_volume(v, dir / "p.tif");
    const VolumeMeta m = probe_volume(dir / "p.tif");
    CHECK(m.depth == 4);
    CHECK(m.height == 6);
    CHECK(m.width == 9);
    CHECK(m.bit_depth == 16);
    CHECK_THROWS_AS((void)guess_format("x.h5"), ArgumentError);
}

TEST_CASE("generate_triplets enumerates stride-2 windows sharing endpoints") {
    CHECK(triplet_indices(5) == std::vector<std::array<int, 3>>{{0, 1, 2}, {2, 3, 4}});
    CHECK(triplet_indices(4) == std::vector<std::array<int, 3>>{{0, 1, 2}});
    const auto big = triplet_indices(2001);
    CHECK(big.size() == 1000);
    CHECK(big.back() == std::array<int, 3>{1998, 1999, 2000});
    CHECK_THROWS_AS((void)triplet_indices(2), ArgumentError);

    const Volume v = synth_ramp_for_tests(7);
    const auto trips = generate_triplets(v);
    REQUIRE(trips.size() == 3);
    CHECK(trips[1].z_indices == std::array<int, 3>{2, 3, 4});
    CHECK(trips[1].middle == v.slice(3));
}

TEST_CASE("every interior odd index is a middle slice exactly once") {
    for (int depth = 3; depth <= 41; depth += 2) {
        std::vector<int> seen(depth, 0);
        for (const auto& t : triplet_indices(depth)) ++seen[t[1]];
        for (int z = 0; z < depth; ++z) CHECK(seen[z] == (z % 2 == 1 ? 1 : 0));
    }
}

TEST_CASE("crop_subvolumes tiles in z, y, x order") {
    Volume v(8, 8, 8);
    for (int z = 0; z < 8; ++z)
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) v.at(z, y, x) = (z * 64 + y * 8 + x) / 511.0;
    const auto tiles = crop_subvolumes(v, {4, 4, 4}, 100);
    REQUIRE(tiles.size() == 8);
    // Origin of tile i is (z, y, x) = 4 * bits of i in z-major order.
    for (int i = 0; i < 8; ++i) {
        const int z0 = 4 * (i / 4), y0 = 4 * ((i / 2) % 2), x0 = 4 * (i % 2);
        CHECK(tiles[i].at(0, 0, 0) == v.at(z0, y0, x0));
        CHECK(tiles[i].at(3, 3, 3) == v.at(z0 + 3, y0 + 3, x0 + 3));
    }
    CHECK(crop_subvolumes(Volume(10, 10, 10), {4, 4, 4}, 5).size() == 5);
    CHECK(crop_subvolumes(Volume(10, 10, 10), {4, 4, 4}, 100).size() == 8);
    CHECK(crop_subvolumes(Volume(6, 5, 5), {6, 5, 5}, 3).size() == 1);
    CHECK_THROWS_AS((void)crop_subvolumes(v, {9, 4, 4}, 1), ArgumentError);
}

TEST_CASE("decimate_z keeps every factor-th slice") {
    const Volume v9 = synth_ramp_for_tests(9);
    const Decimation d = decimate_z(v9, 4);
    CHECK(d.kept_indices == std::vector<int>{0, 4, 8});
    CHECK(d.skipped_indices == std::vector<int>{1, 2, 3, 5, 6, 7});
    CHECK(d.trimmed == 0);
    CHECK(d.kept.depth() == 3);
    CHECK(d.kept.slice(1) == v9.slice(4));

    const Decimation d3 = decimate_z(synth_ramp_for_tests(3), 2);
    CHECK(d3.kept_indices == std::vector<int>{0, 2});
    CHECK(d3.skipped_indices == std::vector<int>{1});

    const Decimation d10 = decimate_z(synth_ramp_for_tests(10), 2);
    CHECK(d10.kept_indices == std::vector<int>{0, 2, 4, 6, 8});
    CHECK(d10.skipped_indices == std::vector<int>{1, 3, 5, 7});
    CHECK(d10.trimmed == 1);

    CHECK_THROWS_AS((void)decimate_z(synth_ramp_for_tests(4), 4), ArgumentError);
    CHECK_THROWS_AS((void)decimate_z(v9, 3), ArgumentError);
}

TEST_CASE("interleaving kept and skipped slices rebuilds the volume") {
    for (const int factor : {2, 4, 8}) {
        const Volume v = synth_ramp_for_tests(4 * factor + 1);
        const Volume before = v;
        const Decimation d = decimate_z(v, factor);
        std::vector<Image> rebuilt(v.depth());
        for (std::size_t i = 0; i < d.kept_indices.size(); ++i) rebuilt[d.kept_indices[i]] = d.kept.slice(static_cast<int>(i));
        for (const int z : d.skipped_indices) rebuilt[z] = v.slice(z);
        CHECK(Volume::from_slices(rebuilt) == v);
        CHECK(v == before);
    }
}
