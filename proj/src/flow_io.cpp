#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "zup/flow.hpp"

namespace zup {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'P', 'I', 'E', 'H'};

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
           (std::uint32_t{p[3]} << 24);
}

// Middlebury colour wheel: RY, YG, GC, CB, BM, MR segments.
std::vector<std::array<double, 3>> make_colour_wheel() {
    constexpr int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
    std::vector<std::array<double, 3>> wheel;
    for (int i = 0; i < RY; ++i) wheel.push_back({255, 255.0 * i / RY, 0});
    for (int i = 0; i < YG; ++i) wheel.push_back({255 - 255.0 * i / YG, 255, 0});
    for (int i = 0; i < GC; ++i) wheel.push_back({0, 255, 255.0 * i / GC});
    for (int i = 0; i < CB; ++i) wheel.push_back({0, 255 - 255.0 * i / CB, 255});
    for (int i = 0; i < BM; ++i) wheel.push_back({255.0 * i / BM, 0, 255});
    for (int i = 0; i < MR; ++i) wheel.push_back({255, 0, 255 - 255.0 * i / MR});
    return wheel;
}

}  // namespace

void write_flo(const FlowField& flow, const fs::path& path) {
    std::vector<unsigned char> buf;
    buf.reserve(12 + flow.u.size() * 8);
    buf.insert(buf.end(), std::begin(kMagic), std::end(kMagic));
    put_u32(buf, static_cast<std::uint32_t>(flow.width()));
    put_u32(buf, static_cast<std::uint32_t>(flow.height()));
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            for (const double c : {flow.u.at(y, x), flow.v.at(y, x)}) {
                put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(c)));
            }
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FlowField read_flo(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open flow file '" + path.string() + "'");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 12) throw FormatError("flow file '" + path.string() + "' is truncated");
    if (std::memcmp(buf.data(), kMagic, 4) != 0) {
        throw FormatError("flow file '" + path.string() + "' has bad magic (expected PIEH)");
    }
    const std::uint32_t w = get_u32(buf.data() + 4);
    const std::uint32_t h = get_u32(buf.data() + 8);
    if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
        throw FormatError("flow file '" + path.string() + "' has invalid dimensions");
    }
    const std::size_t expected = 12 + std::size_t{w} * h * 8;
    if (buf.size() < expected) {
        throw FormatError("flow file '" + path.string() + "' is truncated: " +
                          std::to_string(buf.size()) + " of " + std::to_string(expected) + " bytes");
    }
    FlowField flow(static_cast<int>(h), static_cast<int>(w));
    const unsigned char* p = buf.data() + 12;
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            flow.u.at(y, x) = std::bit_cast<float>(get_u32(p));
            flow.v.at(y, x) = std::bit_cast<float>(get_u32(p + 4));
            p += 8;
        }
    }
    return flow;
}

std::vector<unsigned char> flow_to_rgb(const FlowField& flow) {
    static const auto wheel = make_colour_wheel();
    const int ncols = static_cast<int>(wheel.size());
    std::vector<double> mags(flow.u.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        mags[i] = std::hypot(flow.u.pixels()[i], flow.v.pixels()[i]);
    }
    double norm = 0.0;
    if (!mags.empty()) {
        std::vector<double> sorted = mags;
        const auto k = static_cast<std::size_t>(0.99 * static_cast<double>(sorted.size() - 1));
        std::ranges::nth_element(sorted, sorted.begin() + static_cast<std::ptrdiff_t>(k));
        norm = sorted[k];
    }
    if (norm <= 1e-9) norm = 1.0;

    std::vector<unsigned char> rgb(mags.size() * 3);
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const double u = flow.u.pixels()[i] / norm;
        const double v = flow.v.pixels()[i] / norm;
        const double rad = std::min(1.0, mags[i] / norm);
        const double angle = std::atan2(-v, -u) / std::numbers::pi;
        const double fk = (angle + 1.0) / 2.0 * (ncols - 1);
        const int k0 = static_cast<int>(std::floor(fk));
        const int k1 = (k0 + 1) % ncols;
        const double f = fk - k0;
        for (int c = 0; c < 3; ++c) {
            const double col = ((1 - f) * wheel[k0][c] + f * wheel[k1][c]) / 255.0;
            const double shaded = 1.0 - rad * (1.0 - col);
            rgb[3 * i + c] = static_cast<unsigned char>(std::lround(255.0 * shaded));
        }
    }
    return rgb;
}

}  // namespace zup
