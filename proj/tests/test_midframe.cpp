#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "zup/metrics.hpp"
#include "zup/midframe.hpp"
#include "zup/synthetic.hpp"
#include "zup/warp.hpp"

using namespace zup;

namespace {

Image average(const Image& a, const Image& b) {
    Image out(a.height(), a.width());
    for (std::size_t i = 0; i < a.size(); ++i) out.pixels()[i] = 0.5 * (a.pixels()[i] + b.pixels()[i]);
    return out;
}

Volume random_stack(int depth, int h, int w, std::uint64_t seed) {
    Volume v(depth, h, w);
    for (int z = 0; z < depth; ++z) v.set_slice(z, synth::smooth_texture(h, w, 1.5, seed + z));
    return v;
}

}  // namespace

TEST_CASE("midframe_flows splitting rules") {
    SUBCASE("symmetric") {
        const auto [tf, tl] = midframe_flows(FlowField(4, 4, 4, 0), FlowField(4, 4, -4, 0), SplitMode::Symmetric);
        CHECK(tf.u.at(1, 1) == -2.0);
        CHECK(tl.u.at(1, 1) == 2.0);
        CHECK(tf.v.at(1, 1) == 0.0);
    }
    SUBCASE("zero") {
        const auto [tf, tl] = midframe_flows(FlowField(4, 4), FlowField(4, 4), SplitMode::Symmetric);
        CHECK(tf.max_magnitude() == 0.0);
        CHECK(tl.max_magnitude() == 0.0);
    }
    SUBCASE("simple") {
        const auto [tf, tl] = midframe_flows(FlowField(4, 4, 4, 0), FlowField(4, 4, -3, 0), SplitMode::Simple);
        CHECK(tf.u.at(2, 2) == -2.0);
        CHECK(tl.u.at(2, 2) == 1.5);
    }
    CHECK_THROWS_AS((void)midframe_flows(FlowField(4, 4), FlowField(5, 4), SplitMode::Simple), ShapeError);
}

TEST_CASE("backward_warp") {
    std::mt19937_64 rng(1);
    const Image img = test::random_image(9, 11, rng);
    CHECK(backward_warp(img, FlowField(9, 11)) == img);

    const Image shifted = backward_warp(img, FlowField(9, 11, 1.0, 0.0));
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 10; ++x) CHECK(shifted.at(y, x) == img.at(y, x + 1));
        CHECK(shifted.at(y, 10) == img.at(y, 10));
    }

    Image ramp(6, 16);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 16; ++x) ramp.at(y, x) = x / 16.0;
    const Image half = backward_warp(ramp, FlowField(6, 16, 0.5, 0.0));
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 15; ++x) CHECK(half.at(y, x) == doctest::Approx((x + 0.5) / 16.0).epsilon(1e-14));

    FlowField nan_flow(9, 11);
    nan_flow.u.at(2, 2) = std::nan("");
    CHECK_THROWS_AS((void)backward_warp(img, nan_flow), ArgumentError);
    CHECK_THROWS_AS((void)backward_warp(img, FlowField(9, 10)), ShapeError);
}

TEST_CASE("identical neighbours are a fixed point") {
    const Image z = synth::smooth_texture(48, 48, 2.0, 8);
    const MidframeResult r = synthesize_midframe(z, z);
    CHECK(test::max_abs_diff(r.slice, z) <= 1e-3);
}

TEST_CASE("translating disk lands at the analytic midpoint") {
    const Image z1 = synth::disk(96, 96, 32, 32, 10);
    const Image z3 = synth::disk(96, 96, 40, 32, 10);
    const MidframeResult r = synthesize_midframe(z1, z3);
    const auto [cx, cy] = test::centroid(r.slice);
    CHECK(std::hypot(cx - 36.0, cy - 32.0) < 0.5);

    SUBCASE("approximate symmetry under input swap") {
        const MidframeResult s = synthesize_midframe(z3, z1);
        CHECK(test::max_abs_diff(r.slice, s.slice) <= 2e-2);
    }
    SUBCASE("convex fusion") {
        const Image w1 = backward_warp(z1, r.flow_to_first);
        const Image w3 = backward_warp(z3, r.flow_to_last);
        for (std::size_t i = 0; i < r.slice.size(); ++i) {
            const double lo = std::min(w1.pixels()[i], w3.pixels()[i]);
            const double hi = std::max(w1.pixels()[i], w3.pixels()[i]);
            CHECK(r.slice.pixels()[i] >= lo - 1e-12);
            CHECK(r.slice.pixels()[i] <= hi + 1e-12);
            CHECK(r.fusion_weights.pixels()[i] >= 0.0);
            CHECK(r.fusion_weights.pixels()[i] <= 1.0);
        }
    }
}

TEST_CASE("concentric disks interpolate the radius") {
    const Image z1 = synth::disk(96, 96, 48, 48, 8);
    const Image z3 = synth::disk(96, 96, 48, 48, 12);
    const MidframeResult r = synthesize_midframe(z1, z3);
    CHECK(std::abs(test::half_max_radius_x(r.slice, 48, 48) - 10.0) < 1.0);
}

TEST_CASE("convexity holds on random textures") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        const Image a = synth::smooth_texture(32, 40, 1.5, 100 + trial);
        const Image b = synth::smooth_texture(32, 40, 1.5, 200 + trial, 1.0, -1.0);
        SynthesisConfig cfg;
        cfg.split_mode = trial % 2 == 0 ? SplitMode::Symmetric : SplitMode::Simple;
        const MidframeResult r = synthesize_midframe(a, b, cfg);
        const Image w1 = backward_warp(a, r.flow_to_first);
        const Image w3 = backward_warp(b, r.flow_to_last);
        for (std::size_t i = 0; i < r.slice.size(); ++i) {
            CHECK(r.slice.pixels()[i] >= std::min(w1.pixels()[i], w3.pixels()[i]) - 1e-12);
            CHECK(r.slice.pixels()[i] <= std::max(w1.pixels()[i], w3.pixels()[i]) + 1e-12);
        }
    }
}

TEST_CASE("linear motion beats plain averaging by 3 dB") {
    for (const double d : {4.0, 5.0, 6.0, -4.0}) {
        CAPTURE(d);
        const Image z1 = synth::gaussian_blob(96, 96, 48 - d / 2, 48, 6);
        const Image z3 = synth::gaussian_blob(96, 96, 48 + d / 2, 48, 6);
        const Image truth = synth::gaussian_blob(96, 96, 48, 48, 6);
        const MidframeResult r = synthesize_midframe(z1, z3);
        CHECK(psnr(truth, r.slice) >= psnr(truth, average(z1, z3)) + 3.0);
    }
}

TEST_CASE("fallback blend applies where both consistency weights vanish") {
    SynthesisConfig cfg;
    cfg.fallback_blend = {0.25, 0.75};
    cfg.flow.max_levels = 1;
    cfg.flow.iterations_per_level = 1;
    // Flat images: zero flow, all-consistent; weights split evenly.
    const MidframeResult r = synthesize_midframe(Image(16, 16, 0.2), Image(16, 16, 0.6), cfg);
    for (const double w : r.fusion_weights.pixels()) CHECK(w == doctest::Approx(0.5));
    cfg.fallback_blend = {0.3, 0.3};
    CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("synthesize_midframe rejects bad input") {
    CHECK_THROWS_AS((void)synthesize_midframe(Image(16, 16), Image(16, 15)), ShapeError);
    CHECK_THROWS_AS((void)synthesize_midframe(Image(7, 16), Image(7, 16)), ArgumentError);
}

TEST_CASE("upscale shape law and pass-through") {
    for (int depth = 2; depth <= 16; ++depth) {
        const Volume v = random_stack(depth, 8, 8, static_cast<std::uint64_t>(depth));
        for (const int factor : {2, 4, 8}) {
            CAPTURE(depth);
            CAPTURE(factor);
            const Volume out = upscale_volume(v, factor, {}, {}, 2);
            REQUIRE(out.depth() == upscaled_depth(depth, factor));
            for (int k = 0; k < depth; ++k) CHECK(out.slice(k * factor) == v.slice(k));
            for (const double x : out.voxels()) CHECK((x >= 0.0 && x <= 1.0));
        }
    }
}

TEST_CASE("upscale of a static scene stays static") {
    const Image z = synth::smooth_texture(24, 24, 2.0, 4);
    const std::vector<Image> slices(3, z);
    const Volume out = upscale_volume(Volume::from_slices(slices), 4);
    REQUIRE(out.depth() == 9);
    for (int i = 0; i < out.depth(); ++i) CHECK(test::max_abs_diff(out.slice(i), z) <= 1e-3);

    const std::vector<Image> pair(2, z);
    const Volume two = upscale_volume(Volume::from_slices(pair), 2);
    REQUIRE(two.depth() == 3);
    CHECK(test::max_abs_diff(two.slice(1), z) <= 1e-3);
}

TEST_CASE("upscale adjusts z voxel size and validates arguments") {
    Volume v = random_stack(3, 8, 8, 1);
    v.set_voxel_size(VoxelSize{32.0, 8.0, 8.0});
    const Volume out = upscale_volume(v, 4);
    REQUIRE(out.voxel_size().has_value());
    CHECK(out.voxel_size()->z == 8.0);
    CHECK(out.voxel_size()->x == 8.0);
    CHECK_THROWS_WITH_AS((void)upscale_volume(v, 3), doctest::Contains("power of two"), ArgumentError);
    CHECK_THROWS_AS((void)upscale_volume(v, 1), ArgumentError);
    CHECK_THROWS_AS((void)upscale_volume(random_stack(1, 8, 8, 2), 2), ArgumentError);
    CHECK(require_power_of_two(16) == 4);
}

TEST_CASE("parallel upscale matches the serial reference for any thread count") {
    const Volume v = random_stack(5, 20, 24, 77);
    const Volume ref = serial::upscale_volume(v, 4);
    for (const int threads : {1, 2, 3, 8}) {
        CAPTURE(threads);
        CHECK(upscale_volume(v, 4, {}, {}, threads) == ref);
    }
}

TEST_CASE("progress sink sees every pair of every round") {
    const Volume v = random_stack(4, 8, 8, 5);
    std::vector<UpscaleProgress> seen;
    (void)upscale_volume(v, 4, {}, [&](const UpscaleProgress& p) { seen.push_back(p); }, 3);
    REQUIRE(seen.size() == 3 + 6);
    CHECK(seen[2].done == 3);
    CHECK(seen[2].total == 3);
    CHECK(seen.back().round == 2);
    CHECK(seen.back().done == 6);
}
