#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "aircomp/core.hpp"
#include "aircomp/rng.hpp"

using namespace aircomp;

TEST_CASE("quantizer spec validates and derives step", "[core]") {
    QuantizerSpec spec(6);
    CHECK(spec.levels() == 64);
    CHECK(spec.range() == 2.0);
    CHECK(spec.step() == Catch::Approx(2.0 / 64).margin(0.0));

    CHECK_THROWS_AS(QuantizerSpec(0), std::invalid_argument);
    CHECK_THROWS_AS(QuantizerSpec(31), std::invalid_argument);
    CHECK_THROWS_AS(QuantizerSpec(4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantizerSpec(4, 2.0, -2.0), std::invalid_argument);
}

TEST_CASE("quantize is floor((x - x_min)/step) with clamping", "[core]") {
    QuantizerSpec spec(2);  // step 0.5 over [-1, 1]
    CHECK(quantize(-1.0, spec) == 0);
    CHECK(quantize(-0.26, spec) == 1);
    CHECK(quantize(0.0, spec) == 2);
    CHECK(quantize(0.999, spec) == 3);
    CHECK(quantize(1.0, spec) == 3);   // top edge clamps into the last cell
    CHECK(quantize(7.5, spec) == 3);   // out of range clamps
    CHECK(quantize(-7.5, spec) == 0);
    CHECK_THROWS_AS(quantize(std::nan(""), spec), std::domain_error);
    CHECK_THROWS_AS(quantize(INFINITY, spec), std::domain_error);
}

TEST_CASE("dequantize returns cell midpoints and bounds the error by step/2", "[core]") {
    QuantizerSpec spec(2);
    CHECK(dequantize(0, spec) == Catch::Approx(-0.75).margin(1e-15));
    CHECK(dequantize(3, spec) == Catch::Approx(0.75).margin(1e-15));
    CHECK_THROWS_AS(dequantize(4, spec), std::out_of_range);

    QuantizerSpec fine(10, -0.5, 2.5);
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-0.5, 2.5);
        const double back = dequantize(quantize(x, fine), fine);
        CHECK(std::abs(back - x) <= fine.step() / 2 + 1e-12);
    }
}

TEST_CASE("slicing scheme validates widths and exposes offsets", "[core]") {
    SlicingScheme s({2, 2, 1});
    CHECK(s.slices() == 3);
    CHECK(s.total_bits() == 5);
    CHECK(s.offset(0) == 0);  // c_0: slice 1 holds the least significant bits
    CHECK(s.offset(1) == 2);
    CHECK(s.offset(2) == 4);
    CHECK(s.label() == "2+2+1");

    CHECK_THROWS_AS(SlicingScheme({1, 2}), std::invalid_argument);   // must be non-increasing
    CHECK_THROWS_AS(SlicingScheme({2, 0}), std::invalid_argument);   // positive widths
    CHECK_THROWS_AS(SlicingScheme(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(SlicingScheme({40, 30}), std::invalid_argument); // total above 62
}

TEST_CASE("slice splits from the LSB end", "[core]") {
    SlicingScheme s({2, 2, 2});
    const auto parts = slice(45, s);  // 101101b
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == 1);  // 01b
    CHECK(parts[1] == 3);  // 11b
    CHECK(parts[2] == 2);  // 10b
    CHECK(reconstruct_index(parts, s) == 45);
}

TEST_CASE("slice then reconstruct is the identity for every index", "[core]") {
    const SlicingScheme schemes[] = {SlicingScheme({3, 2, 1}), SlicingScheme({2, 2, 2}),
                                     SlicingScheme({6}), SlicingScheme({1, 1, 1, 1, 1, 1})};
    for (const auto& s : schemes) {
        const std::uint64_t n = std::uint64_t{1} << s.total_bits();
        for (std::uint64_t q = 0; q < n; ++q) REQUIRE(reconstruct_index(slice(q, s), s) == q);
    }
}

TEST_CASE("reconstruct_index rejects malformed slices", "[core]") {
    SlicingScheme s({2, 1});
    CHECK_THROWS_AS(reconstruct_index(std::vector<std::uint64_t>{1}, s), std::invalid_argument);
    CHECK_THROWS_AS(reconstruct_index(std::vector<std::uint64_t>{4, 0}, s), std::out_of_range);
}

TEST_CASE("assembling per-slice sums equals slicing the summed index", "[core]") {
    // sum_k q_k == sum_ell 2^{c_ell} sum_k q_k[ell]: aggregation commutes
    // with slicing because the per-slice sums carry the full carries.
    SlicingScheme s({2, 2, 1});
    Rng rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<std::uint64_t> sums(3, 0);
        std::uint64_t total = 0;
        const int devices = 1 + static_cast<int>(rng.raw() % 16);
        for (int k = 0; k < devices; ++k) {
            const std::uint64_t q = rng.raw() % 32;
            total += q;
            const auto parts = slice(q, s);
            for (std::size_t i = 0; i < parts.size(); ++i) sums[i] += parts[i];
        }
        REQUIRE(assemble_aggregate(sums, s) == total);
    }
}

TEST_CASE("denormalize maps the aggregate index to the sum estimate", "[core]") {
    // y_hat = u_hat * step + (step/2 + x_min) * K
    QuantizerSpec spec(2);
    CHECK(denormalize(5, spec, 2) == Catch::Approx(1.0).margin(1e-15));
    CHECK(denormalize(0, spec, 2) == Catch::Approx(-1.5).margin(1e-15));
    CHECK_THROWS_AS(denormalize(0, spec, 0), std::invalid_argument);

    // noiseless chain: quantize K values, aggregate, denormalize; error is
    // bounded by K * step / 2.
    QuantizerSpec fine(8);
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        double y = 0.0;
        std::uint64_t u = 0;
        for (int k = 0; k < 10; ++k) {
            const double x = rng.uniform(-1.0, 1.0);
            y += x;
            u += quantize(x, fine);
        }
        CHECK(std::abs(denormalize(u, fine, 10) - y) <= 10 * fine.step() / 2 + 1e-12);
    }
}
