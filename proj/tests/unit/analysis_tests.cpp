#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aircomp/analysis.hpp"

using namespace aircomp;
using Catch::Approx;

namespace {
double db(double x) { return std::pow(10.0, x / 10.0); }
}  // namespace

TEST_CASE("q_function spot values") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == Approx(0.15865525393145707).epsilon(1e-14));
    CHECK(q_function(3.0) == Approx(0.0013498980316300959).epsilon(1e-13));
    CHECK(q_function(5.0) == Approx(2.866515718791945e-07).epsilon(1e-12));
    CHECK(q_function(-1.0) == Approx(1.0 - q_function(1.0)).epsilon(1e-15));
    CHECK(q_function(2.0) < q_function(1.0));
}

TEST_CASE("pairwise error rows form a distribution") {
    const auto c = make_constellation(1, 2);  // P=2, K=2
    const auto b = map_boundaries(c, 1.0, 0.1);
    CHECK(pairwise_error(c, b, 0, 1, 1.0, 0.1) == Approx(0.0011340327492205266).epsilon(1e-12));
    CHECK(pairwise_error(c, b, 0, 2, 1.0, 0.1) == Approx(4.1381024932018097e-22).epsilon(1e-9));
    for (std::size_t j = 0; j < c.size(); ++j) {
        double row = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) row += pairwise_error(c, b, j, m, 1.0, 0.1);
        CHECK(row == Approx(1.0).margin(1e-12));
    }

    const auto c46 = make_constellation(2, 6);
    const auto b46 = map_boundaries(c46, 1.0, 1.0 / db(12.0));
    for (std::size_t j = 0; j < c46.size(); ++j) {
        double row = 0.0;
        for (std::size_t m = 0; m < c46.size(); ++m)
            row += pairwise_error(c46, b46, j, m, 1.0, 1.0 / db(12.0));
        CHECK(row == Approx(1.0).margin(1e-12));
    }

    CHECK(pairwise_error(c, b, 1, 1, 1.0, 0.0) == 1.0);  // no noise: always correct
    CHECK(pairwise_error(c, b, 1, 2, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(pairwise_error(c, b, 3, 0, 1.0, 0.1), std::out_of_range);
}

TEST_CASE("exact detection error spot values") {
    const auto c46 = make_constellation(2, 6);
    const auto b46 = map_boundaries(c46, 1.0, 1.0 / db(12.0));
    CHECK(detection_error_exact(c46, b46, 1.0, 1.0 / db(12.0)) ==
          Approx(0.029389570289614548).epsilon(1e-12));

    const auto c12 = make_constellation(1, 2);
    const auto b12 = map_boundaries(c12, 1.0, 0.1);
    CHECK(detection_error_exact(c12, b12, 1.0, 0.1) ==
          Approx(0.0022024050876758502).epsilon(1e-12));
    CHECK(detection_error_exact(c12, b12, 1.0, 0.0) == 0.0);

    BoundarySet wrong;
    wrong.lower = {0.0};
    CHECK_THROWS_AS(detection_error_exact(c12, wrong, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("adjacency coefficient") {
    CHECK(adjacency_coefficient(exact_priors(2, 10)) == Approx(1.9009715867004118).epsilon(1e-12));
    CHECK(adjacency_coefficient(exact_priors(4, 10)) == Approx(1.980015010708335).epsilon(1e-12));
    const std::vector<double> uniform(11, 1.0 / 11.0);
    CHECK(adjacency_coefficient(uniform) == Approx(20.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("aggregation error, exact and asymptotic") {
    const QuantizerSpec spec(6);
    const SlicingScheme ube({1, 1, 1, 1, 1, 1});

    CHECK(aggregation_error(spec, ube, 10, 1.0, 1.0 / db(8.0)) ==
          Approx(0.015119815638551581).epsilon(1e-12));
    CHECK(aggregation_error(spec, ube, 10, 1.0, 1.0 / db(12.0)) ==
          Approx(8.667954737292454e-05).epsilon(1e-12));
    CHECK(aggregation_error(spec, ube, 10, 1.0, 1.0 / db(18.0)) ==
          Approx(2.492835587960758e-15).epsilon(1e-10));

    CHECK(aggregation_error(spec, ube, 10, 1.0, 1.0 / db(8.0), AggregationMode::asymptotic) ==
          Approx(0.015215175040248028).epsilon(1e-12));
    CHECK(aggregation_error(spec, ube, 10, 1.0, 1.0 / db(12.0), AggregationMode::asymptotic) ==
          Approx(8.692319109461082e-05).epsilon(1e-12));

    // The asymptotic expression over-counts slightly and tightens with SNR.
    double prev_ratio = 1e9;
    for (double snr_db : {14.0, 16.0, 18.0, 22.0}) {
        const double nv = 1.0 / db(snr_db);
        const double exact = aggregation_error(spec, ube, 10, 1.0, nv);
        const double asym = aggregation_error(spec, ube, 10, 1.0, nv, AggregationMode::asymptotic);
        const double ratio = asym / exact;
        CHECK(ratio > 1.0);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio == Approx(1.0).margin(5e-4));  // 22 dB ratio: 1.000309

    CHECK_THROWS_AS(aggregation_error(spec, SlicingScheme({1, 1, 1, 1, 1}), 10, 1.0, 0.1),
                    std::invalid_argument);
}

TEST_CASE("uniform-slicing closed forms") {
    const double g12 = db(12.0);
    CHECK(digital_error_uniform(6, 1, 6, 10, g12) == Approx(0.0009007252744279442).epsilon(1e-12));

    // Same quantity assembled from the asymptotic slice sum plus quantization.
    const QuantizerSpec spec(6);
    const SlicingScheme ube({1, 1, 1, 1, 1, 1});
    const double assembled =
        aggregation_error(spec, ube, 10, 1.0, 1.0 / g12, AggregationMode::asymptotic) +
        quantization_error(spec, 10);
    CHECK(digital_error_uniform(6, 1, 6, 10, g12) == Approx(assembled).epsilon(1e-12));

    CHECK(digital_error_uniform_chernoff(6, 1, 6, 10, g12) ==
          Approx(0.0012721829540636757).epsilon(1e-12));
    for (double snr_db : {8.0, 12.0, 16.0})
        CHECK(digital_error_uniform_chernoff(6, 1, 6, 10, db(snr_db)) >=
              digital_error_uniform(6, 1, 6, 10, db(snr_db)));

    CHECK_THROWS_AS(digital_error_uniform(7, 2, 3, 10, g12), std::invalid_argument);
    CHECK_THROWS_AS(digital_error_uniform_chernoff(7, 2, 3, 10, g12), std::invalid_argument);
}

TEST_CASE("analog baseline error") {
    CHECK(analog_error(2.0, 6, db(6.0)) == Approx(0.013954924619497669).epsilon(1e-13));
    CHECK(analog_error(2.0, 6, 10.0) == Approx(0.005555555555555556).epsilon(1e-14));
    CHECK(analog_error(2.0, 6, db(14.0)) == Approx(0.0022117065030749852).epsilon(1e-13));
    CHECK(analog_error(2.0, 1, 10.0) == Approx(4.0 / 120.0).epsilon(1e-14));
    CHECK(analog_error(2.0, 6, 10.0) == Approx(analog_error(2.0, 3, 10.0) / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(analog_error(2.0, 0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(analog_error(2.0, 6, 0.0), std::invalid_argument);
}

TEST_CASE("quantization error and aggregate power") {
    const QuantizerSpec spec(6);
    CHECK(quantization_error(spec, 10) ==
          Approx(10.0 * spec.step() * spec.step() / 12.0).epsilon(1e-15));
    CHECK(mean_square_aggregate(-1.0, 1.0, 10) == Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(mean_square_aggregate(0.0, 1.0, 2) == Approx(7.0 / 6.0).epsilon(1e-15));

    const auto rep = make_error_report(0.25, 0.05, 2.0, ErrorReport::Source::closed_form);
    CHECK(rep.total == Approx(0.3).epsilon(1e-15));
    CHECK(rep.normalized == Approx(0.15).epsilon(1e-15));
    CHECK(rep.aggregation_error == 0.25);
    CHECK(rep.quantization_error == 0.05);
    CHECK(rep.source == ErrorReport::Source::closed_form);
}

TEST_CASE("standard Lambert branches") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(-0.1) == Approx(-0.11183255915896297).epsilon(1e-12));
    CHECK(lambert_w_minus1(-0.1) == Approx(-3.577152063957297).epsilon(1e-12));
    CHECK(lambert_w_minus1(-0.2) == Approx(-2.5426413577735265).epsilon(1e-12));

    for (double x : {-0.35, -0.25, -0.15, -0.05}) {
        const double w0 = lambert_w0(x);
        const double wm = lambert_w_minus1(x);
        CHECK(w0 >= -1.0);
        CHECK(wm <= -1.0);
        CHECK(std::abs(w0 * std::exp(w0) - x) < 1e-12);
        CHECK(std::abs(wm * std::exp(wm) - x) < 1e-12);
    }
    for (double x : {0.5, 1.0, 2.0, std::exp(1.0)}) {
        const double w0 = lambert_w0(x);
        CHECK(std::abs(w0 * std::exp(w0) - x) < 1e-12 * std::max(1.0, x));
    }
    const double knee = -std::exp(-1.0);
    CHECK(lambert_w0(knee) == Approx(-1.0).margin(1e-5));
    CHECK(lambert_w_minus1(knee) == Approx(-1.0).margin(1e-5));

    CHECK_THROWS_AS(lambert_w0(-0.4), std::domain_error);
    CHECK_THROWS_AS(lambert_w_minus1(-0.4), std::domain_error);
    CHECK_THROWS_AS(lambert_w_minus1(0.0), std::domain_error);
    CHECK_THROWS_AS(lambert_w_minus1(0.1), std::domain_error);
}

TEST_CASE("r-Lambert roots on a synthetic instance") {
    const double c = -0.5, r = 0.05, a = 0.6;
    const auto roots = r_lambert_roots(c, r, a);
    REQUIRE(roots.branch_zero.has_value());
    REQUIRE(roots.branch_minus1.has_value());
    REQUIRE(roots.branch_minus2.has_value());
    CHECK(*roots.branch_zero == Approx(0.8542268183607219).epsilon(1e-9));
    CHECK(*roots.branch_minus1 == Approx(5.974393330388467).epsilon(1e-9));
    CHECK(*roots.branch_minus2 == Approx(11.156886956389057).epsilon(1e-9));

    for (double x : roots.ordered())
        CHECK(std::abs(x * std::exp(c * x) + r * x - a) < 1e-10);
    const auto ord = roots.ordered();
    REQUIRE(ord.size() == 3);
    CHECK(ord[0] < ord[1]);
    CHECK(ord[1] < ord[2]);

    CHECK_THROWS_AS(r_lambert_roots(0.5, r, a), std::invalid_argument);
    CHECK_THROWS_AS(r_lambert_roots(c, 0.0, a), std::invalid_argument);
    CHECK_THROWS_AS(r_lambert_roots(c, 0.2, a), std::invalid_argument);
    CHECK_THROWS_AS(r_lambert_roots(c, r, 0.0), std::invalid_argument);
}

TEST_CASE("r-Lambert reduces to the standard branches as r vanishes") {
    const double c = -1.0, a = 0.2;
    const auto roots = r_lambert_roots(c, 1e-9, a);
    REQUIRE(roots.branch_zero.has_value());
    REQUIRE(roots.branch_minus1.has_value());
    CHECK(*roots.branch_zero == Approx(lambert_w0(c * a) / c).epsilon(1e-6));
    CHECK(*roots.branch_minus1 == Approx(lambert_w_minus1(c * a) / c).epsilon(1e-6));
    // The third root escapes toward a/r as the perturbation vanishes.
    REQUIRE(roots.branch_minus2.has_value());
    CHECK(*roots.branch_minus2 > 1e7);
}

TEST_CASE("SNR regime window") {
    const auto w6 = snr_regime(6, 1, 6, 10);
    REQUIRE(!w6.empty);
    CHECK(w6.lo == Approx(11.509727685041133).epsilon(1e-7));
    CHECK(w6.hi == Approx(68.26666666650723).epsilon(1e-7));
    CHECK(w6.lo_db() == Approx(10.610650485400427).margin(1e-6));
    CHECK(w6.hi_db() == Approx(18.342086975831165).margin(1e-6));

    const auto w12 = snr_regime(12, 2, 6, 10);
    REQUIRE(!w12.empty);
    CHECK(w12.lo == Approx(55.80665903486282).epsilon(1e-6));
    CHECK(w12.hi == Approx(279620.2666666666).epsilon(1e-6));

    CHECK_THROWS_AS(snr_regime(7, 2, 3, 10), std::invalid_argument);
}

TEST_CASE("window shrinks with the device count and then closes") {
    const auto w2 = snr_regime(6, 1, 6, 2);
    const auto w10 = snr_regime(6, 1, 6, 10);
    const auto w36 = snr_regime(6, 1, 6, 36);
    REQUIRE(!w2.empty);
    REQUIRE(!w10.empty);
    REQUIRE(!w36.empty);
    CHECK(w2.lo == Approx(10.409939493606137).epsilon(1e-7));
    CHECK(w2.hi == Approx(341.33333333333337).epsilon(1e-7));
    CHECK(w36.lo == Approx(14.671138110846032).epsilon(1e-6));
    CHECK(w36.hi == Approx(17.938632337378206).epsilon(1e-6));
    CHECK(w2.lo < w10.lo);
    CHECK(w10.lo < w36.lo);
    CHECK(w2.hi > w10.hi);
    CHECK(w10.hi > w36.hi);

    CHECK(snr_regime(6, 1, 6, 37).empty);
    CHECK(snr_regime(6, 1, 6, 50).empty);
}

TEST_CASE("largest supported device count") {
    CHECK(regime_max_K(6, 1, 6) == 36);
    // Consistency: the window is non-empty exactly up to the returned K.
    CHECK(!snr_regime(6, 1, 6, regime_max_K(6, 1, 6)).empty);
    CHECK(snr_regime(6, 1, 6, regime_max_K(6, 1, 6) + 1).empty);

    CHECK(regime_max_K(10, 5, 2) == 99);
    CHECK(regime_max_K(10, 2, 5) == 2344);
    CHECK(regime_max_K(10, 1, 10) == 5327);

    CHECK_THROWS_AS(regime_max_K(7, 2, 3), std::invalid_argument);
}
