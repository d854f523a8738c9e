#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aircomp/modem.hpp"

namespace aircomp {

enum class PriorModel { exact, normal };
enum class DetectorRule { map, ml };

// Number of ways K values drawn from {0..m-1} sum to n, via the alternating
// binomial sum. Exact integers; intended for small instances (the convolution
// in exact_priors is the scalable path).
inline std::int64_t polycoef(int n, int k, int m) {
    if (n < 0 || k < 1 || m < 2) throw std::invalid_argument("polycoef: need n >= 0, k >= 1, m >= 2");
    auto binom = [](std::int64_t a, std::int64_t b) -> std::int64_t {
        if (b < 0 || a < 0 || a < b) return 0;
        b = std::min(b, a - b);
        std::int64_t r = 1;
        for (std::int64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    std::int64_t s = 0;
    for (int t = 0; t <= k; ++t) {
        const std::int64_t term = binom(k, t) * binom(n + k - static_cast<std::int64_t>(t) * m - 1, k - 1);
        s += (t % 2 == 0) ? term : -term;
    }
    return s;
}

// Distribution of a sum of K i.i.d. uniforms on {0..P-1}: iterated
// convolution. While P^K fits in the double mantissa the convolution runs on
// integer counts and divides once at the end, which keeps the result exact;
// beyond that it runs on probabilities (P is a power of two in every caller,
// so the per-step 1/P scaling is still exact).
inline std::vector<double> exact_priors(int P, int K) {
    if (P < 2 || K < 1) throw std::invalid_argument("exact_priors: need P >= 2, K >= 1");
    const bool counts = K * std::log2(static_cast<double>(P)) <= 52.0;
    std::vector<double> p(static_cast<std::size_t>(P), counts ? 1.0 : 1.0 / P);
    const double scale = counts ? 1.0 : 1.0 / P;
    for (int k = 1; k < K; ++k) {
        std::vector<double> next(p.size() + static_cast<std::size_t>(P) - 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (int v = 0; v < P; ++v) next[i + static_cast<std::size_t>(v)] += p[i];
        if (!counts)
            for (auto& x : next) x *= scale;
        p = std::move(next);
    }
    if (counts) {
        const double total = std::pow(static_cast<double>(P), K);
        for (auto& x : p) x /= total;
    }
    return p;
}

// Discrete Gaussian surrogate on the same lattice: variance (P^2-1)K/12,
// centered on the constellation midpoint, renormalized to sum to one.
inline std::vector<double> normal_priors(int P, int K) {
    if (P < 2 || K < 1) throw std::invalid_argument("normal_priors: need P >= 2, K >= 1");
    const std::size_t n = static_cast<std::size_t>(P - 1) * static_cast<std::size_t>(K) + 1;
    const double var = (static_cast<double>(P) * P - 1.0) * K / 12.0;
    const double center = static_cast<double>(P - 1) * K / 2.0;
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double dev = static_cast<double>(j) - center;
        p[j] = std::exp(-dev * dev / (2.0 * var));
        sum += p[j];
    }
    for (auto& x : p) x /= sum;
    return p;
}

// The (P-1)K+1 point lattice of superimposed PAM symbols, with priors.
struct AggregatedConstellation {
    int levels = 0;   // P per device
    int devices = 0;  // K
    double spacing = 0.0;
    std::vector<double> points;
    std::vector<double> priors;
    PriorModel prior_model = PriorModel::exact;

    std::size_t size() const { return points.size(); }
};

inline AggregatedConstellation make_constellation(int bits_per_branch, int devices,
                                                  PriorModel model = PriorModel::exact) {
    if (devices < 1) throw std::invalid_argument("make_constellation: devices must be >= 1");
    const PamGrid grid(bits_per_branch);
    AggregatedConstellation c;
    c.levels = grid.levels;
    c.devices = devices;
    c.spacing = grid.spacing;
    c.prior_model = model;
    const std::size_t n = static_cast<std::size_t>(grid.levels - 1) * static_cast<std::size_t>(devices) + 1;
    const double center = static_cast<double>(grid.levels - 1) * devices / 2.0;
    c.points.resize(n);
    for (std::size_t j = 0; j < n; ++j) c.points[j] = (static_cast<double>(j) - center) * grid.spacing;
    c.priors = model == PriorModel::exact ? exact_priors(grid.levels, devices)
                                          : normal_priors(grid.levels, devices);
    return c;
}

// Lower decision edges for regions 2..n; region 1 extends to -inf and region
// n to +inf. Strictly increasing by construction (priors are log-concave).
struct BoundarySet {
    std::vector<double> lower;

    std::size_t regions() const { return lower.size() + 1; }
    double lower_edge(std::size_t j) const {  // 0-based region index
        return j == 0 ? -std::numeric_limits<double>::infinity() : lower[j - 1];
    }
    double upper_edge(std::size_t j) const {
        return j + 1 == regions() ? std::numeric_limits<double>::infinity() : lower[j];
    }
};

// MAP edge between regions j-1 and j:
//   b_j = rho(s_j - d/2) - (sigma_z^2 / (2 rho d)) * ln(p_j / p_{j-1}).
// With equal priors the log term vanishes and the edges are the ML midpoints.
inline BoundarySet map_boundaries(const AggregatedConstellation& c, double rho, double noise_variance,
                                  DetectorRule rule = DetectorRule::map) {
    if (!(rho > 0.0)) throw std::invalid_argument("map_boundaries: rho must be positive");
    if (noise_variance < 0.0) throw std::invalid_argument("map_boundaries: negative noise variance");
    BoundarySet b;
    b.lower.resize(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) {
        const double mid = rho * (c.points[j] - c.spacing / 2.0);
        double offset = 0.0;
        if (rule == DetectorRule::map && noise_variance > 0.0) {
            const double pj = c.priors[j];
            const double pm = c.priors[j - 1];
            if (!(pj > 0.0) || !(pm > 0.0))
                throw std::domain_error("map_boundaries: zero prior on an interior point");
            offset = noise_variance / (2.0 * rho * c.spacing) * std::log(pj / pm);
        }
        b.lower[j - 1] = mid - offset;
    }
    return b;
}

// Under the Gaussian prior surrogate the log-prior ratio is linear in j and
// every MAP edge is the ML midpoint scaled by the same factor:
//   b_j = rho(s_j - d/2) (1 + 1/(gamma K)).
inline BoundarySet closed_form_boundaries(const AggregatedConstellation& c, double rho,
                                          double noise_variance) {
    if (!(rho > 0.0)) throw std::invalid_argument("closed_form_boundaries: rho must be positive");
    if (noise_variance < 0.0) throw std::invalid_argument("closed_form_boundaries: negative noise variance");
    const double gamma = rho * rho / noise_variance;
    const double factor =
        noise_variance > 0.0 ? 1.0 + 1.0 / (gamma * static_cast<double>(c.devices)) : 1.0;
    BoundarySet b;
    b.lower.resize(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j)
        b.lower[j - 1] = rho * (c.points[j] - c.spacing / 2.0) * factor;
    return b;
}

// Index of the region containing r; a tie at an edge resolves to the lower
// index. Interval lookup is equivalent to the full prior-times-likelihood
// argmax because the edges come from the (log-concave) priors.
inline std::size_t detect_pam(double r, const BoundarySet& b, const AggregatedConstellation& c) {
    if (b.regions() != c.size()) throw std::invalid_argument("detect_pam: boundary/constellation mismatch");
    const auto it = std::lower_bound(b.lower.begin(), b.lower.end(), r);
    return static_cast<std::size_t>(it - b.lower.begin());
}

// Independent per-branch detection; returns the detected aggregate symbol.
inline ComplexSymbol detect_qam(ComplexSymbol r, const BoundarySet& b, const AggregatedConstellation& c) {
    const std::size_t i = detect_pam(r.real(), b, c);
    const std::size_t q = detect_pam(r.imag(), b, c);
    return {c.points[i], c.points[q]};
}

}  // namespace aircomp
