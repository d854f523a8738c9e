#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aircomp/core.hpp"
#include "aircomp/detector.hpp"

namespace aircomp {

// Standard Gaussian tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace detail {

// Q(lo) - Q(hi) for lo < hi without cancellation: same-side differences are
// evaluated on the small-tail side via Q(-x) = 1 - Q(x).
inline double q_interval(double lo, double hi) {
    if (hi <= 0.0) return q_function(-hi) - q_function(-lo);
    if (lo >= 0.0) return q_function(lo) - q_function(hi);
    return 1.0 - q_function(-lo) - q_function(hi);
}

inline double pow4(int e) { return std::pow(4.0, e); }

}  // namespace detail

struct ErrorReport {
    enum class Source { closed_form, monte_carlo };

    double aggregation_error = 0.0;
    double quantization_error = 0.0;
    double total = 0.0;       // aggregation_error + quantization_error
    double normalized = 0.0;  // total / E[y^2]
    Source source = Source::closed_form;
    int devices = 0;
    int bits = 0;
    std::string scheme_label;
    double snr = 0.0;
    // Monte Carlo metadata; zero for closed-form reports.
    double ci95 = 0.0;
    long long trials = 0;
    std::uint64_t seed = 0;
};

inline ErrorReport make_error_report(double aggregation, double quantization, double mean_square_y,
                                     ErrorReport::Source source) {
    ErrorReport r;
    r.aggregation_error = aggregation;
    r.quantization_error = quantization;
    r.total = aggregation + quantization;
    r.normalized = mean_square_y > 0.0 ? r.total / mean_square_y : 0.0;
    r.source = source;
    return r;
}

// E[y^2] for y = sum of K i.i.d. uniforms on [x_min, x_max]:
// K*delta^2/12 + (K*tau/2)^2 with delta = x_max - x_min, tau = x_max + x_min.
inline double mean_square_aggregate(double x_min, double x_max, int devices) {
    if (!(x_max > x_min)) throw std::invalid_argument("mean_square_aggregate: empty range");
    if (devices < 1) throw std::invalid_argument("mean_square_aggregate: devices must be >= 1");
    const double delta = x_max - x_min;
    const double tau = x_max + x_min;
    const double k = devices;
    return k * delta * delta / 12.0 + (k * tau / 2.0) * (k * tau / 2.0);
}

// Analog repetition baseline: delta_x^2 / (12 L gamma).
inline double analog_error(double delta_x, int repetitions, double gamma) {
    if (!(delta_x > 0.0) || repetitions < 1 || !(gamma > 0.0))
        throw std::invalid_argument("analog_error: all arguments must be positive");
    return delta_x * delta_x / (12.0 * repetitions * gamma);
}

// Total quantization error across K devices: K * step^2 / 12.
inline double quantization_error(const QuantizerSpec& spec, int devices) {
    if (devices < 1) throw std::invalid_argument("quantization_error: devices must be >= 1");
    const double d = spec.step();
    return devices * d * d / 12.0;
}

// P(detect region m | sent s_j), from the region edges.
inline double pairwise_error(const AggregatedConstellation& c, const BoundarySet& b, std::size_t j,
                             std::size_t m, double rho, double noise_variance) {
    if (j >= c.size() || m >= c.size()) throw std::out_of_range("pairwise_error: index out of range");
    if (noise_variance <= 0.0) return m == j ? 1.0 : 0.0;
    const double sigma_branch = std::sqrt(noise_variance / 2.0);
    const double lo = (b.lower_edge(m) - rho * c.points[j]) / sigma_branch;
    const double hi = (b.upper_edge(m) - rho * c.points[j]) / sigma_branch;
    return detail::q_interval(lo, hi);
}

// Mean squared symbol error of the aggregated-PAM detector:
// sum_j p_j sum_m (s_m - s_j)^2 P(j -> m).
inline double detection_error_exact(const AggregatedConstellation& c, const BoundarySet& b, double rho,
                                    double noise_variance) {
    if (b.regions() != c.size())
        throw std::invalid_argument("detection_error_exact: boundary/constellation mismatch");
    if (noise_variance <= 0.0) return 0.0;
    const double sigma_branch = std::sqrt(noise_variance / 2.0);
    double total = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        double row = 0.0;
        for (std::size_t m = 0; m < c.size(); ++m) {
            if (m == j) continue;
            const double lo = (b.lower_edge(m) - rho * c.points[j]) / sigma_branch;
            const double hi = (b.upper_edge(m) - rho * c.points[j]) / sigma_branch;
            const double diff = c.points[m] - c.points[j];
            row += diff * diff * detail::q_interval(lo, hi);
        }
        total += c.priors[j] * row;
    }
    return total;
}

// High-SNR adjacency coefficient: sum_j sqrt(p_{j-1} p_j) + sqrt(p_j p_{j+1}),
// with out-of-range priors treated as zero. Equals 2(n-1)/n for uniform
// priors, approaching 2 per adjacent pair.
inline double adjacency_coefficient(const std::vector<double>& priors) {
    const std::size_t n = priors.size();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j >= 1) s += std::sqrt(priors[j - 1] * priors[j]);
        if (j + 1 < n) s += std::sqrt(priors[j] * priors[j + 1]);
    }
    return s;
}

enum class AggregationMode { exact, asymptotic };

// Aggregation error of the sliced digital scheme.
// exact:      step^2 * sum_ell 4^{c_{ell-1}} / d_ell^2 * E_det(ell)
// asymptotic: step^2 * sum_ell 4^{c_{ell-1}} * A_ell * Q(rho d_ell / (sqrt(2) sigma_z))
inline double aggregation_error(const QuantizerSpec& spec, const SlicingScheme& scheme, int devices,
                                double rho, double noise_variance,
                                AggregationMode mode = AggregationMode::exact,
                                DetectorRule rule = DetectorRule::map,
                                PriorModel priors = PriorModel::exact) {
    if (scheme.total_bits() != spec.bits)
        throw std::invalid_argument("aggregation_error: scheme width does not match quantizer bits");
    if (devices < 1) throw std::invalid_argument("aggregation_error: devices must be >= 1");
    if (noise_variance < 0.0) throw std::invalid_argument("aggregation_error: negative noise variance");
    const double step = spec.step();
    double sum = 0.0;
    for (int ell = 0; ell < scheme.slices(); ++ell) {
        const auto c = make_constellation(scheme.width(ell), devices, priors);
        const double weight = detail::pow4(scheme.offset(ell));
        if (mode == AggregationMode::exact) {
            const auto b = map_boundaries(c, rho, noise_variance, rule);
            sum += weight / (c.spacing * c.spacing) * detection_error_exact(c, b, rho, noise_variance);
        } else {
            const double arg = rho * c.spacing / std::sqrt(2.0 * noise_variance);
            sum += weight * adjacency_coefficient(c.priors) * q_function(arg);
        }
    }
    return step * step * sum;
}

// Closed-form total error under uniform slicing (width b, L slices):
// step^2 * A * C * Q(d sqrt(gamma/2)) + step^2 * K / 12,
// with C = (4^B - 1)/(4^b - 1) the geometric weight sum.
inline double digital_error_uniform(int B, int b, int L, int devices, double gamma,
                                    double delta_x = 2.0) {
    if (B != b * L) throw std::invalid_argument("digital_error_uniform: B must equal b*L");
    if (devices < 1 || !(gamma > 0.0) || !(delta_x > 0.0))
        throw std::invalid_argument("digital_error_uniform: invalid arguments");
    const double step = delta_x / std::pow(2.0, B);
    const PamGrid grid(b);
    const double A = adjacency_coefficient(exact_priors(grid.levels, devices));
    const double C = (detail::pow4(B) - 1.0) / (detail::pow4(b) - 1.0);
    return step * step * (A * C * q_function(grid.spacing * std::sqrt(gamma / 2.0)) +
                          static_cast<double>(devices) / 12.0);
}

// Same quantity with the Q-function replaced by its Chernoff bound
// (1/2) exp(-d^2 gamma / 4); this is the expression the SNR-regime analysis
// actually bounds, so regime endpoints are validated against it.
inline double digital_error_uniform_chernoff(int B, int b, int L, int devices, double gamma,
                                             double delta_x = 2.0) {
    if (B != b * L) throw std::invalid_argument("digital_error_uniform_chernoff: B must equal b*L");
    if (devices < 1 || !(gamma > 0.0) || !(delta_x > 0.0))
        throw std::invalid_argument("digital_error_uniform_chernoff: invalid arguments");
    const double step = delta_x / std::pow(2.0, B);
    const PamGrid grid(b);
    const double A = adjacency_coefficient(exact_priors(grid.levels, devices));
    const double C = (detail::pow4(B) - 1.0) / (detail::pow4(b) - 1.0);
    const double d2 = grid.spacing * grid.spacing;
    return step * step * (A * C * 0.5 * std::exp(-d2 * gamma / 4.0) +
                          static_cast<double>(devices) / 12.0);
}

namespace detail {

// Safeguarded Newton on f(w) = w e^w - x over a monotone bracket. The root
// must be interior for the sign test below, so exact endpoint hits return
// immediately.
inline double lambert_refine(double x, double lo, double hi) {
    if (lo * std::exp(lo) == x) return lo;
    if (hi * std::exp(hi) == x) return hi;
    double w = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (f == 0.0) return w;
        if ((f > 0.0) == (hi * std::exp(hi) - x > 0.0))
            hi = w;
        else
            lo = w;
        const double df = ew * (1.0 + w);
        double next = df != 0.0 ? w - f / df : 0.5 * (lo + hi);
        if (!(next > std::min(lo, hi)) || !(next < std::max(lo, hi))) next = 0.5 * (lo + hi);
        if (next == w) break;
        w = next;
    }
    return w;
}

}  // namespace detail

// Principal branch W_0: w e^w = x, w >= -1, for x >= -1/e.
inline double lambert_w0(double x) {
    const double branch = -std::exp(-1.0);
    if (x < branch) {
        if (x > branch - 1e-12) x = branch;
        else throw std::domain_error("lambert_w0: argument below -1/e");
    }
    if (x == branch) return -1.0;
    if (x == 0.0) return 0.0;
    double lo = -1.0;
    double hi = x > 0.0 ? 1.0 : 0.0;
    while (hi * std::exp(hi) < x) hi *= 2.0;
    return detail::lambert_refine(x, lo, hi);
}

// Secondary branch W_{-1}: w e^w = x, w <= -1, for x in [-1/e, 0).
inline double lambert_w_minus1(double x) {
    const double branch = -std::exp(-1.0);
    if (x < branch) {
        if (x > branch - 1e-12) x = branch;
        else throw std::domain_error("lambert_w_minus1: argument below -1/e");
    }
    if (x >= 0.0) throw std::domain_error("lambert_w_minus1: argument must be negative");
    if (x == branch) return -1.0;
    double hi = -1.0;
    double lo = -2.0;
    while (lo * std::exp(lo) < x) lo *= 2.0;
    return detail::lambert_refine(x, lo, hi);
}

// Real roots of x e^{cx} + r x = a for c < 0, r in (0, 1/e^2), a > 0, indexed
// by the three monotone pieces of u e^u + r u (u = c x): branch 0 covers the
// rightmost piece in u (smallest x), branch -2 the leftmost (largest x).
struct RLambertRoots {
    std::optional<double> branch_zero;
    std::optional<double> branch_minus1;
    std::optional<double> branch_minus2;

    std::vector<double> ordered() const {
        std::vector<double> v;
        for (const auto& o : {branch_zero, branch_minus1, branch_minus2})
            if (o) v.push_back(*o);
        std::sort(v.begin(), v.end());
        return v;
    }
};

inline RLambertRoots r_lambert_roots(double c, double r, double a) {
    if (!(c < 0.0)) throw std::invalid_argument("r_lambert_roots: c must be negative");
    if (!(r > 0.0) || !(r < std::exp(-2.0)))
        throw std::invalid_argument("r_lambert_roots: r must lie in (0, 1/e^2)");
    if (!(a > 0.0)) throw std::invalid_argument("r_lambert_roots: a must be positive");

    const double y = c * a;  // target of f(u) = u e^u + r u
    const double u1 = lambert_w_minus1(-r * std::exp(1.0)) - 1.0;  // local max
    const double u2 = lambert_w0(-r * std::exp(1.0)) - 1.0;        // local min
    const auto f = [r](double u) { return u * std::exp(u) + r * u; };

    // Bisection + Newton on a monotone piece with f(lo), f(hi) bracketing y.
    const auto solve = [&](double lo, double hi) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid) - y;
            const bool same_side = (fm > 0.0) == (f(hi) - y > 0.0);
            (same_side ? hi : lo) = mid;
            if (hi == lo || std::abs(hi - lo) < 1e-15 * (1.0 + std::abs(lo))) break;
        }
        double u = 0.5 * (lo + hi);
        for (int i = 0; i < 8; ++i) {
            const double ew = std::exp(u);
            const double df = ew * (1.0 + u) + r;
            if (df == 0.0) break;
            const double step = (f(u) - y) / df;
            u -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(u))) break;
        }
        return u;
    };

    RLambertRoots roots;
    if (y <= f(u1)) {  // increasing piece (-inf, u1]
        double lo = u1 - 1.0;
        while (f(lo) > y) lo = u1 + 2.0 * (lo - u1);
        roots.branch_minus2 = solve(lo, u1) / c;
    }
    if (y <= f(u1) && y >= f(u2))  // decreasing piece [u1, u2]
        roots.branch_minus1 = solve(u1, u2) / c;
    if (y >= f(u2)) {  // increasing piece [u2, +inf)
        double hi = u2 + 1.0;
        while (f(hi) < y) hi = u2 + 2.0 * (hi - u2);
        roots.branch_zero = solve(u2, hi) / c;
    }
    return roots;
}

// SNR interval (linear gamma) where the sliced digital scheme beats the
// analog baseline, under the Chernoff-bounded error.
struct SnrInterval {
    bool empty = true;
    double lo = 0.0;
    double hi = 0.0;

    double lo_db() const { return 10.0 * std::log10(lo); }
    double hi_db() const { return 10.0 * std::log10(hi); }
};

namespace detail {

// Non-empty-window condition: -r (W_{-1}(-re) + 1/W_{-1}(-re) - 2) < 1/(8L),
// r = K/(6AC), A from the exact priors at this K. This is a sufficient
// condition (it bounds A by 2), and it is the regime gate: the window is
// reported empty whenever it fails.
inline bool regime_condition(int B, int b, int L, int devices) {
    const PamGrid grid(b);
    const double A = adjacency_coefficient(exact_priors(grid.levels, devices));
    const double C = (pow4(B) - 1.0) / (pow4(b) - 1.0);
    const double r = devices / (6.0 * A * C);
    if (r >= std::exp(-2.0)) return false;
    const double w = lambert_w_minus1(-r * std::exp(1.0));
    return -r * (w + 1.0 / w - 2.0) < 1.0 / (8.0 * L);
}

}  // namespace detail

// Window endpoints solve gamma e^{-d^2 gamma/4} + r gamma = 4^B/(6LAC) with
// r = K/(6AC): the middle root (branch -1) opens the window, the largest
// (branch -2) closes it. Empty whenever the non-empty-window condition
// fails, so that non-emptiness is consistent with regime_max_K.
inline SnrInterval snr_regime(int B, int b, int L, int devices) {
    if (B != b * L) throw std::invalid_argument("snr_regime: B must equal b*L");
    if (devices < 1) throw std::invalid_argument("snr_regime: devices must be >= 1");
    SnrInterval out;
    if (!detail::regime_condition(B, b, L, devices)) return out;
    const PamGrid grid(b);
    const double A = adjacency_coefficient(exact_priors(grid.levels, devices));
    const double C = (detail::pow4(B) - 1.0) / (detail::pow4(b) - 1.0);
    const double r = devices / (6.0 * A * C);
    const double a = detail::pow4(B) / (6.0 * L * A * C);
    const double c = -grid.spacing * grid.spacing / 4.0;
    const auto roots = r_lambert_roots(c, r, a);
    if (!roots.branch_minus1 || !roots.branch_minus2)
        throw std::logic_error("snr_regime: window roots missing despite the regime condition");
    out.empty = false;
    out.lo = *roots.branch_minus1;
    out.hi = *roots.branch_minus2;
    return out;
}

// Largest K satisfying the non-empty-window condition.
inline int regime_max_K(int B, int b, int L) {
    if (B != b * L) throw std::invalid_argument("regime_max_K: B must equal b*L");
    const auto holds = [&](int K) { return detail::regime_condition(B, b, L, K); };
    if (!holds(1)) return 0;
    int lo = 1;
    int hi = 2;
    const int cap = 1 << 20;
    while (hi < cap && holds(hi)) {
        lo = hi;
        hi *= 2;
    }
    if (hi >= cap) throw std::runtime_error("regime_max_K: no failure point below search cap");
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (holds(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace aircomp
