#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "aircomp/analysis.hpp"
#include "aircomp/core.hpp"

namespace aircomp {

// Uniform-by-best-effort split of B bits over L slices: ceil(B/L) for the
// first B mod L slices, floor(B/L) for the rest.
inline SlicingScheme ube_scheme(int B, int L) {
    if (L < 1) throw std::invalid_argument("ube_scheme: need at least one slice");
    if (B < L) throw std::invalid_argument("ube_scheme: B < L leaves an empty slice");
    std::vector<int> widths(static_cast<std::size_t>(L), B / L);
    for (int i = 0; i < B % L; ++i) widths[static_cast<std::size_t>(i)] += 1;
    return SlicingScheme(std::move(widths));
}

namespace detail {

inline void partitions_rec(int remaining, int parts, int max_part, std::vector<int>& prefix,
                           std::vector<SlicingScheme>& out) {
    if (parts == 1) {
        if (remaining >= 1 && remaining <= max_part) {
            prefix.push_back(remaining);
            out.emplace_back(prefix);
            prefix.pop_back();
        }
        return;
    }
    // Largest part first keeps descending lexicographic order (balanced last).
    const int hi = std::min(max_part, remaining - (parts - 1));
    for (int p = hi; p >= 1; --p) {
        if (remaining - p < parts - 1) continue;      // too little left
        if (remaining - p > p * (parts - 1)) continue;  // rest cannot stay <= p
        prefix.push_back(p);
        partitions_rec(remaining - p, parts - 1, p, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace detail

// All partitions of B into exactly L positive non-increasing parts, in
// descending lexicographic order: the most unbalanced scheme first, the most
// balanced (UBE) last.
inline std::vector<SlicingScheme> enumerate_schemes(int B, int L) {
    if (L < 1) throw std::invalid_argument("enumerate_schemes: need at least one slice");
    if (B < L) throw std::invalid_argument("enumerate_schemes: B < L leaves an empty slice");
    std::vector<SlicingScheme> out;
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(L));
    detail::partitions_rec(B, L, B, prefix, out);
    return out;
}

// Online slicing objective: the exact closed-form aggregation error at the
// given SNR (MAP regions, exact priors); quantization error is fixed by B and
// drops out of the comparison.
inline double objective(const QuantizerSpec& spec, const SlicingScheme& scheme, int devices,
                        double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("objective: gamma must be positive");
    return aggregation_error(spec, scheme, devices, 1.0, 1.0 / gamma, AggregationMode::exact,
                             DetectorRule::map, PriorModel::exact);
}

// Argmin of the objective over all partitions; ties go to the later (more
// balanced) scheme.
inline SlicingScheme optimize_slicing(const QuantizerSpec& spec, int L, int devices, double gamma) {
    const auto candidates = enumerate_schemes(spec.bits, L);
    std::size_t best = 0;
    double best_value = objective(spec, candidates[0], devices, gamma);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double value = objective(spec, candidates[i], devices, gamma);
        if (value <= best_value) {
            best_value = value;
            best = i;
        }
    }
    return candidates[best];
}

// Inclusive candidate range for the offline precision search.
struct PrecisionRange {
    int lo = 0;
    int hi = 0;
};

inline PrecisionRange default_precision_range(int L) { return {L, L + 8}; }

// Offline precision selection at the average SNR: argmin over B of the total
// closed-form error of the UBE scheme, step^2-scaled quantization included.
// Every term scales with the squared source range, so the argmin is
// range-independent; the internal evaluation uses [-1, 1].
inline int optimize_precision(PrecisionRange range, int L, int devices, double gamma_bar) {
    if (range.lo > range.hi) throw std::invalid_argument("optimize_precision: empty range");
    if (range.lo < L) throw std::invalid_argument("optimize_precision: range must start at or above L");
    int best = range.lo;
    double best_value = std::numeric_limits<double>::infinity();
    for (int B = range.lo; B <= range.hi; ++B) {
        const QuantizerSpec spec(B);
        const double value = objective(spec, ube_scheme(B, L), devices, gamma_bar) +
                             quantization_error(spec, devices);
        if (value < best_value) {
            best_value = value;
            best = B;
        }
    }
    return best;
}

struct AdaptivePlan {
    int bits;              // B*, chosen offline at the average SNR
    SlicingScheme scheme;  // widths chosen online at the instantaneous SNR
    double objective;      // closed-form aggregation error of the chosen scheme
    double snr;            // gamma the scheme was evaluated at
};

// Offline B* from the average SNR, then online slicing at the instantaneous
// SNR.
inline AdaptivePlan adaptive_plan(double gamma_bar, double gamma, int L, int devices,
                                  PrecisionRange range) {
    const int bits = optimize_precision(range, L, devices, gamma_bar);
    const QuantizerSpec spec(bits);
    SlicingScheme scheme = optimize_slicing(spec, L, devices, gamma);
    const double value = objective(spec, scheme, devices, gamma);
    return AdaptivePlan{bits, std::move(scheme), value, gamma};
}

inline AdaptivePlan adaptive_plan(double gamma_bar, double gamma, int L, int devices) {
    return adaptive_plan(gamma_bar, gamma, L, devices, default_precision_range(L));
}

}  // namespace aircomp
