#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aircomp {

// Uniform B-bit scalar quantizer over [x_min, x_max].
struct QuantizerSpec {
    int bits;
    double x_min;
    double x_max;

    QuantizerSpec(int bits_, double x_min_ = -1.0, double x_max_ = 1.0)
        : bits(bits_), x_min(x_min_), x_max(x_max_) {
        if (bits < 1 || bits > 30) throw std::invalid_argument("QuantizerSpec: bits must be in [1,30]");
        if (!(x_max > x_min)) throw std::invalid_argument("QuantizerSpec: x_max must exceed x_min");
    }

    std::uint64_t levels() const { return std::uint64_t{1} << bits; }
    double range() const { return x_max - x_min; }
    double step() const { return range() / static_cast<double>(levels()); }
};

// Bit widths b_1..b_L; slice 1 carries the least significant bits.
// Widths are kept non-increasing so narrow (more reliable) slices sit at the
// high-significance end.
class SlicingScheme {
public:
    explicit SlicingScheme(std::vector<int> widths) : widths_(std::move(widths)) {
        if (widths_.empty()) throw std::invalid_argument("SlicingScheme: empty width list");
        for (std::size_t i = 0; i < widths_.size(); ++i) {
            if (widths_[i] < 1) throw std::invalid_argument("SlicingScheme: widths must be positive");
            if (i > 0 && widths_[i] > widths_[i - 1])
                throw std::invalid_argument("SlicingScheme: widths must be non-increasing");
        }
        offsets_.resize(widths_.size() + 1, 0);
        for (std::size_t i = 0; i < widths_.size(); ++i) offsets_[i + 1] = offsets_[i] + widths_[i];
        if (offsets_.back() > 62) throw std::invalid_argument("SlicingScheme: total width too large");
    }

    int slices() const { return static_cast<int>(widths_.size()); }
    int width(int ell) const { return widths_.at(static_cast<std::size_t>(ell)); }          // 0-based
    int offset(int ell) const { return offsets_.at(static_cast<std::size_t>(ell)); }        // c_ell, offset(0)=0
    int total_bits() const { return offsets_.back(); }
    const std::vector<int>& widths() const { return widths_; }

    std::string label() const {
        std::string s;
        for (std::size_t i = 0; i < widths_.size(); ++i) {
            if (i) s += '+';
            s += std::to_string(widths_[i]);
        }
        return s;
    }

    bool operator==(const SlicingScheme& o) const { return widths_ == o.widths_; }

private:
    std::vector<int> widths_;
    std::vector<int> offsets_;
};

struct DataBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
};

struct AggregateResult {
    std::vector<double> y_hat;
    std::vector<std::uint64_t> u_hat;
    int devices = 0;
};

inline std::uint64_t quantize(double x, const QuantizerSpec& spec) {
    if (!std::isfinite(x)) throw std::domain_error("quantize: non-finite input");
    const double q = std::floor((x - spec.x_min) / spec.step());
    if (q < 0.0) return 0;
    const std::uint64_t top = spec.levels() - 1;
    if (q > static_cast<double>(top)) return top;
    return static_cast<std::uint64_t>(q);
}

// Cell midpoint: x_hat = q*step + step/2 + x_min.
inline double dequantize(std::uint64_t q, const QuantizerSpec& spec) {
    if (q >= spec.levels()) throw std::out_of_range("dequantize: index out of range");
    const double d = spec.step();
    return static_cast<double>(q) * d + d / 2.0 + spec.x_min;
}

// q[ell] = floor(q / 2^{c_{ell-1}}) mod 2^{b_ell}.
inline std::vector<std::uint64_t> slice(std::uint64_t q, const SlicingScheme& scheme) {
    if (scheme.total_bits() < 62 && q >= (std::uint64_t{1} << scheme.total_bits()))
        throw std::out_of_range("slice: index wider than the scheme");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(scheme.slices()));
    for (int ell = 0; ell < scheme.slices(); ++ell) {
        const std::uint64_t mask = (std::uint64_t{1} << scheme.width(ell)) - 1;
        out[static_cast<std::size_t>(ell)] = (q >> scheme.offset(ell)) & mask;
    }
    return out;
}

inline std::uint64_t reconstruct_index(std::span<const std::uint64_t> slices, const SlicingScheme& scheme) {
    if (static_cast<int>(slices.size()) != scheme.slices())
        throw std::invalid_argument("reconstruct_index: slice count mismatch");
    std::uint64_t q = 0;
    for (int ell = 0; ell < scheme.slices(); ++ell) {
        const std::uint64_t v = slices[static_cast<std::size_t>(ell)];
        if (v >> scheme.width(ell)) throw std::out_of_range("reconstruct_index: slice value out of range");
        q += v << scheme.offset(ell);
    }
    return q;
}

// u_hat = sum_ell u[ell] * 2^{c_{ell-1}}. With error-free slice sums this
// equals the sum of the original indices (slicing is linear under addition).
inline std::uint64_t assemble_aggregate(std::span<const std::uint64_t> slice_sums, const SlicingScheme& scheme) {
    if (static_cast<int>(slice_sums.size()) != scheme.slices())
        throw std::invalid_argument("assemble_aggregate: slice count mismatch");
    std::uint64_t u = 0;
    for (int ell = 0; ell < scheme.slices(); ++ell)
        u += slice_sums[static_cast<std::size_t>(ell)] << scheme.offset(ell);
    return u;
}

// y_hat = u_hat*step + (step/2 + x_min)*K, the K-fold counterpart of dequantize.
inline double denormalize(std::uint64_t u_hat, const QuantizerSpec& spec, int devices) {
    if (devices < 1) throw std::invalid_argument("denormalize: device count must be positive");
    const double d = spec.step();
    return static_cast<double>(u_hat) * d + (d / 2.0 + spec.x_min) * static_cast<double>(devices);
}

}  // namespace aircomp
