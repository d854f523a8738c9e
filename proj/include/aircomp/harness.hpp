#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aircomp/adaptive.hpp"
#include "aircomp/analysis.hpp"
#include "aircomp/channel.hpp"
#include "aircomp/core.hpp"
#include "aircomp/detector.hpp"
#include "aircomp/modem.hpp"
#include "aircomp/rng.hpp"

namespace aircomp {

enum class ExperimentKind { sweep_snr, latency, region, adaptive, analyze };

inline std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sweep_snr: return "sweep-snr";
        case ExperimentKind::latency: return "latency";
        case ExperimentKind::region: return "region";
        case ExperimentKind::adaptive: return "adaptive";
        case ExperimentKind::analyze: return "analyze";
    }
    throw std::logic_error("to_string: unknown experiment kind");
}

inline ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "sweep-snr") return ExperimentKind::sweep_snr;
    if (s == "latency") return ExperimentKind::latency;
    if (s == "region") return ExperimentKind::region;
    if (s == "adaptive") return ExperimentKind::adaptive;
    if (s == "analyze") return ExperimentKind::analyze;
    throw std::invalid_argument("unknown experiment: " + s);
}

// Parse an explicit slicing such as "2+2+1+1".
inline std::vector<int> parse_scheme(const std::string& s) {
    std::vector<int> widths;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('+', pos);
        if (next == std::string::npos) next = s.size();
        const std::string tok = s.substr(pos, next - pos);
        if (tok.empty()) throw std::invalid_argument("parse_scheme: empty slice width in '" + s + "'");
        std::size_t used = 0;
        const int w = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("parse_scheme: bad slice width '" + tok + "'");
        widths.push_back(w);
        pos = next + 1;
    }
    if (widths.empty()) throw std::invalid_argument("parse_scheme: empty scheme");
    return widths;
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sweep_snr;
    int devices = 10;  // K
    int bits = 6;      // B
    int slices = 6;    // L
    std::string scheme = "ube";  // "ube" | "adaptive" | explicit "2+2+1+1"
    DetectorRule detector = DetectorRule::map;
    PriorModel priors = PriorModel::exact;
    double snr_min_db = 0.0;
    double snr_max_db = 24.0;
    double snr_step_db = 2.0;
    double snr_avg_db = 18.0;       // average SNR for the offline precision search
    long long trials = 200000;      // aggregated values per (scheme, SNR) point
    double symbol_rate = 1e6;       // symbols per second
    long long payload = 181503;     // M, scalar samples per latency computation
    double x_min = -1.0;
    double x_max = 1.0;
    std::uint64_t master_seed = 1;
    std::string out = "results";
    std::string format = "both";  // both | csv | json

    long long padded_payload() const { return payload + (payload & 1); }

    std::vector<double> snr_grid_db() const {
        std::vector<double> grid;
        const int n = static_cast<int>(std::floor((snr_max_db - snr_min_db) / snr_step_db + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) grid.push_back(snr_min_db + i * snr_step_db);
        return grid;
    }

    void validate() const {
        if (devices < 1) throw std::invalid_argument("config: devices must be >= 1");
        if (bits < 1 || bits > 30) throw std::invalid_argument("config: bits must lie in [1, 30]");
        if (slices < 1) throw std::invalid_argument("config: slices must be >= 1");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (payload < 1) throw std::invalid_argument("config: payload must be >= 1");
        if (!(symbol_rate > 0.0)) throw std::invalid_argument("config: symbol rate must be positive");
        if (!(x_max > x_min)) throw std::invalid_argument("config: empty source range");
        if (!(snr_step_db > 0.0)) throw std::invalid_argument("config: SNR step must be positive");
        if (snr_max_db < snr_min_db) throw std::invalid_argument("config: empty SNR grid");
        if (format != "both" && format != "csv" && format != "json")
            throw std::invalid_argument("config: format must be both, csv, or json");
        if (scheme != "ube" && scheme != "adaptive") {
            const auto widths = parse_scheme(scheme);
            int total = 0;
            for (int w : widths) total += w;
            if (total != bits)
                throw std::invalid_argument("config: scheme widths must sum to the quantizer bits");
        } else if (bits < slices) {
            throw std::invalid_argument("config: bits must be >= slices");
        }
    }

    // Widths used by a digital run at the given SNR.
    SlicingScheme resolve_scheme(double gamma) const {
        if (scheme == "ube") return ube_scheme(bits, slices);
        if (scheme == "adaptive")
            return optimize_slicing(QuantizerSpec(bits, x_min, x_max), slices, devices, gamma);
        return SlicingScheme(parse_scheme(scheme));
    }
};

struct ResultRow {
    std::string experiment;
    std::string scheme;
    double snr_db = 0.0;
    int k = 0;
    int b = 0;
    int l = 0;
    std::string slicing;
    long long trials = 0;
    double mse = 0.0;
    double nmse = 0.0;
    double ci95 = 0.0;
    double latency_s = 0.0;
    std::uint64_t seed = 0;
};

// Per-point seed; the detector is deliberately excluded so MAP and ML runs
// share data and noise realizations.
inline std::uint64_t point_seed(const ExperimentConfig& cfg, std::string_view scheme_tag,
                                std::size_t snr_index) {
    return derive_seed(cfg.master_seed,
                       {hash_tag(to_string(cfg.kind)), hash_tag(scheme_tag), snr_index});
}

namespace detail {

constexpr long long kBlockPairs = 4096;  // value pairs per independently seeded block

struct Accumulator {
    double sum_sq = 0.0;
    double sum_quad = 0.0;
    double sum_agg = 0.0;
    long long count = 0;

    void add(double err, double agg_err) {
        const double e2 = err * err;
        sum_sq += e2;
        sum_quad += e2 * e2;
        sum_agg += agg_err * agg_err;
        ++count;
    }
    double mse() const { return sum_sq / static_cast<double>(count); }
    double ci95() const {
        const double m = mse();
        const double var = std::max(sum_quad / static_cast<double>(count) - m * m, 0.0);
        return 1.96 * std::sqrt(var / static_cast<double>(count));
    }
};

}  // namespace detail

// Monte Carlo run of the sliced digital pipeline at linear SNR gamma.
inline ErrorReport run_digital(const ExperimentConfig& cfg, double gamma, std::uint64_t seed) {
    cfg.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("run_digital: gamma must be positive");
    const SlicingScheme scheme = cfg.resolve_scheme(gamma);
    const QuantizerSpec spec(scheme.total_bits(), cfg.x_min, cfg.x_max);
    const double rho = 1.0;
    const double noise_var = std::isinf(gamma) ? 0.0 : rho * rho / gamma;
    const int L = scheme.slices();
    const int K = cfg.devices;

    std::vector<PamGrid> grids;
    std::vector<AggregatedConstellation> constellations;
    std::vector<BoundarySet> bounds;
    for (int ell = 0; ell < L; ++ell) {
        grids.emplace_back(scheme.width(ell));
        constellations.push_back(make_constellation(scheme.width(ell), K, cfg.priors));
        bounds.push_back(map_boundaries(constellations.back(), rho, noise_var, cfg.detector));
    }

    const long long pairs = (cfg.trials + 1) / 2;
    detail::Accumulator acc;
    std::vector<ComplexSymbol> sums(static_cast<std::size_t>(L));
    std::vector<std::uint64_t> u_odd(static_cast<std::size_t>(L)), u_even(static_cast<std::size_t>(L));

    for (long long block = 0; block * detail::kBlockPairs < pairs; ++block) {
        Rng data_rng(derive_seed(seed, {hash_tag("data"), static_cast<std::uint64_t>(block)}));
        Rng noise_rng(derive_seed(seed, {hash_tag("noise"), static_cast<std::uint64_t>(block)}));
        const long long hi = std::min((block + 1) * detail::kBlockPairs, pairs);
        for (long long t = block * detail::kBlockPairs; t < hi; ++t) {
            double y_odd = 0.0, y_even = 0.0;
            std::uint64_t sum_odd = 0, sum_even = 0;
            std::fill(sums.begin(), sums.end(), ComplexSymbol{});
            for (int k = 0; k < K; ++k) {
                const double x_odd = data_rng.uniform(cfg.x_min, cfg.x_max);
                const double x_even = data_rng.uniform(cfg.x_min, cfg.x_max);
                y_odd += x_odd;
                y_even += x_even;
                const std::uint64_t q_odd = quantize(x_odd, spec);
                const std::uint64_t q_even = quantize(x_even, spec);
                sum_odd += q_odd;
                sum_even += q_even;
                const auto s_odd = slice(q_odd, scheme);
                const auto s_even = slice(q_even, scheme);
                for (int ell = 0; ell < L; ++ell)
                    sums[static_cast<std::size_t>(ell)] += map_digital(
                        s_odd[static_cast<std::size_t>(ell)], s_even[static_cast<std::size_t>(ell)],
                        grids[static_cast<std::size_t>(ell)]);
            }
            for (int ell = 0; ell < L; ++ell) {
                const auto i = static_cast<std::size_t>(ell);
                const ComplexSymbol r = rho * sums[i] + awgn_sample(noise_rng, noise_var);
                u_odd[i] = detect_pam(r.real(), bounds[i], constellations[i]);
                u_even[i] = detect_pam(r.imag(), bounds[i], constellations[i]);
            }
            const std::uint64_t u_hat_odd = assemble_aggregate(u_odd, scheme);
            const std::uint64_t u_hat_even = assemble_aggregate(u_even, scheme);
            const double agg_odd =
                spec.step() * (static_cast<double>(u_hat_odd) - static_cast<double>(sum_odd));
            const double agg_even =
                spec.step() * (static_cast<double>(u_hat_even) - static_cast<double>(sum_even));
            acc.add(denormalize(u_hat_odd, spec, K) - y_odd, agg_odd);
            acc.add(denormalize(u_hat_even, spec, K) - y_even, agg_even);
        }
    }

    const double mean_sq_y = mean_square_aggregate(cfg.x_min, cfg.x_max, K);
    const double aggregation = acc.sum_agg / static_cast<double>(acc.count);
    ErrorReport rep = make_error_report(aggregation, acc.mse() - aggregation, mean_sq_y,
                                        ErrorReport::Source::monte_carlo);
    rep.devices = K;
    rep.bits = spec.bits;
    rep.scheme_label = scheme.label();
    rep.snr = gamma;
    rep.ci95 = acc.ci95();
    rep.trials = acc.count;
    rep.seed = seed;
    return rep;
}

inline ErrorReport run_digital(const ExperimentConfig& cfg, double gamma) {
    return run_digital(cfg, gamma, point_seed(cfg, "digital", 0));
}

// Monte Carlo run of the analog repetition baseline: each aggregated symbol
// is transmitted over L slots and the received values are averaged.
inline ErrorReport run_analog(const ExperimentConfig& cfg, double gamma, std::uint64_t seed) {
    cfg.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("run_analog: gamma must be positive");
    const double rho = 1.0;
    const double noise_var = std::isinf(gamma) ? 0.0 : rho * rho / gamma;
    const int K = cfg.devices;
    const int L = cfg.slices;

    const long long pairs = (cfg.trials + 1) / 2;
    detail::Accumulator acc;

    for (long long block = 0; block * detail::kBlockPairs < pairs; ++block) {
        Rng data_rng(derive_seed(seed, {hash_tag("data"), static_cast<std::uint64_t>(block)}));
        Rng noise_rng(derive_seed(seed, {hash_tag("noise"), static_cast<std::uint64_t>(block)}));
        const long long hi = std::min((block + 1) * detail::kBlockPairs, pairs);
        for (long long t = block * detail::kBlockPairs; t < hi; ++t) {
            double y_odd = 0.0, y_even = 0.0;
            ComplexSymbol sum{};
            for (int k = 0; k < K; ++k) {
                const double x_odd = data_rng.uniform(cfg.x_min, cfg.x_max);
                const double x_even = data_rng.uniform(cfg.x_min, cfg.x_max);
                y_odd += x_odd;
                y_even += x_even;
                sum += map_analog(x_odd, x_even, cfg.x_min, cfg.x_max);
            }
            ComplexSymbol mean{};
            for (int rep = 0; rep < L; ++rep) mean += rho * sum + awgn_sample(noise_rng, noise_var);
            mean /= static_cast<double>(L);
            const auto [y_hat_odd, y_hat_even] = demap_analog(mean, rho, K, cfg.x_min, cfg.x_max);
            acc.add(y_hat_odd - y_odd, y_hat_odd - y_odd);
            acc.add(y_hat_even - y_even, y_hat_even - y_even);
        }
    }

    const double mean_sq_y = mean_square_aggregate(cfg.x_min, cfg.x_max, K);
    ErrorReport rep =
        make_error_report(acc.mse(), 0.0, mean_sq_y, ErrorReport::Source::monte_carlo);
    rep.devices = K;
    rep.bits = 0;
    rep.scheme_label = "analog";
    rep.snr = gamma;
    rep.ci95 = acc.ci95();
    rep.trials = acc.count;
    rep.seed = seed;
    return rep;
}

inline ErrorReport run_analog(const ExperimentConfig& cfg, double gamma) {
    return run_analog(cfg, gamma, point_seed(cfg, "analog", 0));
}

// Orthogonal-access baseline: error-free links leave only quantization error;
// latency follows from the capacity-achieving per-device rate.
inline std::pair<ErrorReport, double> run_orthogonal(const ExperimentConfig& cfg, double gamma) {
    cfg.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("run_orthogonal: gamma must be positive");
    const QuantizerSpec spec(cfg.bits, cfg.x_min, cfg.x_max);
    const double mean_sq_y = mean_square_aggregate(cfg.x_min, cfg.x_max, cfg.devices);
    ErrorReport rep = make_error_report(0.0, quantization_error(spec, cfg.devices), mean_sq_y,
                                        ErrorReport::Source::closed_form);
    rep.devices = cfg.devices;
    rep.bits = cfg.bits;
    rep.scheme_label = "orthogonal";
    rep.snr = gamma;
    const double bits_total = static_cast<double>(cfg.devices) *
                              static_cast<double>(cfg.padded_payload()) * cfg.bits;
    const double latency = bits_total / (cfg.symbol_rate * std::log2(1.0 + gamma));
    return {rep, latency};
}

// AirComp latency: M/2 QAM symbols, L slices each, independent of K.
inline double latency_aircomp(const ExperimentConfig& cfg) {
    cfg.validate();
    return (static_cast<double>(cfg.padded_payload()) / 2.0) * cfg.slices / cfg.symbol_rate;
}

namespace detail {

inline ResultRow base_row(const ExperimentConfig& cfg, const std::string& scheme, double snr_db) {
    ResultRow row;
    row.experiment = to_string(cfg.kind);
    row.scheme = scheme;
    row.snr_db = snr_db;
    row.k = cfg.devices;
    row.b = cfg.bits;
    row.l = cfg.slices;
    return row;
}

inline ResultRow report_row(const ExperimentConfig& cfg, const std::string& scheme, double snr_db,
                            const ErrorReport& rep, double latency) {
    ResultRow row = base_row(cfg, scheme, snr_db);
    row.b = rep.bits > 0 ? rep.bits : cfg.bits;
    row.slicing = rep.scheme_label;
    row.trials = rep.trials;
    row.mse = rep.total;
    row.nmse = rep.normalized;
    row.ci95 = rep.ci95;
    row.latency_s = latency;
    row.seed = rep.seed;
    return row;
}

// Closed-form digital report for row plumbing.
inline ErrorReport closed_form_digital(const ExperimentConfig& cfg, double gamma,
                                       AggregationMode mode) {
    const SlicingScheme scheme = cfg.resolve_scheme(gamma);
    const QuantizerSpec spec(scheme.total_bits(), cfg.x_min, cfg.x_max);
    const double agg =
        aggregation_error(spec, scheme, cfg.devices, 1.0, 1.0 / gamma, mode, cfg.detector, cfg.priors);
    ErrorReport rep = make_error_report(agg, quantization_error(spec, cfg.devices),
                                        mean_square_aggregate(cfg.x_min, cfg.x_max, cfg.devices),
                                        ErrorReport::Source::closed_form);
    rep.devices = cfg.devices;
    rep.bits = spec.bits;
    rep.scheme_label = scheme.label();
    rep.snr = gamma;
    return rep;
}

}  // namespace detail

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Run the configured experiment over the SNR grid and return plot-ready rows.
inline std::vector<ResultRow> sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.snr_grid_db();
    const std::string digital_label =
        cfg.detector == DetectorRule::map ? "digital-map" : "digital-ml";
    std::vector<ResultRow> rows;

    switch (cfg.kind) {
        case ExperimentKind::sweep_snr: {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gamma = db_to_linear(grid[i]);
                const SlicingScheme scheme = cfg.resolve_scheme(gamma);
                const auto dig = run_digital(cfg, gamma,
                                             point_seed(cfg, "digital:" + scheme.label(), i));
                rows.push_back(
                    detail::report_row(cfg, digital_label, grid[i], dig, latency_aircomp(cfg)));
                const auto ana = run_analog(cfg, gamma, point_seed(cfg, "analog", i));
                rows.push_back(
                    detail::report_row(cfg, "analog", grid[i], ana, latency_aircomp(cfg)));
                const auto [ort, latency] = run_orthogonal(cfg, gamma);
                rows.push_back(detail::report_row(cfg, "orthogonal", grid[i], ort, latency));
            }
            break;
        }
        case ExperimentKind::latency: {
            const double snr_db = grid.front();
            const double gamma = db_to_linear(snr_db);
            for (int k = 2; k <= cfg.devices; ++k) {
                ExperimentConfig sub = cfg;
                sub.devices = k;
                auto rep = detail::closed_form_digital(sub, gamma, AggregationMode::exact);
                ResultRow air = detail::report_row(sub, "aircomp", snr_db, rep, latency_aircomp(sub));
                rows.push_back(air);
                const auto [ort, latency] = run_orthogonal(sub, gamma);
                rows.push_back(detail::report_row(sub, "orthogonal", snr_db, ort, latency));
            }
            break;
        }
        case ExperimentKind::region: {
            if (cfg.bits % cfg.slices != 0)
                throw std::invalid_argument("region experiment needs a uniform scheme (bits divisible by slices)");
            const int b = cfg.bits / cfg.slices;
            const double delta_x = cfg.x_max - cfg.x_min;
            const double mean_sq_y = mean_square_aggregate(cfg.x_min, cfg.x_max, cfg.devices);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gamma = db_to_linear(grid[i]);
                auto exact = detail::closed_form_digital(cfg, gamma, AggregationMode::exact);
                rows.push_back(detail::report_row(cfg, "digital-exact", grid[i], exact, 0.0));
                ResultRow cb = detail::base_row(cfg, "digital-chernoff", grid[i]);
                cb.slicing = cfg.resolve_scheme(gamma).label();
                cb.mse = digital_error_uniform_chernoff(cfg.bits, b, cfg.slices, cfg.devices, gamma,
                                                        delta_x);
                cb.nmse = cb.mse / mean_sq_y;
                rows.push_back(cb);
                ResultRow ana = detail::base_row(cfg, "analog", grid[i]);
                ana.slicing = "analog";
                ana.mse = analog_error(delta_x, cfg.slices, gamma);
                ana.nmse = ana.mse / mean_sq_y;
                rows.push_back(ana);
            }
            const auto window = snr_regime(cfg.bits, b, cfg.slices, cfg.devices);
            if (!window.empty) {
                for (const auto& [label, gamma_db] :
                     {std::pair<const char*, double>{"window-lo", window.lo_db()},
                      std::pair<const char*, double>{"window-hi", window.hi_db()}}) {
                    auto rep = detail::closed_form_digital(cfg, db_to_linear(gamma_db),
                                                           AggregationMode::exact);
                    rows.push_back(detail::report_row(cfg, label, gamma_db, rep, 0.0));
                }
            }
            break;
        }
        case ExperimentKind::adaptive: {
            const double gamma_bar = db_to_linear(cfg.snr_avg_db);
            const int best_bits =
                optimize_precision(default_precision_range(cfg.slices), cfg.slices, cfg.devices,
                                   gamma_bar);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gamma = db_to_linear(grid[i]);
                ExperimentConfig ad = cfg;
                ad.bits = best_bits;
                ad.scheme = "adaptive";
                const SlicingScheme plan = ad.resolve_scheme(gamma);
                const auto rep_ad =
                    run_digital(ad, gamma, point_seed(cfg, "digital:" + plan.label(), i));
                rows.push_back(detail::report_row(ad, "digital-adaptive", grid[i], rep_ad,
                                                  latency_aircomp(ad)));
                ExperimentConfig ub = cfg;
                ub.bits = best_bits;
                ub.scheme = "ube";
                const auto rep_ub = run_digital(
                    ub, gamma, point_seed(cfg, "digital:" + ube_scheme(best_bits, cfg.slices).label(), i));
                rows.push_back(
                    detail::report_row(ub, "digital-ube", grid[i], rep_ub, latency_aircomp(ub)));
                const auto ana = run_analog(cfg, gamma, point_seed(cfg, "analog", i));
                rows.push_back(
                    detail::report_row(cfg, "analog", grid[i], ana, latency_aircomp(cfg)));
            }
            break;
        }
        case ExperimentKind::analyze: {
            const double delta_x = cfg.x_max - cfg.x_min;
            const double mean_sq_y = mean_square_aggregate(cfg.x_min, cfg.x_max, cfg.devices);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double gamma = db_to_linear(grid[i]);
                auto exact = detail::closed_form_digital(cfg, gamma, AggregationMode::exact);
                rows.push_back(detail::report_row(cfg, "digital-exact", grid[i], exact, 0.0));
                auto asym = detail::closed_form_digital(cfg, gamma, AggregationMode::asymptotic);
                rows.push_back(detail::report_row(cfg, "digital-asymptotic", grid[i], asym, 0.0));
                ResultRow ana = detail::base_row(cfg, "analog", grid[i]);
                ana.slicing = "analog";
                ana.mse = analog_error(delta_x, cfg.slices, gamma);
                ana.nmse = ana.mse / mean_sq_y;
                rows.push_back(ana);
                const auto [ort, latency] = run_orthogonal(cfg, gamma);
                rows.push_back(detail::report_row(cfg, "orthogonal", grid[i], ort, latency));
            }
            break;
        }
    }
    return rows;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

// Write rows to <path>.csv and/or <path>.json; returns the files written.
inline std::vector<std::string> emit(const std::vector<ResultRow>& rows, const std::string& path,
                                     const std::string& format = "both") {
    if (rows.empty()) throw std::invalid_argument("emit: no rows to write");
    if (format != "both" && format != "csv" && format != "json")
        throw std::invalid_argument("emit: format must be both, csv, or json");
    std::vector<std::string> written;

    if (format == "both" || format == "csv") {
        const std::string file = path + ".csv";
        std::ofstream os(file);
        if (!os) throw std::runtime_error("emit: cannot write " + file);
        os << "experiment,scheme,snr_db,k,b,l,slicing,trials,mse,nmse,ci95,latency_s,seed\n";
        for (const auto& r : rows) {
            os << r.experiment << ',' << r.scheme << ',' << detail::format_double(r.snr_db) << ','
               << r.k << ',' << r.b << ',' << r.l << ',' << r.slicing << ',' << r.trials << ','
               << detail::format_double(r.mse) << ',' << detail::format_double(r.nmse) << ','
               << detail::format_double(r.ci95) << ',' << detail::format_double(r.latency_s) << ','
               << r.seed << '\n';
        }
        if (!os) throw std::runtime_error("emit: write failed for " + file);
        written.push_back(file);
    }

    if (format == "both" || format == "json") {
        const std::string file = path + ".json";
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"experiment", r.experiment},
                           {"scheme", r.scheme},
                           {"snr_db", r.snr_db},
                           {"k", r.k},
                           {"b", r.b},
                           {"l", r.l},
                           {"slicing", r.slicing},
                           {"trials", r.trials},
                           {"mse", r.mse},
                           {"nmse", r.nmse},
                           {"ci95", r.ci95},
                           {"latency_s", r.latency_s},
                           {"seed", r.seed}});
        }
        std::ofstream os(file);
        if (!os) throw std::runtime_error("emit: cannot write " + file);
        os << arr.dump(2) << '\n';
        if (!os) throw std::runtime_error("emit: write failed for " + file);
        written.push_back(file);
    }
    return written;
}

}  // namespace aircomp
