#pragma once

// Error term R - M of a single instance and its averages over moduli:
//
//   max-error sweep:      sum_{k_i <= H_i} max_{l} |R - M|
//   weighted-error sweep: sum_{k1, k2} max_{l1, l2} |sum_{k3, (k3, l3) = 1} lambda(k3) (R - M)|
//
// Residue maxima are exhaustive. One convolution of the first two variables
// is shared by every choice of the third progression.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "expsum.hpp"
#include "repcount.hpp"
#include "singular.hpp"

namespace goldbach {

struct SeriesTruncation {
    std::uint64_t q_max = 2000;
    std::uint64_t p_max = 2000;
};

struct DeltaResult {
    WeightedCount R;
    SingularSeriesValue series;
    double M = 0.0;
    double delta = 0.0;
    // delta * 2 prod phi(k_i) / N^2, on the scale of the singular series
    double normalized = 0.0;

    double relative() const {
        return M != 0.0 ? std::abs(delta) / M : (delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
};

inline double normalization(const TripleInstance& inst) {
    const double n = static_cast<double>(inst.N);
    return 2.0 * phi_product(inst) / (n * n);
}

inline DeltaResult make_delta(const TripleInstance& inst, const WeightedCount& R, const SingularSeriesValue& s) {
    DeltaResult d{R, s, main_term(inst, s), 0.0, 0.0};
    d.delta = R.value - d.M;
    d.normalized = d.delta * normalization(inst);
    return d;
}

// R by convolution, M from the local-density product.
inline DeltaResult delta(const TripleInstance& inst, const PrimeTable& table, SeriesTruncation trunc = {},
                         DensityCache* cache = nullptr) {
    const auto R = count_convolution(inst, table);
    const auto s = singular_series_product(inst, trunc.p_max, cache);
    return make_delta(inst, R, s);
}

// -------------------------------------------------------
// Sweeps
// -------------------------------------------------------

enum class SweepMode { MaxError, WeightedError };

inline const char* to_string(SweepMode m) { return m == SweepMode::MaxError ? "E" : "Estar"; }

struct SweepConfig {
    std::uint64_t N = 0;
    std::uint64_t H1 = 1, H2 = 1, H3 = 1;
    SweepMode mode = SweepMode::MaxError;
    WeightSpec lambda;  // weighted mode only; lambda.l3() is the fixed residue
    SeriesTruncation trunc;
    std::uint64_t budget = 1'000'000;  // (k, l) cells
    unsigned threads = 1;
    bool caps_clamped = false;         // set by preset helpers
};

struct SweepRow {
    std::uint64_t k1, k2, k3;  // k3 = 0 in weighted mode: summed over
    std::uint64_t l1, l2, l3;
    double R;
    double M;
    double delta;
    double normalized;
    double value;  // the summand of the aggregate
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepRow> rows;
    double aggregate = 0.0;
    std::uint64_t cells = 0;
    double seconds = 0.0;
};

// Left fold over rows in order; equals report.aggregate bit for bit.
inline double resum(const SweepReport& rep) {
    double s = 0.0;
    for (const auto& r : rep.rows) s += r.value;
    return s;
}

inline std::vector<Progression> progressions_up_to(std::uint64_t H) {
    std::vector<Progression> v;
    for (std::uint64_t k = 1; k <= H; ++k)
        for (std::uint64_t l = 0; l < k; ++l)
            if (std::gcd(k, l) == 1) v.emplace_back(k, l);
    return v;
}

inline std::vector<Progression> weighted_third_progressions(const SweepConfig& cfg) {
    std::vector<Progression> v;
    for (std::uint64_t k = 1; k <= cfg.H3; ++k)
        if (std::gcd(k, cfg.lambda.l3()) == 1) v.emplace_back(k, cfg.lambda.l3());
    return v;
}

inline std::uint64_t sweep_cells(const SweepConfig& cfg) {
    auto count = [](std::uint64_t H) {
        std::uint64_t c = 0;
        for (std::uint64_t k = 1; k <= H; ++k) c += euler_phi(k);
        return c;
    };
    const std::uint64_t third = cfg.mode == SweepMode::MaxError
                                    ? count(cfg.H3)
                                    : static_cast<std::uint64_t>(weighted_third_progressions(cfg).size());
    return count(cfg.H1) * count(cfg.H2) * third;
}

// Caps sqrt(N) L^{-B}, sqrt(N) L^{-B}, N^{1/3} L^{-B} (at least 1), shrunk
// until the sweep fits the budget. Any reduction marks the config clamped.
inline SweepConfig with_asymptotic_caps(SweepConfig cfg, double B) {
    const double n = static_cast<double>(cfg.N);
    const double LB = std::pow(std::log(n), -B);
    auto cap = [](double x) { return x < 1.0 ? std::uint64_t{1} : static_cast<std::uint64_t>(x); };
    cfg.H1 = cfg.H2 = cap(std::sqrt(n) * LB);
    cfg.H3 = cap(std::cbrt(n) * LB);
    cfg.caps_clamped = std::sqrt(n) * LB < 1.0 || std::cbrt(n) * LB < 1.0;
    while (sweep_cells(cfg) > cfg.budget && (cfg.H1 > 1 || cfg.H2 > 1 || cfg.H3 > 1)) {
        cfg.caps_clamped = true;
        if (cfg.H1 >= cfg.H3 && cfg.H1 > 1) {
            cfg.H1 = std::max<std::uint64_t>(1, cfg.H1 * 9 / 10);
            cfg.H2 = cfg.H1;
        } else {
            cfg.H3 = std::max<std::uint64_t>(1, cfg.H3 * 9 / 10);
        }
    }
    return cfg;
}

namespace detail {

struct CellValue {
    double R;
    double M;
};

// R and M for every (g1, g2, g3) with g1, g2, g3 drawn from the three lists,
// laid out as [i1][i2][i3].
inline std::vector<CellValue> compute_cells(std::uint64_t N, const std::vector<Progression>& P1,
                                            const std::vector<Progression>& P2, const std::vector<Progression>& P3,
                                            const SweepConfig& cfg, const PrimeTable& table) {
    const std::size_t n1 = P1.size(), n2 = P2.size(), n3 = P3.size();
    std::vector<CellValue> cells(n1 * n2 * n3);
    DensityCache cache;
    const std::size_t len = ProgressionSpectrum::transform_length(N);
    const unsigned threads = std::max(1u, cfg.threads);

    auto parallel_for = [threads](std::size_t count, auto&& body) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        };
        if (threads == 1 || count < 2) {
            worker();
            return;
        }
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    };

    // Spectra of the second variable are kept when they fit in ~1 GiB.
    const double spectrum_bytes = 2.0 * 16.0 * static_cast<double>(len / 2 + 1);
    const bool keep_second = spectrum_bytes * static_cast<double>(n2) < 1024.0 * 1024.0 * 1024.0;
    std::vector<std::optional<ProgressionSpectrum>> second(keep_second ? n2 : 0);
    if (keep_second) parallel_for(n2, [&](std::size_t i) { second[i].emplace(N, P2[i], table, len); });

    // Main terms depend only on (g1, g2, g3); compute them per cell.
    parallel_for(n1, [&](std::size_t i1) {
        const ProgressionSpectrum s1(N, P1[i1], table, len);
        for (std::size_t i2 = 0; i2 < n2; ++i2) {
            std::optional<ProgressionSpectrum> local;
            const ProgressionSpectrum* s2 = keep_second ? &*second[i2] : &local.emplace(N, P2[i2], table, len);
            const PairConvolution pair(N, s1, *s2);
            for (std::size_t i3 = 0; i3 < n3; ++i3) {
                const TripleInstance inst(N, {P1[i1], P2[i2], P3[i3]});
                const auto R = pair.complete(P3[i3], table);
                const auto s = singular_series_product(inst, cfg.trunc.p_max, &cache);
                cells[(i1 * n2 + i2) * n3 + i3] = {R.value, main_term(inst, s)};
            }
        }
    });
    return cells;
}

inline void check_budget(const SweepConfig& cfg) {
    const auto cells = sweep_cells(cfg);
    if (cells > cfg.budget)
        throw BudgetExceeded("sweep needs " + std::to_string(cells) + " (k, l) cells, budget is " +
                                 std::to_string(cfg.budget),
                             cells);
}

}  // namespace detail

inline SweepReport sweep_max_error(const SweepConfig& cfg, const PrimeTable& table) {
    if (cfg.mode != SweepMode::MaxError) throw DomainError("sweep_max_error needs mode E");
    if (cfg.N < 6) throw DomainError("target N must be >= 6");
    table.require(cfg.N);
    detail::check_budget(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto P1 = progressions_up_to(cfg.H1);
    const auto P2 = progressions_up_to(cfg.H2);
    const auto P3 = progressions_up_to(cfg.H3);
    const auto cells = detail::compute_cells(cfg.N, P1, P2, P3, cfg, table);

    SweepReport rep{cfg, {}, 0.0, cells.size(), 0.0};
    // Progressions are ordered by (k, l), so each modulus is a contiguous run.
    for (std::uint64_t k1 = 1; k1 <= cfg.H1; ++k1)
        for (std::uint64_t k2 = 1; k2 <= cfg.H2; ++k2)
            for (std::uint64_t k3 = 1; k3 <= cfg.H3; ++k3) {
                std::optional<SweepRow> best;
                for (std::size_t i1 = 0; i1 < P1.size(); ++i1) {
                    if (P1[i1].modulus() != k1) continue;
                    for (std::size_t i2 = 0; i2 < P2.size(); ++i2) {
                        if (P2[i2].modulus() != k2) continue;
                        for (std::size_t i3 = 0; i3 < P3.size(); ++i3) {
                            if (P3[i3].modulus() != k3) continue;
                            const auto& c = cells[(i1 * P2.size() + i2) * P3.size() + i3];
                            const double d = c.R - c.M;
                            if (best && !(std::abs(d) > best->value)) continue;
                            const TripleInstance inst(cfg.N, {P1[i1], P2[i2], P3[i3]});
                            best = SweepRow{k1,  k2,  k3,     P1[i1].residue(), P2[i2].residue(),
                                            P3[i3].residue(), c.R, c.M, d, d * normalization(inst), std::abs(d)};
                        }
                    }
                }
                rep.rows.push_back(*best);
                rep.aggregate += best->value;
            }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

inline SweepReport sweep_weighted_error(const SweepConfig& cfg, const PrimeTable& table) {
    if (cfg.mode != SweepMode::WeightedError) throw DomainError("sweep_weighted_error needs mode Estar");
    if (cfg.N < 6) throw DomainError("target N must be >= 6");
    table.require(cfg.N);
    detail::check_budget(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto P1 = progressions_up_to(cfg.H1);
    const auto P2 = progressions_up_to(cfg.H2);
    const auto P3 = weighted_third_progressions(cfg);
    const auto cells = detail::compute_cells(cfg.N, P1, P2, P3, cfg, table);

    SweepReport rep{cfg, {}, 0.0, cells.size(), 0.0};
    const double n2 = static_cast<double>(cfg.N) * static_cast<double>(cfg.N);
    for (std::uint64_t k1 = 1; k1 <= cfg.H1; ++k1)
        for (std::uint64_t k2 = 1; k2 <= cfg.H2; ++k2) {
            std::optional<SweepRow> best;
            for (std::size_t i1 = 0; i1 < P1.size(); ++i1) {
                if (P1[i1].modulus() != k1) continue;
                for (std::size_t i2 = 0; i2 < P2.size(); ++i2) {
                    if (P2[i2].modulus() != k2) continue;
                    double R = 0.0, M = 0.0, inner = 0.0;
                    for (std::size_t i3 = 0; i3 < P3.size(); ++i3) {
                        const double w = cfg.lambda.at(P3[i3].modulus());
                        if (w == 0.0) continue;
                        const auto& c = cells[(i1 * P2.size() + i2) * P3.size() + i3];
                        R += w * c.R;
                        M += w * c.M;
                        inner += w * (c.R - c.M);
                    }
                    if (best && !(std::abs(inner) > best->value)) continue;
                    const double norm = 2.0 * static_cast<double>(euler_phi(k1) * euler_phi(k2)) / n2;
                    best = SweepRow{k1, k2, 0, P1[i1].residue(), P2[i2].residue(), cfg.lambda.l3(),
                                    R,  M,  inner, inner * norm, std::abs(inner)};
                }
            }
            rep.rows.push_back(*best);
            rep.aggregate += best->value;
        }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

inline SweepReport sweep(const SweepConfig& cfg, const PrimeTable& table) {
    return cfg.mode == SweepMode::MaxError ? sweep_max_error(cfg, table) : sweep_weighted_error(cfg, table);
}

}  // namespace goldbach
