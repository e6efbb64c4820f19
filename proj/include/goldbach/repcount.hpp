#pragma once

// Log-weighted counts of representations N = p1 + p2 + p3 with each prime
// in its own progression, plus the pair-correlation weights
//
//     w(n) = sum_{p1 - p2 = n, p1 = l (k)} log p1 log p2.
//
// Two independent paths: an exhaustive loop (the oracle, capped) and an FFT
// convolution of the weighted indicator arrays.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "fft.hpp"

namespace goldbach {

struct WeightedCount {
    double value = 0.0;            // sum of log p1 log p2 log p3
    std::uint64_t solutions = 0;   // ordered triples
    bool even_target = false;      // N even: well defined, but outside the odd-N setting
};

struct DirectOptions {
    std::uint64_t max_n = 3000;
};

namespace detail {

inline double logp(std::uint64_t p) { return std::log(static_cast<double>(p)); }

// a[n] = log n for primes n <= N in the progression, else 0.
inline std::vector<double> weighted_indicator(std::uint64_t N, const Progression& prog, const PrimeTable& table,
                                              bool unit_weights) {
    std::vector<double> a(N + 1, 0.0);
    for (std::uint32_t p : table.primes_up_to(N))
        if (prog.contains(p)) a[p] = unit_weights ? 1.0 : logp(p);
    return a;
}

inline std::uint64_t round_count(double x) {
    const double r = std::nearbyint(x);
    if (std::abs(x - r) >= 1e-3)
        throw ConsistencyError("convolution count " + std::to_string(x) + " is not near an integer");
    return r <= 0.0 ? 0 : static_cast<std::uint64_t>(r);
}

}  // namespace detail

inline WeightedCount count_direct(const TripleInstance& inst, const PrimeTable& table, DirectOptions opt = {}) {
    table.require(inst.N);
    if (inst.N > opt.max_n)
        throw DomainError("direct counting is capped at N <= " + std::to_string(opt.max_n) +
                          "; use the convolution method");
    const auto N = inst.N;
    const auto& [g1, g2, g3] = inst.progs;
    WeightedCount r;
    r.even_target = inst.even_target();
    for (std::uint32_t p1 : table.primes_up_to(N)) {
        if (p1 + 4 > N) break;
        if (!g1.contains(p1)) continue;
        const double l1 = detail::logp(p1);
        for (std::uint32_t p2 : table.primes_up_to(N - p1 - 2)) {
            if (!g2.contains(p2)) continue;
            const std::uint64_t p3 = N - p1 - p2;
            if (!table.is_prime(p3) || !g3.contains(p3)) continue;
            r.value += l1 * detail::logp(p2) * detail::logp(p3);
            ++r.solutions;
        }
    }
    return r;
}

// Spectra of the weighted and unit indicator arrays of one progression,
// zero-padded to a common transform length.
class ProgressionSpectrum {
public:
    ProgressionSpectrum(std::uint64_t N, const Progression& prog, const PrimeTable& table)
        : ProgressionSpectrum(N, prog, table, transform_length(N)) {}

    ProgressionSpectrum(std::uint64_t N, const Progression& prog, const PrimeTable& table, std::size_t length)
        : prog_(prog),
          weighted_(detail::weighted_indicator(N, prog, table, false), length),
          unit_(detail::weighted_indicator(N, prog, table, true), length) {}

    // Next power of two >= 2N + 2: linear convolution of two length-(N+1)
    // arrays without wrap-around.
    static std::size_t transform_length(std::uint64_t N) { return fft::next_pow2(2 * N + 2); }

    const Progression& progression() const { return prog_; }
    const fft::RealSpectrum& weighted() const { return weighted_; }
    const fft::RealSpectrum& unit() const { return unit_; }

private:
    Progression prog_;
    fft::RealSpectrum weighted_;
    fft::RealSpectrum unit_;
};

// Convolution of variables 1 and 2, reusable for any third progression.
class PairConvolution {
public:
    PairConvolution(std::uint64_t N, const ProgressionSpectrum& s1, const ProgressionSpectrum& s2)
        : N_(N), weighted_(s1.weighted().convolve(s2.weighted())), unit_(s1.unit().convolve(s2.unit())) {
        weighted_.resize(N + 1);
        unit_.resize(N + 1);
    }

    WeightedCount complete(const Progression& g3, const PrimeTable& table) const {
        WeightedCount r;
        r.even_target = N_ % 2 == 0;
        for (std::uint32_t p3 : table.primes_up_to(N_)) {
            if (!g3.contains(p3)) continue;
            const std::uint64_t rest = N_ - p3;
            const std::uint64_t c = detail::round_count(unit_[rest]);
            if (c == 0) continue;
            r.solutions += c;
            r.value += weighted_[rest] * detail::logp(p3);
        }
        return r;
    }

private:
    std::uint64_t N_;
    std::vector<double> weighted_;
    std::vector<double> unit_;
};

inline WeightedCount count_convolution(const TripleInstance& inst, const PrimeTable& table) {
    table.require(inst.N);
    const ProgressionSpectrum s1(inst.N, inst.progs[0], table);
    const ProgressionSpectrum s2(inst.N, inst.progs[1], table);
    return PairConvolution(inst.N, s1, s2).complete(inst.progs[2], table);
}

// w(n) for n in [lo, hi]; values[i] belongs to n = lo + i.
struct PairCorrelation {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> values;

    double at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - lo)); }
};

namespace detail {

inline void check_pair_range(std::uint64_t N, std::int64_t lo, std::int64_t hi) {
    const auto n = static_cast<std::int64_t>(N);
    if (lo > hi) throw DomainError("pair-correlation range is empty (lo > hi)");
    if (lo < -n || hi > n) throw DomainError("pair-correlation range must lie within [-N, N]");
}

}  // namespace detail

inline PairCorrelation pair_correlation(std::uint64_t N, const Progression& prog, std::int64_t lo, std::int64_t hi,
                                        const PrimeTable& table) {
    table.require(N);
    detail::check_pair_range(N, lo, hi);
    const std::size_t len = fft::next_pow2(2 * N + 2);
    const fft::RealSpectrum a(detail::weighted_indicator(N, prog, table, false), len);
    const fft::RealSpectrum b(detail::weighted_indicator(N, Progression::all(), table, false), len);
    const auto corr = a.correlate(b);
    PairCorrelation w{lo, hi, {}};
    w.values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) {
        const std::size_t idx = n >= 0 ? static_cast<std::size_t>(n) : len - static_cast<std::size_t>(-n);
        w.values.push_back(corr[idx]);
    }
    return w;
}

// Exhaustive double loop over prime pairs.
inline PairCorrelation pair_correlation_direct(std::uint64_t N, const Progression& prog, std::int64_t lo,
                                               std::int64_t hi, const PrimeTable& table, DirectOptions opt = {}) {
    table.require(N);
    detail::check_pair_range(N, lo, hi);
    if (N > opt.max_n) throw DomainError("direct pair correlation is capped at N <= " + std::to_string(opt.max_n));
    PairCorrelation w{lo, hi, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)};
    const auto primes = table.primes_up_to(N);
    for (std::uint32_t p1 : primes) {
        if (!prog.contains(p1)) continue;
        for (std::uint32_t p2 : primes) {
            const std::int64_t n = std::int64_t{p1} - std::int64_t{p2};
            if (n < lo || n > hi) continue;
            w.values[static_cast<std::size_t>(n - lo)] += detail::logp(p1) * detail::logp(p2);
        }
    }
    return w;
}

}  // namespace goldbach
