#pragma once

// Brute-force reference computations used only by the tests. None of them
// touches the library's fast paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "goldbach/goldbach.hpp"

namespace oracle {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = 2; i <= n; ++i)
        if (is_prime(i)) v.push_back(i);
    return v;
}

inline std::uint64_t phi_count(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t m = 1; m <= n; ++m)
        if (std::gcd(m, n) == 1) ++c;
    return c;
}

// Plain triple loop over primes: every ordered (p1, p2, p3).
struct Count {
    double value = 0.0;
    std::uint64_t solutions = 0;
};

inline Count triple_loop(std::uint64_t N, const std::array<goldbach::Progression, 3>& g) {
    const auto ps = primes_upto(N);
    Count c;
    for (auto p1 : ps)
        for (auto p2 : ps)
            for (auto p3 : ps)
                if (p1 + p2 + p3 == N && g[0].contains(p1) && g[1].contains(p2) && g[2].contains(p3)) {
                    c.value += std::log(double(p1)) * std::log(double(p2)) * std::log(double(p3));
                    ++c.solutions;
                }
    return c;
}

// Classical ternary Goldbach product prod_{p|N}(1 - 1/(p-1)^2) prod_{p∤N}(1 + 1/(p-1)^3), p <= P.
inline double classical_product(std::uint64_t N, std::uint64_t P) {
    double r = 1.0;
    for (std::uint64_t p = 2; p <= P; ++p) {
        if (!is_prime(p)) continue;
        const double d = double(p - 1);
        r *= N % p == 0 ? 1.0 - 1.0 / (d * d) : 1.0 + 1.0 / (d * d * d);
    }
    return r;
}

// Sum over the moduli of the third variable, one prime sum at a time.
inline std::complex<double> weighted_sum_naive(double alpha, std::uint64_t N, const goldbach::WeightSpec& w,
                                               const goldbach::PrimeTable& table) {
    std::complex<double> s{0.0, 0.0};
    for (std::uint64_t k = 1; k <= w.k_max(); ++k) {
        if (std::gcd(k, w.l3()) != 1 || w.at(k) == 0.0) continue;
        s += w.at(k) * goldbach::prime_sum(alpha, N, goldbach::Progression(k, w.l3()), table);
    }
    return s;
}

inline goldbach::Progression random_progression(std::mt19937_64& rng, std::uint64_t k_max) {
    std::uniform_int_distribution<std::uint64_t> kd(1, k_max);
    const auto k = kd(rng);
    std::uniform_int_distribution<std::uint64_t> ld(0, k - 1);
    for (;;) {
        const auto l = ld(rng);
        if (std::gcd(k, l) == 1) return {static_cast<std::int64_t>(k), static_cast<std::int64_t>(l)};
    }
}

inline double rel_err(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
