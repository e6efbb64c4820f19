#pragma once

// Singular series of the three-prime problem with congruence conditions,
// built two independent ways:
//
//   * the q-sum   S = prod phi(k_i) * sum_{q <= Q} sum_{(a,q)=1} e(-aN/q)
//                        * prod_i G(a, q; k_i, l_i) / phi(lcm(k_i, q))
//   * the Euler product of exact local densities sigma_p, computed by
//     counting solutions of x1 + x2 + x3 = N (mod p^t) in the admissible
//     unit classes.
//
// The normalization is fixed by the main term M = N^2 S / (2 prod phi(k_i)),
// which reduces to the classical ternary Goldbach constant when every k_i = 1.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "arith.hpp"
#include "core.hpp"

namespace goldbach {

struct SingularSeriesValue {
    double value = 0.0;
    std::uint64_t truncation = 0;   // q_max for the q-sum, p_max for the product
    double tail_estimate = 0.0;
};

namespace detail {

// e(num / den) with the phase reduced exactly before scaling.
inline std::complex<double> unit_root(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    const double x = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(x), std::sin(x)};
}

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, x1 = 1, a1 = a % m;
    if (a1 < 0) a1 += m;
    std::int64_t b = a1;
    while (b) {
        const std::int64_t q = g / b;
        std::tie(g, b) = std::make_tuple(b, g - q * b);
        std::tie(x, x1) = std::make_tuple(x1, x - q * x1);
    }
    if (g != 1) throw DomainError("no modular inverse");
    x %= m;
    return x < 0 ? x + m : x;
}

inline bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace detail

// G(a, q; k, l) = sum over units b mod q with b = l (mod gcd(k, q)) of e(ab/q).
// Direct summation over all residues.
inline std::complex<double> restricted_gauss_sum(std::int64_t a, std::uint64_t q, const Progression& prog) {
    if (q == 0) throw DomainError("restricted_gauss_sum needs q >= 1");
    const auto qs = static_cast<std::int64_t>(q);
    if (std::gcd(a, qs) != 1) throw DomainError("restricted_gauss_sum needs gcd(a, q) = 1");
    const std::uint64_t d = std::gcd<std::uint64_t>(prog.modulus(), q);
    std::complex<double> s{0.0, 0.0};
    for (std::uint64_t b = 0; b < q; ++b) {
        if (std::gcd(b, q) != 1 || b % d != prog.residue() % d) continue;
        s += detail::unit_root(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % qs), qs);
    }
    return s;
}

// Closed form of the same sum. With d = gcd(k, q) and m = q / d, the sum
// vanishes unless m is squarefree and coprime to d, and then equals
// mu(m) e(a c / d) where c = l * m^{-1} (mod d).
struct GaussSumShape {
    int mu = 0;              // 0 when the sum vanishes identically
    std::uint64_t d = 1;
    std::uint64_t c = 0;     // phase numerator over d
};

inline GaussSumShape gauss_sum_shape(std::uint64_t q, const Progression& prog) {
    const std::uint64_t d = std::gcd<std::uint64_t>(prog.modulus(), q);
    const std::uint64_t m = q / d;
    if (std::gcd(m, d) != 1) return {};
    const int mu = moebius(m);
    if (mu == 0) return {};
    const std::uint64_t c =
        d == 1 ? 0
               : static_cast<std::uint64_t>((static_cast<__int128>(prog.residue() % d) *
                                             detail::mod_inverse(static_cast<std::int64_t>(m % d),
                                                                 static_cast<std::int64_t>(d))) %
                                            d);
    return {mu, d, c};
}

inline std::complex<double> restricted_gauss_sum_closed(std::int64_t a, std::uint64_t q, const Progression& prog) {
    if (std::gcd(a, static_cast<std::int64_t>(q)) != 1) throw DomainError("restricted_gauss_sum needs gcd(a, q) = 1");
    const auto s = gauss_sum_shape(q, prog);
    if (s.mu == 0) return {0.0, 0.0};
    const auto d = static_cast<std::int64_t>(s.d);
    return static_cast<double>(s.mu) *
           detail::unit_root(static_cast<std::int64_t>((static_cast<__int128>(a % d + d) * s.c) % d), d);
}

inline double phi_product(const TripleInstance& inst) {
    double r = 1.0;
    for (const auto& g : inst.progs) r *= static_cast<double>(euler_phi(g.modulus()));
    return r;
}

// Truncated q-sum. The inner sum over a runs in a fixed order; the series is
// real, so the accumulated imaginary part is checked and then dropped.
inline SingularSeriesValue singular_series_qsum(const TripleInstance& inst, std::uint64_t q_max) {
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    const double norm = phi_product(inst);
    std::complex<double> total{0.0, 0.0};
    double tail = 0.0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        std::array<GaussSumShape, 3> shapes;
        double weight = 1.0;
        bool vanishes = false;
        // Combined phase: sum_i c_i / d_i - N / q, as a numerator over q.
        std::int64_t phase = -static_cast<std::int64_t>(inst.N % q);
        for (int i = 0; i < 3; ++i) {
            const auto& g = inst.progs[i];
            shapes[i] = gauss_sum_shape(q, g);
            if (shapes[i].mu == 0) {
                vanishes = true;
                break;
            }
            const std::uint64_t k = g.modulus();
            const std::uint64_t lcm = k / std::gcd<std::uint64_t>(k, q) * q;
            weight *= shapes[i].mu / static_cast<double>(euler_phi(lcm));
            phase += static_cast<std::int64_t>(shapes[i].c * (q / shapes[i].d));
        }
        if (vanishes) continue;
        const auto qs = static_cast<std::int64_t>(q);
        phase %= qs;
        std::complex<double> inner{0.0, 0.0};
        for (std::int64_t a = 0; a < qs; ++a) {
            if (std::gcd(a, qs) != 1) continue;
            inner += detail::unit_root(static_cast<std::int64_t>((static_cast<__int128>(a) * phase) % qs), qs);
        }
        const auto term = weight * inner;
        total += term;
        if (q * 10 > q_max) tail += std::abs(term);
    }
    if (std::abs(total.imag()) * norm >= 1e-9)
        throw ConsistencyError("singular q-sum has imaginary residue " + std::to_string(total.imag() * norm));
    return {total.real() * norm, q_max, tail * norm};
}

// -------------------------------------------------------
// Local densities
// -------------------------------------------------------

// Per-prime data of an instance: the admissible class of x_i is
// {x mod p^t : p does not divide x, x = l_i (mod p^{v_i})}.
struct LocalKey {
    std::uint64_t p;
    int t;
    std::uint64_t n_mod;                 // N mod p^t
    std::array<int, 3> v;                // v_p(k_i)
    std::array<std::uint64_t, 3> l_mod;  // l_i mod p^{v_i}
    friend auto operator<=>(const LocalKey&, const LocalKey&) = default;
};

inline int stabilization_threshold(const TripleInstance& inst, std::uint64_t p) {
    int v = 0;
    for (const auto& g : inst.progs) v = std::max(v, valuation(g.modulus(), p));
    return v + 1;
}

inline LocalKey local_key(const TripleInstance& inst, std::uint64_t p, int t) {
    LocalKey key{p, t, inst.N % detail::ipow(p, t), {}, {}};
    for (int i = 0; i < 3; ++i) {
        key.v[i] = valuation(inst.progs[i].modulus(), p);
        key.l_mod[i] = inst.progs[i].residue() % detail::ipow(p, key.v[i]);
    }
    return key;
}

// sigma_p(t) = #{x1 + x2 + x3 = N (mod p^t)} * p^t / (|U1| |U2| |U3|).
inline mpq_class local_density(const LocalKey& key) {
    const std::uint64_t m = detail::ipow(key.p, key.t);
    std::array<std::vector<std::uint8_t>, 3> member;
    std::array<std::uint64_t, 3> size{};
    for (int i = 0; i < 3; ++i) {
        const std::uint64_t pv = detail::ipow(key.p, key.v[i]);
        member[i].assign(m, 0);
        for (std::uint64_t x = 0; x < m; ++x)
            if (x % key.p != 0 && x % pv == key.l_mod[i]) {
                member[i][x] = 1;
                ++size[i];
            }
    }
    // x3 = N - x1 - x2; index (s - x2 + m) with s = N - x1 (mod m) lies in [1, 2m).
    std::vector<std::uint8_t> third(2 * m);
    for (std::uint64_t j = 0; j < 2 * m; ++j) third[j] = member[2][j % m];

    std::uint64_t count = 0;
    for (std::uint64_t x1 = 0; x1 < m; ++x1) {
        if (!member[0][x1]) continue;
        const std::uint64_t s = (key.n_mod + m - x1) % m;
        const std::uint8_t* t3 = third.data() + s + m;
        const std::uint8_t* u2 = member[1].data();
        std::uint64_t c = 0;
        for (std::uint64_t x2 = 0; x2 < m; ++x2) c += u2[x2] & t3[-static_cast<std::ptrdiff_t>(x2)];
        count += c;
    }
    mpq_class r(mpz_class(count) * mpz_class(m), mpz_class(size[0]) * size[1] * size[2]);
    r.canonicalize();
    return r;
}

// Thread-safe memo of local densities, shared across instances of a sweep.
class DensityCache {
public:
    mpq_class get(const LocalKey& key) {
        {
            std::lock_guard lock(mu_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        mpq_class v = local_density(key);
        std::lock_guard lock(mu_);
        return memo_.emplace(key, v).first->second;
    }

private:
    std::mutex mu_;
    std::map<LocalKey, mpq_class> memo_;
};

inline mpq_class local_density_factor(const TripleInstance& inst, std::uint64_t p, int t) {
    if (!detail::is_prime_trial(p)) throw DomainError(std::to_string(p) + " is not prime");
    const int threshold = stabilization_threshold(inst, p);
    if (t < threshold)
        throw DomainError("t = " + std::to_string(t) + " is below the stabilization threshold " +
                          std::to_string(threshold) + " at p = " + std::to_string(p));
    return local_density(local_key(inst, p, t));
}

// Truncated Euler product prod_{p <= p_max} sigma_p(t_p), exact.
inline mpq_class singular_series_product_exact(const TripleInstance& inst, std::uint64_t p_max,
                                               DensityCache* cache = nullptr, double* tail = nullptr) {
    if (p_max < 2) throw DomainError("p_max must be >= 2");
    mpz_class num = 1, den = 1;
    mpz_class tail_num = 1, tail_den = 1;
    for (std::uint64_t p = 2; p <= p_max; p += (p == 2 ? 1 : 2)) {
        if (!detail::is_prime_trial(p)) continue;
        const auto key = local_key(inst, p, stabilization_threshold(inst, p));
        const mpq_class s = cache ? cache->get(key) : local_density(key);
        if (s == 0) {
            if (tail) *tail = 0.0;
            return 0;
        }
        num *= s.get_num();
        den *= s.get_den();
        if (p * 10 > p_max) {
            tail_num *= s.get_num();
            tail_den *= s.get_den();
        }
    }
    mpq_class r(num, den);
    r.canonicalize();
    if (tail) {
        mpq_class tf(tail_num, tail_den);
        tf.canonicalize();
        *tail = std::abs(1.0 - tf.get_d()) * r.get_d();
    }
    return r;
}

inline SingularSeriesValue singular_series_product(const TripleInstance& inst, std::uint64_t p_max,
                                                   DensityCache* cache = nullptr) {
    double tail = 0.0;
    const mpq_class r = singular_series_product_exact(inst, p_max, cache, &tail);
    return {r.get_d(), p_max, tail};
}

inline double main_term(const TripleInstance& inst, const SingularSeriesValue& s) {
    const double n = static_cast<double>(inst.N);
    return n * n * s.value / (2.0 * phi_product(inst));
}

}  // namespace goldbach
