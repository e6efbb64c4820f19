#pragma once

// Exponential sums over primes in progressions, the weighted sum over
// moduli, exact coefficient extraction on a discrete grid, and the Fourier
// expansion of the kernel min(H, 1/||x||).
//
// Grid evaluation is exact whenever the grid size T exceeds the spread of
// frequencies involved: a trigonometric polynomial with frequencies in
// (-T, T) has its constant term equal to the average over T equispaced
// points.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "fft.hpp"

namespace goldbach {

using cplx = std::complex<double>;

// e(x) = exp(2 pi i x), with x reduced mod 1 first.
inline cplx e1(double x) {
    const double f = x - std::floor(x);
    return std::polar(1.0, 2.0 * std::numbers::pi * f);
}

// -------------------------------------------------------
// Weights lambda(k), |lambda(k)| <= 1, attached to modulus k of the third
// variable; moduli not coprime to the fixed residue l3 are skipped.
// -------------------------------------------------------
class WeightSpec {
public:
    WeightSpec() = default;

    // lambda[k - 1] is the weight of modulus k.
    WeightSpec(std::uint64_t l3, std::vector<double> lambda) : l3_(l3), lambda_(std::move(lambda)) {
        if (l3 < 1) throw DomainError("fixed residue l3 must be a positive integer");
        for (std::size_t i = 0; i < lambda_.size(); ++i)
            if (!(std::abs(lambda_[i]) <= 1.0))
                throw DomainError("weight of modulus " + std::to_string(i + 1) + " exceeds 1 in absolute value");
    }

    std::uint64_t l3() const { return l3_; }
    std::uint64_t k_max() const { return lambda_.size(); }

    // Effective weight: zero beyond k_max and when gcd(k, l3) != 1.
    double at(std::uint64_t k) const {
        if (k < 1 || k > lambda_.size() || std::gcd(k, l3_) != 1) return 0.0;
        return lambda_[k - 1];
    }

    bool is_zero() const {
        for (std::uint64_t k = 1; k <= k_max(); ++k)
            if (at(k) != 0.0) return false;
        return true;
    }

    // Presets: zero, ones, alternating ((-1)^k), mobius.
    static WeightSpec preset(const std::string& name, std::uint64_t l3, std::uint64_t k_max) {
        std::vector<double> v(k_max, 0.0);
        for (std::uint64_t k = 1; k <= k_max; ++k) {
            if (name == "zero") v[k - 1] = 0.0;
            else if (name == "ones") v[k - 1] = 1.0;
            else if (name == "alternating") v[k - 1] = k % 2 ? -1.0 : 1.0;
            else if (name == "mobius") v[k - 1] = moebius(k);
            else throw DomainError("unknown weight preset '" + name + "'");
        }
        return {l3, std::move(v)};
    }

    // Plain text, one "k value" pair per line; '#' starts a comment.
    // Unlisted moduli up to the largest listed one get weight 0.
    static WeightSpec parse(std::istream& in, std::uint64_t l3) {
        std::vector<double> v;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            std::istringstream ls(line);
            long long k;
            double val;
            if (!(ls >> k)) continue;
            if (!(ls >> val) || k < 1)
                throw DomainError("malformed weight line " + std::to_string(lineno) + ": '" + line + "'");
            if (static_cast<std::uint64_t>(k) > v.size()) v.resize(static_cast<std::size_t>(k), 0.0);
            v[static_cast<std::size_t>(k - 1)] = val;
        }
        return {l3, std::move(v)};
    }

    static WeightSpec load(const std::string& path, std::uint64_t l3) {
        std::ifstream f(path);
        if (!f) throw DomainError("cannot open weight file '" + path + "'");
        return parse(f, l3);
    }

private:
    std::uint64_t l3_ = 1;
    std::vector<double> lambda_;
};

// -------------------------------------------------------
// Prime sums
// -------------------------------------------------------

// sum_{p <= N, p = l (k)} log p e(alpha p)
inline cplx prime_sum(double alpha, std::uint64_t N, const Progression& prog, const PrimeTable& table) {
    cplx s{0.0, 0.0};
    for (std::uint32_t p : table.primes_up_to(N))
        if (prog.contains(p)) s += std::log(static_cast<double>(p)) * e1(alpha * p);
    return s;
}

// Coefficient array of the prime sum: a[p] = log p on the progression.
inline std::vector<double> prime_sum_coefficients(std::uint64_t N, const Progression& prog, const PrimeTable& table) {
    std::vector<double> a(N + 1, 0.0);
    for (std::uint32_t p : table.primes_up_to(N))
        if (prog.contains(p)) a[p] = std::log(static_cast<double>(p));
    return a;
}

// c[p] = log p * sum_{k | p - l3} lambda(k), by enumerating the divisors of
// |p - l3| rather than looping over every modulus.
inline std::vector<double> weighted_prime_coefficients(std::uint64_t N, const WeightSpec& w, const PrimeTable& table) {
    std::vector<double> c(N + 1, 0.0);
    if (w.k_max() == 0) return c;
    double all = 0.0;  // p = l3: every modulus divides 0
    for (std::uint64_t k = 1; k <= w.k_max(); ++k) all += w.at(k);
    for (std::uint32_t p : table.primes_up_to(N)) {
        double s = 0.0;
        if (p == w.l3()) {
            s = all;
        } else {
            const std::uint64_t gap = p > w.l3() ? p - w.l3() : w.l3() - p;
            const auto f = gap <= table.limit() ? table.factorize(gap) : factorize(gap);
            for (std::uint64_t k : divisors(f))
                if (k <= w.k_max()) s += w.at(k);
        }
        if (s != 0.0) c[p] = std::log(static_cast<double>(p)) * s;
    }
    return c;
}

// sum_k lambda(k) * prime_sum(alpha, N, (k, l3 mod k))
inline cplx weighted_prime_sum(double alpha, std::uint64_t N, const WeightSpec& w, const PrimeTable& table) {
    const auto c = weighted_prime_coefficients(N, w, table);
    cplx s{0.0, 0.0};
    for (std::uint32_t p : table.primes_up_to(N))
        if (c[p] != 0.0) s += c[p] * e1(alpha * p);
    return s;
}

inline void require_grid(std::uint64_t N, std::uint64_t T) {
    if (T <= 2 * N)
        throw AliasError("grid size " + std::to_string(T) + " must exceed 2N = " + std::to_string(2 * N));
}

// Values at alpha = t/T, t = 0..T-1.
inline std::vector<cplx> prime_sum_grid(std::uint64_t N, const Progression& prog, const PrimeTable& table,
                                        std::uint64_t T) {
    return fft::evaluate_on_grid(prime_sum_coefficients(N, prog, table), T);
}

inline std::vector<cplx> weighted_prime_sum_grid(std::uint64_t N, const WeightSpec& w, const PrimeTable& table,
                                                 std::uint64_t T) {
    return fft::evaluate_on_grid(weighted_prime_coefficients(N, w, table), T);
}

// (1/T) sum_t S1 S2 S3 e(-N t/T) with T > 2N, which equals the weighted
// representation count exactly: the product has frequencies in [6, 3N] and
// after the shift by -N no alias of 0 survives.
inline double coefficient_extract(const TripleInstance& inst, const PrimeTable& table, std::uint64_t T = 0) {
    const auto N = inst.N;
    table.require(N);
    if (T == 0) T = 2 * N + 1;
    require_grid(N, T);
    const auto s1 = prime_sum_grid(N, inst.progs[0], table, T);
    const auto s2 = prime_sum_grid(N, inst.progs[1], table, T);
    const auto s3 = prime_sum_grid(N, inst.progs[2], table, T);
    cplx acc{0.0, 0.0};
    for (std::uint64_t t = 0; t < T; ++t) {
        const auto shift = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((N * t) % T) /
                                               static_cast<double>(T));
        acc += s1[t] * s2[t] * s3[t] * shift;
    }
    return acc.real() / static_cast<double>(T);
}

// -------------------------------------------------------
// Kernel min(H, 1/||x||) = sum_h c(h) e(hx)
// -------------------------------------------------------

struct KernelCoefficients {
    double H = 0.0;
    std::int64_t h_max = 0;
    std::vector<double> coeffs;  // c(0..h_max); the kernel is even

    double at(std::int64_t h) const {
        const auto a = static_cast<std::size_t>(h < 0 ? -h : h);
        if (a >= coeffs.size()) throw DomainError("kernel coefficient index beyond h_max");
        return coeffs[a];
    }
};

namespace detail {

// Integral of f over [a, b] by fixed 31-point Gauss-Kronrod panels, each no
// longer than half an oscillation period of `freq`, at least `min_panels`.
template <typename F>
double oscillatory_integral(F&& f, double a, double b, double freq, unsigned min_panels) {
    if (b <= a) return 0.0;
    const double width = b - a;
    std::size_t panels = std::max<std::size_t>(min_panels, 1);
    if (freq != 0.0)
        panels = std::max<std::size_t>(panels, static_cast<std::size_t>(std::ceil(width * 2.0 * std::abs(freq))));
    const double step = width / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + step * static_cast<double>(i);
        const double hi = i + 1 == panels ? b : lo + step;
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 0);
    }
    return sum;
}

// Same, for integrands like 1/x on [a, b] with 0 < a: the range is cut at
// a, 2a, 4a, ... so the singular factor changes by at most 2 on each piece.
template <typename F>
double graded_integral(F&& f, double a, double b, double freq, unsigned min_panels) {
    double sum = 0.0;
    for (double lo = a; lo < b; lo *= 2.0) sum += oscillatory_integral(f, lo, std::min(2.0 * lo, b), freq, min_panels);
    return sum;
}

}  // namespace detail

// c(h) = int_0^1 min(H, 1/||g||) e(-hg) dg. By symmetry this is
// 2 int_0^{1/2} min(H, 1/g) cos(2 pi h g) dg, integrated piecewise on
// [0, 1/H] (constant H) and [1/H, 1/2] (1/g).
inline double kernel_coefficient(double H, std::int64_t h, unsigned quad_points) {
    if (!(H > 1.0)) throw DomainError("kernel height H must exceed 1");
    const double w = 2.0 * std::numbers::pi * static_cast<double>(h);
    const double cut = std::min(1.0 / H, 0.5);
    const double flat =
        detail::oscillatory_integral([&](double g) { return H * std::cos(w * g); }, 0.0, cut, double(h), quad_points);
    const double slope =
        detail::graded_integral([&](double g) { return std::cos(w * g) / g; }, cut, 0.5, double(h), quad_points);
    return 2.0 * (flat + slope);
}

inline KernelCoefficients kernel_coefficients(double H, std::int64_t h_max = 0, unsigned quad_points = 8) {
    if (!(H > 1.0)) throw DomainError("kernel height H must exceed 1");
    if (h_max <= 0) h_max = static_cast<std::int64_t>(std::ceil(10.0 * H));
    KernelCoefficients k{H, h_max, {}};
    k.coeffs.reserve(static_cast<std::size_t>(h_max) + 1);
    for (std::int64_t h = 0; h <= h_max; ++h) k.coeffs.push_back(kernel_coefficient(H, h, quad_points));
    return k;
}

// min(H, 1/||u||) on one period, split where it changes form.
namespace detail {

inline cplx periodic_kernel_moment(double H, double freq, double shift, unsigned quad_points) {
    // int_0^1 e(freq (u + shift)) min(H, 1/||u||) du
    const double cut = std::min(1.0 / H, 0.5);
    const double w = 2.0 * std::numbers::pi * freq;
    const double ph = 2.0 * std::numbers::pi * freq * shift;
    // Flat parts near 0 and 1, then 1/u on [cut, 1/2] and, with v = 1 - u, 1/v on [cut, 1/2].
    auto flat = [&](double a, double b) {
        const double re = oscillatory_integral([&](double u) { return H * std::cos(w * u + ph); }, a, b, freq,
                                               quad_points);
        const double im = oscillatory_integral([&](double u) { return H * std::sin(w * u + ph); }, a, b, freq,
                                               quad_points);
        return cplx{re, im};
    };
    auto slope = [&](double sign, double origin) {
        const double re = graded_integral(
            [&](double v) { return std::cos(w * (origin + sign * v) + ph) / v; }, cut, 0.5, freq, quad_points);
        const double im = graded_integral(
            [&](double v) { return std::sin(w * (origin + sign * v) + ph) / v; }, cut, 0.5, freq, quad_points);
        return cplx{re, im};
    };
    return flat(0.0, cut) + slope(1.0, 0.0) + slope(-1.0, 1.0) + flat(1.0 - cut, 1.0);
}

}  // namespace detail

// int_0^1 e(n g) min(H, 1/||k g||) dg, evaluated numerically: substituting
// u = k g turns the range into k unit periods of the kernel, each integrated
// separately against its own phase.
inline cplx kernel_integral_complex(std::int64_t n, std::uint64_t k, double H, unsigned quad_points = 8) {
    if (k < 1) throw DomainError("kernel_integral needs k >= 1");
    if (!(H > 1.0)) throw DomainError("kernel height H must exceed 1");
    const double freq = static_cast<double>(n) / static_cast<double>(k);
    cplx s{0.0, 0.0};
    for (std::uint64_t j = 0; j < k; ++j)
        s += detail::periodic_kernel_moment(H, freq, static_cast<double>(j), quad_points);
    return s / static_cast<double>(k);
}

inline double kernel_integral(std::int64_t n, std::uint64_t k, double H, unsigned quad_points = 8) {
    return kernel_integral_complex(n, k, H, quad_points).real();
}

}  // namespace goldbach
