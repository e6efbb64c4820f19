#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace goldbach;

namespace {

const PrimeTable& table() {
    static const PrimeTable t(200'000);
    return t;
}

WeightSpec single(std::uint64_t k, std::uint64_t l3) {
    std::vector<double> v(k, 0.0);
    v[k - 1] = 1.0;
    return {l3, v};
}

WeightSpec random_weights(std::mt19937_64& rng, std::uint64_t k_max, std::uint64_t l3) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(k_max);
    for (auto& x : v) x = d(rng);
    return {l3, v};
}

}  // namespace

TEST(PrimeSum, AtZeroIsTheta) {
    for (auto g : {Progression::all(), Progression(4, 3), Progression(9, 7)}) {
        const auto s = prime_sum(0.0, 5000, g, table());
        EXPECT_NEAR(s.real(), chebyshev_theta(5000, g, table()), 1e-9);
        EXPECT_NEAR(s.imag(), 0.0, 1e-12);
    }
}

TEST(PrimeSum, AtOneHalfAlternatesWithParity) {
    const auto s = prime_sum(0.5, 5000, Progression::all(), table());
    EXPECT_NEAR(s.real(), 2 * std::log(2.0) - chebyshev_theta(5000, Progression::all(), table()), 1e-8);
    EXPECT_NEAR(s.imag(), 0.0, 1e-8);
}

TEST(PrimeSum, Periodic) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double a = d(rng);
        const auto x = prime_sum(a, 3000, Progression(5, 2), table());
        const auto y = prime_sum(a + 1.0, 3000, Progression(5, 2), table());
        EXPECT_LT(std::abs(x - y), 1e-9);
    }
}

TEST(PrimeSum, BoundedByTheta) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    const Progression g(7, 4);
    const double theta = chebyshev_theta(20000, g, table());
    for (int i = 0; i < 100; ++i) EXPECT_LE(std::abs(prime_sum(d(rng), 20000, g, table())), theta * (1 + 1e-12));
}

TEST(PrimeSum, GridParseval) {
    for (std::uint64_t N : {100ull, 2345ull, 10000ull})
        for (auto g : {Progression::all(), Progression(6, 5)}) {
            const std::uint64_t T = 2 * N + 1;
            const auto v = prime_sum_grid(N, g, table(), T);
            double grid = 0, coef = 0;
            for (const auto& z : v) grid += std::norm(z);
            grid /= double(T);
            for (auto p : table().primes_up_to(N))
                if (g.contains(p)) coef += std::log(double(p)) * std::log(double(p));
            EXPECT_LT(oracle::rel_err(grid, coef), 1e-9) << N;
        }
}

TEST(PrimeSum, GridMatchesPointwise) {
    const std::uint64_t N = 500, T = 1001;
    const auto v = prime_sum_grid(N, Progression(3, 2), table(), T);
    for (std::uint64_t t : {0ull, 1ull, 77ull, 500ull, 1000ull}) {
        const auto z = prime_sum(double(t) / double(T), N, Progression(3, 2), table());
        EXPECT_LT(std::abs(v[t] - z), 1e-9);
    }
}

TEST(WeightedSum, ZeroWeights) {
    const auto w = WeightSpec::preset("zero", 1, 30);
    EXPECT_TRUE(w.is_zero());
    EXPECT_EQ(std::abs(weighted_prime_sum(0.3, 5000, w, table())), 0.0);
}

TEST(WeightedSum, SingleModulusIsPrimeSum) {
    for (std::uint64_t k : {1ull, 4ull, 9ull, 10ull}) {
        const auto w = single(k, 3);
        if (std::gcd(k, 3ull) != 1) continue;
        for (double a : {0.0, 0.137, 0.5, 0.91}) {
            const auto x = weighted_prime_sum(a, 8000, w, table());
            const auto y = prime_sum(a, 8000, Progression(static_cast<std::int64_t>(k), 3), table());
            EXPECT_LT(std::abs(x - y), 1e-8 * std::max(1.0, std::abs(y)));
        }
    }
}

TEST(WeightedSum, NonCoprimeModuliIgnored) {
    const WeightSpec w(6, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(w.at(2), 0.0);
    EXPECT_EQ(w.at(3), 0.0);
    EXPECT_EQ(w.at(5), 1.0);
    EXPECT_EQ(w.at(7), 1.0);
    EXPECT_EQ(w.at(8), 0.0);
}

TEST(WeightedSum, RejectsLargeWeights) { EXPECT_THROW(WeightSpec(1, {0.5, 1.5}), DomainError); }

TEST(WeightedSum, SinglePassMatchesNaive) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::uint64_t> kd(1, 50), nd(100, 10000), ld(1, 40);
    std::uniform_real_distribution<double> ad(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const auto w = random_weights(rng, kd(rng), ld(rng));
        const auto N = nd(rng);
        for (int j = 0; j < 3; ++j) {
            const double a = ad(rng);
            const auto x = weighted_prime_sum(a, N, w, table());
            const auto y = oracle::weighted_sum_naive(a, N, w, table());
            EXPECT_LT(std::abs(x - y), 1e-9 * std::max(1.0, std::abs(y)));
        }
    }
}

TEST(WeightedSum, ResidueEqualToAPrime) {
    // p = l3 = 7 lies in 7 mod k for every k.
    const auto w = WeightSpec::preset("alternating", 7, 12);
    const auto x = weighted_prime_sum(0.25, 1000, w, table());
    const auto y = oracle::weighted_sum_naive(0.25, 1000, w, table());
    EXPECT_LT(std::abs(x - y), 1e-9 * std::abs(y));
}

TEST(WeightedSum, GridParseval) {
    std::mt19937_64 rng(6);
    for (std::uint64_t N : {1000ull, 10000ull}) {
        const auto w = random_weights(rng, 40, 5);
        const auto c = weighted_prime_coefficients(N, w, table());
        double coef = 0;
        for (double x : c) coef += x * x;
        const auto v = weighted_prime_sum_grid(N, w, table(), 2 * N + 1);
        double grid = 0;
        for (const auto& z : v) grid += std::norm(z);
        EXPECT_LT(oracle::rel_err(grid / double(2 * N + 1), coef), 1e-8);
    }
}

TEST(WeightFile, ParseAndErrors) {
    std::istringstream in("# header\n1 0.5\n3 -1\n\n 5 1 # trailing\n");
    const auto w = WeightSpec::parse(in, 2);
    EXPECT_EQ(w.k_max(), 5u);
    EXPECT_EQ(w.at(1), 0.5);
    EXPECT_EQ(w.at(2), 0.0);
    EXPECT_EQ(w.at(3), -1.0);
    EXPECT_EQ(w.at(5), 1.0);
    std::istringstream bad("1 0.5\n2\n");
    EXPECT_THROW(WeightSpec::parse(bad, 1), DomainError);
    std::istringstream big("4 1.01\n");
    EXPECT_THROW(WeightSpec::parse(big, 1), DomainError);
    EXPECT_THROW(WeightSpec::preset("nope", 1, 3), DomainError);
}

TEST(CoefficientExtract, MatchesDirectCount) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::uint64_t> nd(6, 2000);
    for (int i = 0; i < 20; ++i) {
        const TripleInstance inst(nd(rng), {oracle::random_progression(rng, 12), oracle::random_progression(rng, 12),
                                            oracle::random_progression(rng, 12)});
        const double d = count_direct(inst, table()).value;
        const double c = coefficient_extract(inst, table());
        if (d == 0.0) EXPECT_NEAR(c, 0.0, 1e-6);
        else EXPECT_LT(oracle::rel_err(c, d), 1e-6) << inst.N;
    }
}

TEST(CoefficientExtract, NineAndEmpty) {
    const double expected = std::pow(std::log(3.0), 3) + 3 * std::pow(std::log(2.0), 2) * std::log(5.0);
    EXPECT_NEAR(coefficient_extract({9, {}}, table()), expected, 1e-10);
    const TripleInstance empty(10, {Progression(25, 1), Progression::all(), Progression::all()});
    EXPECT_NEAR(coefficient_extract(empty, table()), 0.0, 1e-12);
}

TEST(CoefficientExtract, LargerGridAlsoExact) {
    const TripleInstance inst(1001, {Progression(4, 1), Progression(3, 2), Progression::all()});
    const double d = count_direct(inst, table()).value;
    EXPECT_LT(oracle::rel_err(coefficient_extract(inst, table(), 3000), d), 1e-9);
}

TEST(CoefficientExtract, AliasRejected) {
    EXPECT_THROW(coefficient_extract({100, {}}, table(), 200), AliasError);
    EXPECT_NO_THROW(coefficient_extract({100, {}}, table(), 201));
}

TEST(Kernel, ZerothCoefficientClosedForm) {
    for (double H : {2.5, 10.0, 50.0, 100.0, 1234.5}) {
        const auto c0 = kernel_coefficient(H, 0, 8);
        EXPECT_NEAR(c0, 2 + 2 * std::log(H / 2), 1e-9) << H;
    }
}

TEST(Kernel, DomainError) {
    EXPECT_THROW(kernel_coefficients(1.0, 10), DomainError);
    EXPECT_THROW(kernel_integral(1, 1, 0.5), DomainError);
}

TEST(Kernel, EvenAndDefaultRange) {
    const auto k = kernel_coefficients(20.0);
    EXPECT_EQ(k.h_max, 200);
    for (std::int64_t h = 0; h <= 200; ++h) {
        EXPECT_EQ(k.at(h), k.at(-h));
        EXPECT_NEAR(k.at(h), kernel_coefficient(20.0, -h, 8), 1e-12);
    }
}

// Summing the expansion back reproduces the kernel away from its corners.
TEST(Kernel, PartialSumsReconstructKernel) {
    const double H = 10.0;
    const auto k = kernel_coefficients(H, 4000);
    for (double x : {0.05, 0.2, 0.31, 0.5}) {
        double s = k.at(0);
        for (std::int64_t h = 1; h <= k.h_max; ++h) s += 2 * k.at(h) * std::cos(2 * std::numbers::pi * h * x);
        EXPECT_NEAR(s, std::min(H, 1 / std::min(x, 1 - x)), 0.02) << x;
    }
}

TEST(Kernel, Envelope) {
    const double H = 100.0;
    const auto k = kernel_coefficients(H, 400);
    for (std::int64_t h = 0; h <= 10000; h += h < 400 ? 1 : 97) {
        const double c = h <= 400 ? k.at(h) : kernel_coefficient(H, h, 8);
        const double bound = h == 0 ? 4 * std::log(H) : 4 * std::min(std::log(H), H * H / double(h * h));
        ASSERT_LE(std::abs(c), bound) << h;
    }
}

TEST(KernelIntegral, MatchesCoefficients) {
    const double H = 50.0;
    const auto c = kernel_coefficients(H, 40);
    for (std::uint64_t k = 1; k <= 8; ++k)
        for (std::int64_t n = -40; n <= 40; ++n) {
            const auto J = kernel_integral_complex(n, k, H);
            const double expect = n % static_cast<std::int64_t>(k) == 0 ? c.at(-n / static_cast<std::int64_t>(k)) : 0.0;
            ASSERT_NEAR(J.real(), expect, 1e-6) << n << " " << k;
            ASSERT_NEAR(J.imag(), 0.0, 1e-6) << n << " " << k;
        }
    EXPECT_NEAR(kernel_integral(0, 1, H), 2 + 2 * std::log(H / 2), 1e-9);
}
