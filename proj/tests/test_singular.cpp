#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace goldbach;

namespace {

const PrimeTable& table() {
    static const PrimeTable t(1'000'100);
    return t;
}

// Full triple enumeration mod p^t, no solving for x3.
mpq_class density_by_triples(const TripleInstance& inst, std::uint64_t p, int t) {
    std::uint64_t m = 1;
    for (int i = 0; i < t; ++i) m *= p;
    std::array<std::vector<std::uint64_t>, 3> U;
    for (int i = 0; i < 3; ++i) {
        const auto k = inst.progs[i].modulus();
        std::uint64_t pv = 1;
        while (k % (pv * p) == 0) pv *= p;
        for (std::uint64_t x = 0; x < m; ++x)
            if (x % p && x % pv == inst.progs[i].residue() % pv) U[i].push_back(x);
    }
    std::uint64_t c = 0;
    for (auto a : U[0])
        for (auto b : U[1])
            for (auto d : U[2])
                if ((a + b + d) % m == inst.N % m) ++c;
    mpq_class r(mpz_class(c) * m, mpz_class(U[0].size()) * U[1].size() * U[2].size());
    r.canonicalize();
    return r;
}

TripleInstance random_instance(std::mt19937_64& rng, std::uint64_t n_max, std::uint64_t k_max) {
    std::uniform_int_distribution<std::uint64_t> nd(3, n_max / 2);
    return {2 * nd(rng) + 1,
            {oracle::random_progression(rng, k_max), oracle::random_progression(rng, k_max),
             oracle::random_progression(rng, k_max)}};
}

}  // namespace

TEST(GaussSum, TrivialModulus) {
    const auto g = restricted_gauss_sum(0, 1, Progression(5, 2));
    EXPECT_NEAR(g.real(), 1.0, 1e-15);
    EXPECT_NEAR(g.imag(), 0.0, 1e-15);
}

TEST(GaussSum, SingleTerm) {
    const auto g = restricted_gauss_sum(1, 4, Progression(4, 1));
    EXPECT_NEAR(g.real(), 0.0, 1e-12);
    EXPECT_NEAR(g.imag(), 1.0, 1e-12);
}

TEST(GaussSum, RamanujanReduction) {
    for (std::uint64_t q = 1; q <= 200; ++q)
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
            if (std::gcd<std::uint64_t>(a, q) != 1) continue;
            const auto g = restricted_gauss_sum(a, q, Progression::all());
            ASSERT_NEAR(g.real(), moebius(q), 1e-10) << q << " " << a;
            ASSERT_NEAR(g.imag(), 0.0, 1e-10) << q << " " << a;
        }
}

TEST(GaussSum, RejectsNonUnitA) {
    EXPECT_THROW(restricted_gauss_sum(2, 4, Progression::all()), DomainError);
    EXPECT_THROW(restricted_gauss_sum_closed(3, 9, Progression::all()), DomainError);
}

TEST(GaussSum, ClosedFormMatchesDirect) {
    for (std::uint64_t k = 1; k <= 24; ++k)
        for (std::uint64_t l = 0; l < k; ++l) {
            if (std::gcd(k, l) != 1) continue;
            const Progression g(static_cast<std::int64_t>(k), static_cast<std::int64_t>(l));
            for (std::uint64_t q = 1; q <= 72; ++q)
                for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
                    if (std::gcd<std::uint64_t>(a, q) != 1) continue;
                    const auto d = restricted_gauss_sum(a, q, g);
                    const auto c = restricted_gauss_sum_closed(a, q, g);
                    ASSERT_LT(std::abs(d - c), 1e-10) << k << " " << l << " " << q << " " << a;
                }
        }
}

TEST(QSum, FirstTermIsOne) {
    const TripleInstance inst(101, {Progression(3, 1), Progression(4, 3), Progression(5, 2)});
    EXPECT_NEAR(singular_series_qsum(inst, 1).value, 1.0, 1e-15);
}

TEST(QSum, ClassicalValueForOddN) {
    for (std::uint64_t N : {9ull, 1001ull, 30031ull, 99999ull}) {
        const auto s = singular_series_qsum({N, {}}, 2000);
        EXPECT_NEAR(s.value, oracle::classical_product(N, 2000), 1e-5) << N;
        EXPECT_GE(s.tail_estimate, 0.0);
    }
}

TEST(QSum, EvenTargetVanishes) {
    const auto s = singular_series_qsum({10000, {}}, 2000);
    EXPECT_NEAR(s.value, 0.0, 1e-6);
    EXPECT_NEAR(singular_series_product({10000, {}}, 2000).value, 0.0, 0.0);
}

TEST(LocalDensity, ClassicalFactors) {
    const TripleInstance odd(3 * 5 * 7 * 11 + 0, {});
    for (std::uint64_t p : {2ull, 13ull, 17ull, 101ull}) {
        const mpq_class expect = 1 + mpq_class(1, (p - 1) * (p - 1) * (p - 1));
        EXPECT_EQ(local_density_factor(odd, p, 1), expect) << p;
    }
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull}) {
        const mpq_class expect = 1 - mpq_class(1, (p - 1) * (p - 1));
        EXPECT_EQ(local_density_factor(odd, p, 1), expect) << p;
    }
    EXPECT_EQ(local_density_factor({1000, {}}, 2, 1), 0);
}

TEST(LocalDensity, Errors) {
    const TripleInstance inst(1001, {Progression(4, 1), Progression(1, 0), Progression(9, 2)});
    EXPECT_THROW(local_density_factor(inst, 2, 2), DomainError);  // needs t >= 3
    EXPECT_NO_THROW(local_density_factor(inst, 2, 3));
    EXPECT_THROW(local_density_factor(inst, 3, 2), DomainError);  // needs t >= 3
    EXPECT_THROW(local_density_factor(inst, 9, 3), DomainError);  // not prime
}

TEST(LocalDensity, MatchesTripleEnumeration) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        const auto inst = random_instance(rng, 100000, 20);
        for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
            const int t = stabilization_threshold(inst, p);
            if (std::pow(double(p), 3.0 * t) > 3e6) continue;
            EXPECT_EQ(local_density_factor(inst, p, t), density_by_triples(inst, p, t));
        }
    }
}

TEST(LocalDensity, Stabilization) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(rng, 100000, 20);
        for (std::uint64_t p = 2; p <= 50; ++p) {
            if (!oracle::is_prime(p)) continue;
            const int t = stabilization_threshold(inst, p);
            EXPECT_EQ(local_density_factor(inst, p, t), local_density_factor(inst, p, t + 1)) << p;
        }
    }
}

TEST(Product, NineOverSmallPrimes) {
    const TripleInstance nine(9, {});
    EXPECT_EQ(singular_series_product_exact(nine, 3), mpq_class(3, 2));
    const auto s = singular_series_product(nine, 3);
    EXPECT_DOUBLE_EQ(s.value, 1.5);
}

TEST(Product, VanishingFactorGivesZero) {
    const TripleInstance blocked(1001, {Progression(3, 1), Progression(3, 1), Progression(3, 2)});
    EXPECT_EQ(singular_series_product(blocked, 2000).value, 0.0);
    EXPECT_NEAR(singular_series_qsum(blocked, 2000).value, 0.0, 1e-3);
}

TEST(Product, CacheDoesNotChangeValue) {
    DensityCache cache;
    const TripleInstance inst(100003, {Progression(3, 1), Progression(8, 5), Progression(10, 3)});
    EXPECT_EQ(singular_series_product_exact(inst, 500, &cache), singular_series_product_exact(inst, 500));
    EXPECT_EQ(singular_series_product_exact(inst, 500, &cache), singular_series_product_exact(inst, 500));
}

TEST(Product, AgreesWithQSum) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 8; ++i) {
        const auto inst = random_instance(rng, 100000, 20);
        const auto a = singular_series_qsum(inst, 2000);
        const auto b = singular_series_product(inst, 2000);
        EXPECT_LE(std::abs(a.value - b.value) / std::max(b.value, 1.0), 1e-3) << inst.N;
    }
}

TEST(Product, PositiveWhenNoFactorVanishes) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto inst = random_instance(rng, 100000, 20);
        bool all_positive = true;
        for (std::uint64_t p = 2; p <= 200; ++p)
            if (oracle::is_prime(p) && local_density_factor(inst, p, stabilization_threshold(inst, p)) == 0)
                all_positive = false;
        const auto s = singular_series_product(inst, 200);
        if (all_positive) EXPECT_GT(s.value, 0.0);
        else EXPECT_EQ(s.value, 0.0);
    }
}

TEST(MainTerm, Scaling) {
    const TripleInstance plain(1001, {});
    const SingularSeriesValue s{1.25, 10, 0};
    EXPECT_DOUBLE_EQ(main_term(plain, s), 1001.0 * 1001.0 * 1.25 / 2);
    EXPECT_EQ(main_term(plain, {0.0, 10, 0}), 0.0);
    const TripleInstance mod(1001, {Progression(3, 1), Progression(4, 1), Progression(5, 1)});
    EXPECT_DOUBLE_EQ(main_term(mod, s), 1001.0 * 1001.0 * 1.25 / (2 * 2 * 2 * 4));
}

TEST(MainTerm, AgainstCountAtHundredThousand) {
    const TripleInstance inst(100003, {Progression(3, 1), Progression(4, 1), Progression(1, 0)});
    const double M = main_term(inst, singular_series_product(inst, 2000));
    const double R = count_convolution(inst, table()).value;
    EXPECT_GT(R / M, 0.8);
    EXPECT_LT(R / M, 1.2);
}

TEST(MainTerm, AgainstCountAtOneMillion) {
    const TripleInstance inst(1000003, {});
    const double S = singular_series_product(inst, 2000).value;
    const double R = count_convolution(inst, table()).value;
    const double ratio = R / (1000003.0 * 1000003.0 / 2 * S);
    EXPECT_GT(ratio, 0.9);
    EXPECT_LT(ratio, 1.1);
}
