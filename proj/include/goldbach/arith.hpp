#pragma once

// Prime sieving and the elementary multiplicative functions.
//
// PrimeTable stores the smallest prime factor of every n <= limit, which
// makes factorization O(log n). It is immutable after construction and may
// be shared freely between threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace goldbach {

struct PrimePower {
    std::uint64_t p;
    int e;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

class PrimeTable {
public:
    // Linear sieve: each composite is crossed out exactly once by its
    // smallest prime factor.
    explicit PrimeTable(std::uint32_t limit) : limit_(limit) {
        if (limit < 2) throw DomainError("sieve limit must be >= 2, got " + std::to_string(limit));
        spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = i;
                primes_.push_back(i);
            }
            const std::uint32_t si = spf_[i];
            for (std::uint32_t p : primes_) {
                if (p > si) break;
                const std::uint64_t m = std::uint64_t{p} * i;
                if (m > limit) break;
                spf_[m] = p;
            }
        }
    }

    std::uint32_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const {
        require(n);
        return n >= 2 && spf_[n] == n;
    }

    std::uint32_t smallest_factor(std::uint64_t n) const {
        require(n);
        if (n < 2) throw DomainError("smallest_factor needs n >= 2");
        return spf_[n];
    }

    std::span<const std::uint32_t> primes() const { return primes_; }

    // Primes p <= bound.
    std::span<const std::uint32_t> primes_up_to(std::uint64_t bound) const {
        require(bound);
        auto it = std::upper_bound(primes_.begin(), primes_.end(), bound);
        return {primes_.data(), static_cast<std::size_t>(it - primes_.begin())};
    }

    Factorization factorize(std::uint64_t n) const {
        require(n);
        if (n == 0) throw DomainError("cannot factor 0");
        Factorization f;
        while (n > 1) {
            const std::uint32_t p = spf_[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.push_back({p, e});
        }
        return f;
    }

    void require(std::uint64_t n) const {
        if (n > limit_)
            throw TableTooSmall("value " + std::to_string(n) + " exceeds prime table limit " +
                                std::to_string(limit_));
    }

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

inline PrimeTable sieve_primes(std::uint32_t limit) { return PrimeTable(limit); }

// Trial-division factorization for values outside any table.
inline Factorization factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("cannot factor 0");
    Factorization f;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline std::uint64_t euler_phi(const Factorization& f) {
    std::uint64_t r = 1;
    for (auto [p, e] : f) {
        r *= p - 1;
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

inline std::uint64_t divisor_tau(const Factorization& f) {
    std::uint64_t r = 1;
    for (auto [p, e] : f) r *= static_cast<std::uint64_t>(e + 1);
    return r;
}

inline int moebius(const Factorization& f) {
    for (auto [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 ? -1 : 1;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw DomainError("euler_phi(0) is undefined");
    return euler_phi(factorize(n));
}
inline std::uint64_t divisor_tau(std::uint64_t n) {
    if (n == 0) throw DomainError("divisor_tau(0) is undefined");
    return divisor_tau(factorize(n));
}
inline int moebius(std::uint64_t n) {
    if (n == 0) throw DomainError("moebius(0) is undefined");
    return moebius(factorize(n));
}

inline std::uint64_t euler_phi(std::uint64_t n, const PrimeTable& t) {
    if (n == 0) throw DomainError("euler_phi(0) is undefined");
    return euler_phi(t.factorize(n));
}
inline std::uint64_t divisor_tau(std::uint64_t n, const PrimeTable& t) {
    if (n == 0) throw DomainError("divisor_tau(0) is undefined");
    return divisor_tau(t.factorize(n));
}
inline int moebius(std::uint64_t n, const PrimeTable& t) {
    if (n == 0) throw DomainError("moebius(0) is undefined");
    return moebius(t.factorize(n));
}

// All positive divisors of the factored number, unsorted.
inline std::vector<std::uint64_t> divisors(const Factorization& f) {
    std::vector<std::uint64_t> d{1};
    for (auto [p, e] : f) {
        const std::size_t n = d.size();
        std::uint64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < n; ++j) d.push_back(d[j] * pk);
        }
    }
    return d;
}

inline int valuation(std::uint64_t n, std::uint64_t p) {
    if (n == 0) throw DomainError("valuation of 0 is infinite");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Sum of log p over primes p <= limit in the progression.
inline double chebyshev_theta(std::uint64_t limit, const Progression& prog, const PrimeTable& table) {
    double s = 0.0;
    for (std::uint32_t p : table.primes_up_to(limit))
        if (prog.contains(p)) s += std::log(static_cast<double>(p));
    return s;
}

}  // namespace goldbach
