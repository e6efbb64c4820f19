#pragma once

// Shared value types and the exception hierarchy used by every module.

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace goldbach {

// -------------------------------------------------------
// Errors. Each category maps to one CLI exit code.
// -------------------------------------------------------

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct TableTooSmall : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(const std::string& what, std::uint64_t estimated)
        : std::runtime_error(what), estimated_cells(estimated) {}
    std::uint64_t estimated_cells;
};

struct ArcOverlap : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Grid too coarse for exact coefficient extraction.
struct AliasError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed quantity violated an identity it must satisfy.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// -------------------------------------------------------
// Progression: primes p with p = l (mod k), gcd(k, l) = 1.
// The residue is stored reduced into [0, k). (1, 0) means
// "no constraint".
// -------------------------------------------------------
class Progression {
public:
    Progression() = default;

    Progression(std::int64_t k, std::int64_t l) {
        if (k < 1) throw DomainError("progression modulus must be >= 1, got " + std::to_string(k));
        std::int64_t r = l % k;
        if (r < 0) r += k;
        if (std::gcd(k, r) != 1)
            throw DomainError("progression residue " + std::to_string(l) + " is not coprime to modulus " +
                              std::to_string(k));
        k_ = static_cast<std::uint32_t>(k);
        l_ = static_cast<std::uint32_t>(r);
    }

    static Progression all() { return Progression{}; }

    std::uint32_t modulus() const { return k_; }
    std::uint32_t residue() const { return l_; }

    bool contains(std::uint64_t n) const { return n % k_ == l_; }

    friend bool operator==(const Progression&, const Progression&) = default;
    friend auto operator<=>(const Progression&, const Progression&) = default;

private:
    std::uint32_t k_ = 1;
    std::uint32_t l_ = 0;
};

inline std::string to_string(const Progression& p) {
    return std::to_string(p.residue()) + " mod " + std::to_string(p.modulus());
}

// Target N with one progression per prime variable.
struct TripleInstance {
    std::uint64_t N = 0;
    std::array<Progression, 3> progs{};

    TripleInstance() = default;
    TripleInstance(std::uint64_t n, std::array<Progression, 3> ps) : N(n), progs(ps) {
        if (n < 6) throw DomainError("target N must be >= 6, got " + std::to_string(n));
    }

    bool even_target() const { return N % 2 == 0; }
};

}  // namespace goldbach
