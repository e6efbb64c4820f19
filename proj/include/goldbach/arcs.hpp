#pragma once

// Farey dissection of the period [-1/tau, 1 - 1/tau) into major arcs
// |alpha - a/q| <= 1/(q tau), q <= Q, (a, q) = 1, and the complementary
// minor set; plus grid statistics of the weighted prime sum on each part.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "expsum.hpp"

namespace goldbach {

struct Arc {
    std::int64_t a;
    std::int64_t q;
    double center;
    double radius;
};

struct ArcPartition {
    std::uint64_t N = 0;
    std::uint64_t Q = 0;
    double tau = 0.0;
    std::vector<Arc> arcs;  // sorted by center

    double period_start() const { return -1.0 / tau; }
    double period_end() const { return 1.0 - 1.0 / tau; }

    // Representative of alpha in [-1/tau, 1 - 1/tau).
    double reduce(double alpha) const {
        const double x = alpha - std::floor(alpha + 1.0 / tau);
        return x >= period_end() ? x - 1.0 : x;
    }
};

// Q = L^{20A}, tau = N / Q with L = log N. Useless below astronomically
// large N, but kept so runs can report how far desk-scale choices are from it.
struct ArcParameters {
    double Q;
    double tau;
};

inline ArcParameters asymptotic_arc_parameters(std::uint64_t N, double A) {
    const double L = std::log(static_cast<double>(N));
    const double Q = std::pow(L, 20.0 * A);
    return {Q, static_cast<double>(N) / Q};
}

inline constexpr std::uint64_t max_arcs = 20'000'000;

inline ArcPartition build_partition(std::uint64_t N, std::uint64_t Q, double tau) {
    if (Q < 1) throw DomainError("Q must be >= 1");
    const double q2 = static_cast<double>(Q) * static_cast<double>(Q);
    if (!(tau > 2.0 * q2))
        throw ArcOverlap("tau = " + std::to_string(tau) + " must exceed 2Q^2 = " + std::to_string(2.0 * q2) +
                         " for disjoint major arcs");
    if (3 * Q * Q / 10 > max_arcs) throw DomainError("Q = " + std::to_string(Q) + " yields too many arcs");
    ArcPartition part{N, Q, tau, {}};
    for (std::int64_t q = 1; q <= static_cast<std::int64_t>(Q); ++q)
        for (std::int64_t a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1)
                part.arcs.push_back({a, q, static_cast<double>(a) / static_cast<double>(q),
                                     1.0 / (static_cast<double>(q) * tau)});
    std::sort(part.arcs.begin(), part.arcs.end(),
              [](const Arc& x, const Arc& y) { return x.a * y.q < y.a * x.q; });
    return part;
}

struct ArcClass {
    bool major = false;
    std::int64_t a = 0;
    std::int64_t q = 0;
    std::size_t index = 0;  // into partition.arcs when major
};

// Closed arcs: a point at exactly the radius is major.
inline ArcClass classify(double alpha, const ArcPartition& part) {
    const double x = part.reduce(alpha);
    const auto& arcs = part.arcs;
    auto it = std::lower_bound(arcs.begin(), arcs.end(), x, [](const Arc& arc, double v) { return arc.center < v; });
    for (auto cand : {it, it == arcs.begin() ? arcs.end() : std::prev(it)}) {
        if (cand == arcs.end()) continue;
        if (std::abs(x - cand->center) <= cand->radius)
            return {true, cand->a, cand->q, static_cast<std::size_t>(cand - arcs.begin())};
    }
    return {};
}

inline double major_measure(const ArcPartition& part) {
    double m = 0.0;
    for (const auto& arc : part.arcs) m += 2.0 * arc.radius;
    return m;
}

// sum_{q <= Q} phi(q) * 2 / (q tau)
inline double analytic_major_measure(std::uint64_t Q, double tau) {
    double m = 0.0;
    for (std::uint64_t q = 1; q <= Q; ++q)
        m += static_cast<double>(euler_phi(q)) * 2.0 / (static_cast<double>(q) * tau);
    return m;
}

// Sorted sweep: consecutive arcs do not touch and the last one ends inside
// the period.
inline bool pairwise_disjoint(const ArcPartition& part) {
    const auto& arcs = part.arcs;
    for (std::size_t i = 0; i + 1 < arcs.size(); ++i)
        if (arcs[i].center + arcs[i].radius >= arcs[i + 1].center - arcs[i + 1].radius) return false;
    if (!arcs.empty()) {
        if (arcs.front().center - arcs.front().radius < part.period_start()) return false;
        if (arcs.back().center + arcs.back().radius >= part.period_end()) return false;
    }
    return true;
}

// Major flag of every grid point t / T.
inline std::vector<std::uint8_t> classify_grid(const ArcPartition& part, std::uint64_t T) {
    std::vector<std::uint8_t> major(T, 0);
    for (std::uint64_t t = 0; t < T; ++t)
        major[t] = classify(static_cast<double>(t) / static_cast<double>(T), part).major ? 1 : 0;
    return major;
}

// Number of grid cells [t/T, (t+1)/T) that contain an arc endpoint; these
// are the cells where the grid sum misjudges the minor set.
inline std::size_t boundary_cells(const ArcPartition& part, std::uint64_t T) {
    std::vector<std::uint64_t> cells;
    cells.reserve(2 * part.arcs.size());
    const double Td = static_cast<double>(T);
    for (const auto& arc : part.arcs)
        for (double end : {arc.center - arc.radius, arc.center + arc.radius}) {
            const double x = end - std::floor(end);
            cells.push_back(static_cast<std::uint64_t>(std::floor(x * Td)) % T);
        }
    std::sort(cells.begin(), cells.end());
    return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

struct MinorStatistics {
    double sup_minor = 0.0;   // max |K| over minor grid points
    double l2_full = 0.0;     // (1/T) sum_t |K(t/T)|^2
    double l2_minor = 0.0;    // same, minor points only
    double coefficient_l2 = 0.0;  // sum_p c_p^2
    std::uint64_t major_points = 0;
    std::uint64_t minor_points = 0;
};

inline MinorStatistics minor_statistics(std::uint64_t N, const WeightSpec& w, const ArcPartition& part,
                                        std::uint64_t T, const PrimeTable& table) {
    table.require(N);
    require_grid(N, T);
    const auto coeffs = weighted_prime_coefficients(N, w, table);
    MinorStatistics st;
    for (double c : coeffs) st.coefficient_l2 += c * c;
    const auto values = fft::evaluate_on_grid(coeffs, T);
    const auto major = classify_grid(part, T);
    for (std::uint64_t t = 0; t < T; ++t) {
        const double m2 = std::norm(values[t]);
        st.l2_full += m2;
        if (major[t]) {
            ++st.major_points;
        } else {
            ++st.minor_points;
            st.l2_minor += m2;
            st.sup_minor = std::max(st.sup_minor, std::sqrt(m2));
        }
    }
    st.l2_full /= static_cast<double>(T);
    st.l2_minor /= static_cast<double>(T);
    if (std::abs(st.l2_full - st.coefficient_l2) > 1e-8 * std::max(st.coefficient_l2, 1e-300))
        throw ConsistencyError("grid L2 of the weighted sum disagrees with the coefficient sum");
    return st;
}

struct MinorIntegral {
    cplx value{0.0, 0.0};
    std::uint64_t points = 0;          // grid points included
    std::size_t boundary_cells = 0;
    double boundary_fraction = 0.0;    // boundary_cells / T
};

namespace detail {

inline MinorIntegral grid_integral(std::uint64_t r, std::uint64_t N, const Progression& prog, const WeightSpec& w,
                                   const ArcPartition* part, std::uint64_t T, const PrimeTable& table) {
    table.require(N);
    require_grid(N, T);
    if (r < 1 || r > N) throw DomainError("r must lie in [1, N]");
    const auto s = prime_sum_grid(N, prog, table, T);
    const auto k = weighted_prime_sum_grid(N, w, table, T);
    std::vector<std::uint8_t> major;
    if (part) major = classify_grid(*part, T);
    MinorIntegral out;
    const std::uint64_t shift = (r + T - N % T) % T;  // (r - N) mod T
    for (std::uint64_t t = 0; t < T; ++t) {
        if (part && major[t]) continue;
        const double ph = static_cast<double>((shift * t) % T) / static_cast<double>(T);
        out.value += s[t] * k[t] * std::polar(1.0, 2.0 * std::numbers::pi * ph);
        ++out.points;
    }
    out.value /= static_cast<double>(T);
    if (part) {
        out.boundary_cells = boundary_cells(*part, T);
        out.boundary_fraction = static_cast<double>(out.boundary_cells) / static_cast<double>(T);
    }
    return out;
}

}  // namespace detail

// Grid approximation of int over the minor set of S(alpha) K(alpha) e((r - N) alpha).
// Diagnostic only: the minor set is not grid-aligned, and the mismatch is
// reported as a boundary-cell fraction.
inline MinorIntegral minor_arc_integral(std::uint64_t r, std::uint64_t N, const Progression& prog, const WeightSpec& w,
                                        const ArcPartition& part, std::uint64_t T, const PrimeTable& table) {
    if (part.N != N) throw DomainError("arc partition was built for a different N");
    return detail::grid_integral(r, N, prog, w, &part, T, table);
}

// The same integral over the whole circle; exact for T > 2N, equal to
// sum_{p + p' = N - r} a_p c_{p'}.
inline MinorIntegral full_circle_integral(std::uint64_t r, std::uint64_t N, const Progression& prog,
                                          const WeightSpec& w, std::uint64_t T, const PrimeTable& table) {
    return detail::grid_integral(r, N, prog, w, nullptr, T, table);
}

}  // namespace goldbach
