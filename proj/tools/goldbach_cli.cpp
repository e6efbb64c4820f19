// goldbach: command-line front end for the library.
//
// Every subcommand builds one Report (inputs, a table of rows, summary
// scalars) and emits it once, as CSV or as a single JSON object.

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <fftw3.h>
#include <gmp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "goldbach/goldbach.hpp"

#ifndef GOLDBACH_VERSION
#define GOLDBACH_VERSION "dev"
#endif

using json = nlohmann::ordered_json;
using namespace goldbach;

namespace {

enum Exit { ok = 0, failure = 1, validation = 2, table_bounds = 3, budget = 4, overlap = 5 };

struct RunConfig {
    std::optional<std::uint64_t> limit;
    std::string format = "csv";
    std::string out;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 1;
    bool timing = false;
};

struct Report {
    std::string command;
    json inputs = json::object();
    std::vector<std::string> columns;
    std::vector<json> rows;  // objects keyed by column
    json summary = json::object();
    std::vector<std::string> notes;
    double seconds = 0.0;
};

// -------------------------------------------------------
// Emission
// -------------------------------------------------------

std::string csv_cell(const json& v) {
    std::string s;
    if (v.is_null()) return s;
    if (v.is_string()) s = v.get<std::string>();
    else s = v.dump();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string render_csv(const Report& r) {
    std::ostringstream os;
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_cell(r.columns[i]);
    os << "\r\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < r.columns.size(); ++i)
            os << (i ? "," : "") << csv_cell(row.contains(r.columns[i]) ? row[r.columns[i]] : json());
        os << "\r\n";
    }
    return os.str();
}

json versions() {
    return {{"goldbach", GOLDBACH_VERSION},
            {"fftw", std::string(fftw_version)},
            {"gmp", std::string(gmp_version)},
            {"boost", BOOST_LIB_VERSION},
            {"compiler", __VERSION__}};
}

std::string render_json(const Report& r, bool with_timing) {
    json outputs = json::object();
    outputs["summary"] = r.summary;
    outputs["columns"] = r.columns;
    outputs["rows"] = r.rows;
    if (!r.notes.empty()) outputs["notes"] = r.notes;
    json timing = json::object();
    if (with_timing) timing["seconds"] = r.seconds;
    const json doc = {{"command", r.command},
                      {"inputs", r.inputs},
                      {"outputs", outputs},
                      {"timing", timing},
                      {"versions", versions()}};
    return doc.dump(2) + "\n";
}

std::string summary_text(const Report& r) {
    std::ostringstream os;
    for (const auto& [k, v] : r.summary.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

// Files get no timing unless asked, so reruns are byte-identical. Stdout
// always carries it.
void emit(const Report& r, const RunConfig& cfg) {
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw DomainError("cannot open output file '" + cfg.out + "'");
        f << (cfg.format == "json" ? render_json(r, cfg.timing) : render_csv(r));
        if (!f) throw DomainError("failed writing '" + cfg.out + "'");
        std::cout << summary_text(r) << "seconds: " << r.seconds << "\nwrote: " << cfg.out << "\n";
        return;
    }
    if (cfg.format == "json") {
        std::cout << render_json(r, true);
    } else {
        std::cout << render_csv(r);
        std::cerr << summary_text(r) << "seconds: " << r.seconds << "\n";
    }
}

// -------------------------------------------------------
// Shared helpers
// -------------------------------------------------------

std::uint64_t table_limit(const RunConfig& cfg, std::uint64_t needed) {
    if (cfg.limit) return *cfg.limit;
    if (const char* env = std::getenv("GOLDBACH_TABLE_LIMIT")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw DomainError(std::string("GOLDBACH_TABLE_LIMIT is not an integer: '") + env + "'");
        }
    }
    return std::max<std::uint64_t>(needed, 2);
}

PrimeTable make_table(const RunConfig& cfg, std::uint64_t needed, Report& r) {
    const auto limit = table_limit(cfg, needed);
    if (limit > 0xFFFFFFFFull) throw DomainError("table limit above 2^32 - 1 is not supported");
    r.inputs["table_limit"] = limit;
    return PrimeTable(static_cast<std::uint32_t>(limit));
}

struct ProgressionArgs {
    std::vector<std::int64_t> values;  // k1 l1 k2 l2 k3 l3, possibly empty

    std::array<Progression, 3> build() const {
        if (!values.empty() && values.size() != 6)
            throw DomainError("expected six values k1 l1 k2 l2 k3 l3, got " + std::to_string(values.size()));
        if (values.empty()) return {};
        return {Progression(values[0], values[1]), Progression(values[2], values[3]),
                Progression(values[4], values[5])};
    }
};

void record_instance(json& j, const TripleInstance& inst) {
    j["N"] = inst.N;
    for (int i = 0; i < 3; ++i) {
        j["k" + std::to_string(i + 1)] = inst.progs[i].modulus();
        j["l" + std::to_string(i + 1)] = inst.progs[i].residue();
    }
}

WeightSpec load_weights(const std::string& spec, std::uint64_t l3, std::uint64_t k_max) {
    for (const char* name : {"zero", "ones", "alternating", "mobius"})
        if (spec == name) return WeightSpec::preset(spec, l3, k_max);
    return WeightSpec::load(spec, l3);
}

bool obstructed(const TripleInstance& inst) {
    std::uint64_t pm = 2;
    for (const auto& g : inst.progs) pm = std::max<std::uint64_t>(pm, g.modulus());
    return singular_series_product(inst, pm).value == 0.0;
}

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

// -------------------------------------------------------
// Subcommands
// -------------------------------------------------------

struct SieveArgs {
    std::uint64_t x = 0;
    std::int64_t k = 1, l = 0;
    bool list = false;
};

Report run_sieve(const SieveArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "sieve";
    r.inputs = {{"x", a.x}, {"k", a.k}, {"l", a.l}, {"list", a.list}};
    const Progression g(a.k, a.l);
    const auto table = make_table(cfg, a.x, r);
    table.require(a.x);
    std::uint64_t count = 0;
    if (a.list) r.columns = {"p", "log_p"};
    for (auto p : table.primes_up_to(a.x)) {
        if (!g.contains(p)) continue;
        ++count;
        if (a.list) r.rows.push_back({{"p", p}, {"log_p", std::log(static_cast<double>(p))}});
    }
    const double theta = chebyshev_theta(a.x, g, table);
    if (!a.list) {
        r.columns = {"x", "k", "l", "count", "theta"};
        r.rows.push_back({{"x", a.x}, {"k", g.modulus()}, {"l", g.residue()}, {"count", count}, {"theta", theta}});
    }
    r.summary = {{"count", count}, {"theta", theta}};
    r.seconds = sw.seconds();
    return r;
}

struct CountArgs {
    std::uint64_t N = 0;
    ProgressionArgs progs;
    std::string method = "fft";
    std::uint64_t max_direct = DirectOptions{}.max_n;
};

Report run_count(const CountArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "count";
    const TripleInstance inst(a.N, a.progs.build());
    record_instance(r.inputs, inst);
    r.inputs["method"] = a.method;
    const auto table = make_table(cfg, a.N, r);
    json row;
    record_instance(row, inst);
    row["method"] = a.method;
    if (a.method == "direct") {
        const auto c = count_direct(inst, table, {.max_n = a.max_direct});
        row["value"] = c.value;
        row["solutions"] = c.solutions;
    } else if (a.method == "fft") {
        const auto c = count_convolution(inst, table);
        row["value"] = c.value;
        row["solutions"] = c.solutions;
    } else {
        table.require(a.N);
        row["value"] = coefficient_extract(inst, table);
        row["solutions"] = nullptr;
    }
    const bool blocked = obstructed(inst);
    row["obstructed"] = blocked;
    if (blocked) r.notes.push_back("congruence obstruction: no admissible residue triple, count is 0");
    if (inst.even_target()) r.notes.push_back("even target: the count includes a prime 2");
    r.columns = {"N", "k1", "l1", "k2", "l2", "k3", "l3", "method", "value", "solutions", "obstructed"};
    r.summary = {{"value", row["value"]}, {"solutions", row["solutions"]}};
    r.rows.push_back(std::move(row));
    r.seconds = sw.seconds();
    return r;
}

struct SingularArgs {
    std::uint64_t N = 0;
    ProgressionArgs progs;
    std::uint64_t q_max = 2000, p_max = 2000;
};

Report run_singular(const SingularArgs& a, const RunConfig&) {
    Stopwatch sw;
    Report r;
    r.command = "singular";
    const TripleInstance inst(a.N, a.progs.build());
    record_instance(r.inputs, inst);
    r.inputs["qmax"] = a.q_max;
    r.inputs["pmax"] = a.p_max;
    const auto qs = singular_series_qsum(inst, a.q_max);
    const auto pr = singular_series_product(inst, a.p_max);
    json row;
    record_instance(row, inst);
    row["qsum"] = qs.value;
    row["product"] = pr.value;
    row["abs_diff"] = std::abs(qs.value - pr.value);
    row["tail_estimate"] = qs.tail_estimate;
    row["main_term"] = main_term(inst, pr);
    r.columns = {"N", "k1", "l1", "k2", "l2", "k3", "l3", "qsum", "product", "abs_diff", "tail_estimate", "main_term"};
    r.summary = {{"qsum", qs.value}, {"product", pr.value}, {"main_term", row["main_term"]}};
    r.rows.push_back(std::move(row));
    r.seconds = sw.seconds();
    return r;
}

struct DeltaArgs {
    std::uint64_t N = 0;
    ProgressionArgs progs;
    std::uint64_t p_max = 2000;
    std::uint64_t series_to = 0;
    std::uint64_t series_step = 2;
};

Report run_delta(const DeltaArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "delta";
    const auto progs = a.progs.build();
    const TripleInstance first(a.N, progs);
    record_instance(r.inputs, first);
    r.inputs["pmax"] = a.p_max;
    const std::uint64_t last = std::max(a.N, a.series_to);
    if (a.series_step < 1) throw DomainError("--series-step must be >= 1");
    r.inputs["series_to"] = last;
    r.inputs["series_step"] = a.series_step;
    const auto table = make_table(cfg, last, r);
    DensityCache cache;
    r.columns = {"N", "R", "singular_series", "M", "delta", "normalized", "relative"};
    for (std::uint64_t n = a.N; n <= last; n += a.series_step) {
        const auto d = delta({n, progs}, table, {.q_max = 0, .p_max = a.p_max}, &cache);
        const double rel = d.relative();
        r.rows.push_back({{"N", n},
                          {"R", d.R.value},
                          {"singular_series", d.series.value},
                          {"M", d.M},
                          {"delta", d.delta},
                          {"normalized", d.normalized},
                          {"relative", std::isfinite(rel) ? json(rel) : json()}});
    }
    r.summary = {{"points", r.rows.size()}, {"first_relative", r.rows.front()["relative"]}};
    r.seconds = sw.seconds();
    return r;
}

struct SweepArgs {
    std::uint64_t N = 0;
    std::string mode = "E";
    std::vector<std::uint64_t> caps{1, 1, 1};
    std::string lambda = "ones";
    std::uint64_t l3 = 1;
    std::uint64_t budget = 1'000'000;
    std::uint64_t p_max = 2000;
    std::optional<double> asymptotic_B;
};

Report run_sweep(const SweepArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "sweep";
    if (a.mode != "E" && a.mode != "Estar") throw DomainError("--mode must be E or Estar");
    if (a.caps.size() != 3 || a.caps[0] < 1 || a.caps[1] < 1 || a.caps[2] < 1)
        throw DomainError("--caps needs three moduli caps >= 1");
    SweepConfig sc;
    sc.N = a.N;
    sc.H1 = a.caps[0];
    sc.H2 = a.caps[1];
    sc.H3 = a.caps[2];
    sc.mode = a.mode == "E" ? SweepMode::MaxError : SweepMode::WeightedError;
    sc.trunc.p_max = a.p_max;
    sc.budget = a.budget;
    sc.threads = cfg.threads;
    if (a.asymptotic_B) sc = with_asymptotic_caps(sc, *a.asymptotic_B);
    if (sc.mode == SweepMode::WeightedError) sc.lambda = load_weights(a.lambda, a.l3, sc.H3);
    r.inputs = {{"N", a.N},   {"mode", a.mode}, {"caps", {sc.H1, sc.H2, sc.H3}}, {"caps_clamped", sc.caps_clamped},
                {"budget", a.budget}, {"pmax", a.p_max}, {"threads", cfg.threads}, {"seed", cfg.seed}};
    if (a.asymptotic_B) r.inputs["asymptotic_B"] = *a.asymptotic_B;
    if (sc.mode == SweepMode::WeightedError) {
        r.inputs["lambda"] = a.lambda;
        r.inputs["l3"] = a.l3;
        std::vector<double> lam;
        for (std::uint64_t k = 1; k <= sc.lambda.k_max(); ++k) lam.push_back(sc.lambda.at(k));
        r.inputs["lambda_values"] = lam;
    }
    const auto table = make_table(cfg, a.N, r);
    const auto rep = sweep(sc, table);
    r.columns = {"k1", "k2", "k3", "l1", "l2", "l3", "R", "M", "delta", "normalized", "value"};
    for (const auto& row : rep.rows)
        r.rows.push_back({{"k1", row.k1},
                          {"k2", row.k2},
                          {"k3", row.k3},
                          {"l1", row.l1},
                          {"l2", row.l2},
                          {"l3", row.l3},
                          {"R", row.R},
                          {"M", row.M},
                          {"delta", row.delta},
                          {"normalized", row.normalized},
                          {"value", row.value}});
    r.summary = {{"mode", a.mode}, {"aggregate", rep.aggregate}, {"cells", rep.cells}, {"caps_clamped", sc.caps_clamped}};
    if (sc.caps_clamped) r.notes.push_back("caps were reduced to fit the budget or below 1");
    r.seconds = sw.seconds();
    return r;
}

struct ArcsArgs {
    std::uint64_t N = 0;
    std::uint64_t Q = 1;
    double tau = 0.0;
    bool stats = false;
    std::string lambda = "ones";
    std::uint64_t l3 = 1;
    std::uint64_t k_max = 10;
    std::uint64_t T = 0;
};

Report run_arcs(const ArcsArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "arcs";
    r.inputs = {{"N", a.N}, {"Q", a.Q}, {"tau", a.tau}, {"stats", a.stats}};
    const auto part = build_partition(a.N, a.Q, a.tau);
    json row = {{"N", a.N},
                {"Q", a.Q},
                {"tau", a.tau},
                {"arcs", part.arcs.size()},
                {"major_measure", major_measure(part)},
                {"analytic_measure", analytic_major_measure(a.Q, a.tau)}};
    r.columns = {"N", "Q", "tau", "arcs", "major_measure", "analytic_measure"};
    if (a.stats) {
        const std::uint64_t T = a.T ? a.T : 2 * a.N + 1;
        r.inputs["lambda"] = a.lambda;
        r.inputs["l3"] = a.l3;
        r.inputs["kmax"] = a.k_max;
        r.inputs["T"] = T;
        const auto w = load_weights(a.lambda, a.l3, a.k_max);
        const auto table = make_table(cfg, a.N, r);
        const auto st = minor_statistics(a.N, w, part, T, table);
        row["T"] = T;
        row["sup_minor"] = st.sup_minor;
        row["l2_full"] = st.l2_full;
        row["l2_minor"] = st.l2_minor;
        row["coefficient_l2"] = st.coefficient_l2;
        row["major_points"] = st.major_points;
        row["minor_points"] = st.minor_points;
        row["boundary_cells"] = boundary_cells(part, T);
        for (const char* c : {"T", "sup_minor", "l2_full", "l2_minor", "coefficient_l2", "major_points", "minor_points",
                              "boundary_cells"})
            r.columns.push_back(c);
    }
    r.summary = {{"arcs", part.arcs.size()}, {"major_measure", row["major_measure"]}};
    if (a.stats) {
        r.summary["sup_minor"] = row["sup_minor"];
        r.summary["l2_minor"] = row["l2_minor"];
    }
    r.rows.push_back(std::move(row));
    r.seconds = sw.seconds();
    return r;
}

struct ExpsumArgs {
    std::uint64_t N = 0;
    std::int64_t k = 1, l = 0;
    std::string lambda;
    std::uint64_t l3 = 1;
    std::uint64_t k_max = 10;
    std::vector<double> alphas;
    std::uint64_t grid = 0;
    double kernel_H = 0.0;
    std::int64_t h_max = 0;
};

Report run_expsum(const ExpsumArgs& a, const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "expsum";
    if (a.kernel_H > 0.0) {
        r.inputs = {{"kernel_H", a.kernel_H}, {"hmax", a.h_max}};
        const auto kc = kernel_coefficients(a.kernel_H, a.h_max);
        r.columns = {"h", "c"};
        for (std::int64_t h = 0; h <= kc.h_max; ++h) r.rows.push_back({{"h", h}, {"c", kc.at(h)}});
        r.summary = {{"H", a.kernel_H}, {"c0", kc.at(0)}, {"c0_closed_form", 2 + 2 * std::log(a.kernel_H / 2)}};
        r.seconds = sw.seconds();
        return r;
    }
    r.inputs = {{"N", a.N}};
    const bool weighted = !a.lambda.empty();
    std::optional<WeightSpec> w;
    const Progression g(a.k, a.l);
    if (weighted) {
        w = load_weights(a.lambda, a.l3, a.k_max);
        r.inputs["lambda"] = a.lambda;
        r.inputs["l3"] = a.l3;
        r.inputs["kmax"] = a.k_max;
    } else {
        r.inputs["k"] = g.modulus();
        r.inputs["l"] = g.residue();
    }
    const auto table = make_table(cfg, a.N, r);
    table.require(a.N);
    r.columns = {"alpha", "re", "im", "abs"};
    auto push = [&](double alpha, cplx z) {
        r.rows.push_back({{"alpha", alpha}, {"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}});
    };
    if (a.grid) {
        r.inputs["T"] = a.grid;
        const auto v = weighted ? weighted_prime_sum_grid(a.N, *w, table, a.grid) : prime_sum_grid(a.N, g, table, a.grid);
        for (std::uint64_t t = 0; t < a.grid; ++t) push(static_cast<double>(t) / static_cast<double>(a.grid), v[t]);
    } else {
        const std::vector<double> alphas = a.alphas.empty() ? std::vector<double>{0.0} : a.alphas;
        r.inputs["alpha"] = alphas;
        for (double x : alphas) push(x, weighted ? weighted_prime_sum(x, a.N, *w, table) : prime_sum(x, a.N, g, table));
    }
    double sup = 0.0;
    for (const auto& row : r.rows) sup = std::max(sup, row["abs"].get<double>());
    r.summary = {{"points", r.rows.size()}, {"max_abs", sup}};
    r.seconds = sw.seconds();
    return r;
}

// Quick randomized cross-checks, seeded by --seed.
Report run_selftest(const RunConfig& cfg) {
    Stopwatch sw;
    Report r;
    r.command = "selftest";
    r.inputs = {{"seed", cfg.seed}};
    std::mt19937_64 rng(cfg.seed);
    const auto table = make_table(cfg, 20'000, r);
    r.columns = {"check", "pass", "detail"};
    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        r.rows.push_back({{"check", name}, {"pass", pass}, {"detail", detail}});
    };
    auto random_prog = [&](std::uint64_t kmax) {
        std::uniform_int_distribution<std::int64_t> kd(1, static_cast<std::int64_t>(kmax));
        const auto k = kd(rng);
        std::uniform_int_distribution<std::int64_t> ld(0, k - 1);
        for (;;) {
            const auto l = ld(rng);
            if (std::gcd(k, l) == 1) return Progression(k, l);
        }
    };
    {
        double worst = 0.0;
        bool counts = true;
        std::uniform_int_distribution<std::uint64_t> nd(6, 1500);
        for (int i = 0; i < 10; ++i) {
            const TripleInstance inst(nd(rng), {random_prog(12), random_prog(12), random_prog(12)});
            const auto d = count_direct(inst, table);
            const auto c = count_convolution(inst, table);
            const double e = coefficient_extract(inst, table);
            counts = counts && d.solutions == c.solutions;
            const double scale = std::max(1.0, d.value);
            worst = std::max({worst, std::abs(c.value - d.value) / scale, std::abs(e - d.value) / scale});
        }
        std::ostringstream os;
        os << "max relative difference " << worst;
        record("counting paths agree", counts && worst < 1e-6, os.str());
    }
    {
        double worst = 0.0;
        std::uniform_int_distribution<std::uint64_t> nd(3, 10000);
        for (int i = 0; i < 3; ++i) {
            const TripleInstance inst(2 * nd(rng) + 1, {random_prog(8), random_prog(8), random_prog(8)});
            worst = std::max(worst, std::abs(singular_series_qsum(inst, 500).value -
                                             singular_series_product(inst, 500).value));
        }
        std::ostringstream os;
        os << "max difference " << worst;
        record("singular series paths agree", worst < 1e-2, os.str());
    }
    {
        const auto part = build_partition(1000, 7, 500.0);
        const double diff = std::abs(major_measure(part) - analytic_major_measure(7, 500.0));
        record("arc measure", diff < 1e-12 && pairwise_disjoint(part), "difference " + std::to_string(diff));
    }
    {
        const double c0 = kernel_coefficient(50.0, 0, 8);
        const double diff = std::abs(c0 - (2 + 2 * std::log(25.0)));
        record("kernel zeroth coefficient", diff < 1e-9, "difference " + std::to_string(diff));
    }
    bool all = true;
    for (const auto& row : r.rows) all = all && row["pass"].get<bool>();
    r.summary = {{"checks", r.rows.size()}, {"all_pass", all}};
    r.seconds = sw.seconds();
    return r;
}

void add_progressions(CLI::App* sub, ProgressionArgs& p) {
    sub->add_option("progressions", p.values, "k1 l1 k2 l2 k3 l3 (default: no constraints)")->expected(0, 6);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ternary Goldbach counts, singular series and error terms for primes in progressions"};
    app.set_version_flag("--version", GOLDBACH_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::uint64_t limit = 0;
    auto* limit_opt = app.add_option("--limit", limit, "sieve bound (default: $GOLDBACH_TABLE_LIMIT, else the largest N used)");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out, "write the report to this file");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_flag("--timing", cfg.timing, "include timing in files written with --out");
    for (auto* o : app.get_options()) o->configurable();

    SieveArgs sieve_a;
    auto* sieve_c = app.add_subcommand("sieve", "primes up to x, optionally in a progression");
    sieve_c->add_option("x", sieve_a.x, "upper bound")->required();
    sieve_c->add_option("--k", sieve_a.k, "modulus");
    sieve_c->add_option("--l", sieve_a.l, "residue");
    sieve_c->add_flag("--list", sieve_a.list, "list the primes");

    CountArgs count_a;
    auto* count_c = app.add_subcommand("count", "log-weighted count of p1 + p2 + p3 = N");
    count_c->add_option("N", count_a.N, "target")->required();
    add_progressions(count_c, count_a.progs);
    count_c->add_option("--method", count_a.method, "direct, fft or grid")
        ->check(CLI::IsMember({"direct", "fft", "grid"}));
    count_c->add_option("--max-direct", count_a.max_direct, "largest N accepted by the direct method");

    SingularArgs sing_a;
    auto* sing_c = app.add_subcommand("singular", "singular series by q-sum and by local densities");
    sing_c->add_option("N", sing_a.N, "target")->required();
    add_progressions(sing_c, sing_a.progs);
    sing_c->add_option("--qmax", sing_a.q_max, "q-sum truncation")->check(CLI::PositiveNumber);
    sing_c->add_option("--pmax", sing_a.p_max, "product truncation");

    DeltaArgs delta_a;
    auto* delta_c = app.add_subcommand("delta", "R - M for one N, or a series of N for plotting");
    delta_c->add_option("N", delta_a.N, "target (first of the series)")->required();
    add_progressions(delta_c, delta_a.progs);
    delta_c->add_option("--pmax", delta_a.p_max, "product truncation");
    delta_c->add_option("--series-to", delta_a.series_to, "last N of the series");
    delta_c->add_option("--series-step", delta_a.series_step, "step between targets");

    SweepArgs sweep_a;
    double asym_B = 0.0;
    auto* sweep_c = app.add_subcommand("sweep", "error term summed over moduli up to caps");
    sweep_c->add_option("N", sweep_a.N, "target")->required();
    sweep_c->add_option("--mode", sweep_a.mode, "E (max error) or Estar (weighted)")
        ->check(CLI::IsMember({"E", "Estar"}));
    sweep_c->add_option("--caps", sweep_a.caps, "H1 H2 H3")->expected(3);
    sweep_c->add_option("--lambda", sweep_a.lambda, "weights: zero|ones|alternating|mobius or a file of 'k value' lines");
    sweep_c->add_option("--l3", sweep_a.l3, "fixed residue of the third prime");
    sweep_c->add_option("--budget", sweep_a.budget, "largest number of (k, l) cells");
    sweep_c->add_option("--pmax", sweep_a.p_max, "product truncation");
    auto* asym_opt = sweep_c->add_option("--asymptotic", asym_B, "caps sqrt(N) L^-B, N^(1/3) L^-B, clamped to the budget");

    ArcsArgs arcs_a;
    auto* arcs_c = app.add_subcommand("arcs", "major/minor arc dissection");
    arcs_c->add_option("N", arcs_a.N, "target")->required();
    arcs_c->add_option("--Q", arcs_a.Q, "largest denominator")->required();
    arcs_c->add_option("--tau", arcs_a.tau, "arc scale, must exceed 2 Q^2")->required();
    arcs_c->add_flag("--stats", arcs_a.stats, "grid statistics of the weighted sum on the minor set");
    arcs_c->add_option("--lambda", arcs_a.lambda, "weights for --stats");
    arcs_c->add_option("--l3", arcs_a.l3, "residue for --stats");
    arcs_c->add_option("--kmax", arcs_a.k_max, "largest modulus for preset weights");
    arcs_c->add_option("--T", arcs_a.T, "grid size (default 2N + 1)");

    ExpsumArgs exp_a;
    auto* exp_c = app.add_subcommand("expsum", "exponential sums over primes, or the kernel coefficients");
    exp_c->add_option("N", exp_a.N, "length of the sum");
    exp_c->add_option("--k", exp_a.k, "modulus");
    exp_c->add_option("--l", exp_a.l, "residue");
    exp_c->add_option("--lambda", exp_a.lambda, "use the weighted sum with these weights");
    exp_c->add_option("--l3", exp_a.l3, "residue of the weighted sum");
    exp_c->add_option("--kmax", exp_a.k_max, "largest modulus for preset weights");
    exp_c->add_option("--alpha", exp_a.alphas, "evaluation points");
    exp_c->add_option("--grid", exp_a.grid, "evaluate at t / T for all t < T");
    exp_c->add_option("--kernel", exp_a.kernel_H, "print the kernel coefficients for this height instead");
    exp_c->add_option("--hmax", exp_a.h_max, "last kernel coefficient (default 10 H)");

    auto* self_c = app.add_subcommand("selftest", "quick randomized cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::validation;
    }
    if (limit_opt->count()) cfg.limit = limit;
    if (asym_opt->count()) sweep_a.asymptotic_B = asym_B;
    if (exp_c->parsed() && exp_a.kernel_H <= 0.0 && exp_a.N == 0) {
        std::cerr << "error: expsum needs N or --kernel\n";
        return Exit::validation;
    }

    try {
        Report r;
        if (sieve_c->parsed()) r = run_sieve(sieve_a, cfg);
        else if (count_c->parsed()) r = run_count(count_a, cfg);
        else if (sing_c->parsed()) r = run_singular(sing_a, cfg);
        else if (delta_c->parsed()) r = run_delta(delta_a, cfg);
        else if (sweep_c->parsed()) r = run_sweep(sweep_a, cfg);
        else if (arcs_c->parsed()) r = run_arcs(arcs_a, cfg);
        else if (exp_c->parsed()) r = run_expsum(exp_a, cfg);
        else if (self_c->parsed()) r = run_selftest(cfg);
        r.inputs["format"] = cfg.format;
        emit(r, cfg);
        if (r.command == "selftest" && !r.summary["all_pass"].get<bool>()) return Exit::failure;
        return Exit::ok;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\nestimated cells: " << e.estimated_cells << "\n";
        return Exit::budget;
    } catch (const ArcOverlap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::overlap;
    } catch (const TableTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::table_bounds;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::failure;
    }
}
