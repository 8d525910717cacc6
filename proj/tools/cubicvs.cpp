// cubicvs: command-line front end for the counting, arc, density and integral
// modules. Human-readable table on stdout, or JSON lines with --json.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "cubicvs/acceptance.hpp"
#include "cubicvs/arcs.hpp"
#include "cubicvs/count.hpp"
#include "cubicvs/integral.hpp"
#include "cubicvs/local.hpp"
#include "cubicvs/parallel.hpp"
#include "cubicvs/record.hpp"
#include "cubicvs/table_cache.hpp"

using namespace cubicvs;

namespace {

constexpr int kExitCriterion = 1;
constexpr int kExitUsage = 2;

struct Global {
    bool json = false;
    bool timing = false;
    unsigned threads = 0;
    std::uint64_t seed = AcceptanceContext{}.seed;
    std::string cache_dir;
    bool no_cache = false;
    std::string output;
};

using Row = std::vector<std::string>;

struct Report {
    std::vector<ResultRecord> records;
    std::vector<Row> table;  // first row is the header
    std::vector<std::string> notes;
};

std::string fmt(double v, int digits = 8) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

Offset parse_offset(const std::string& text) {
    const auto p = split_commas(text);
    if (p.size() != 3) throw ConfigError("expected three comma-separated integers, got '" + text + "'");
    try {
        return {std::stoll(p[0]), std::stoll(p[1]), std::stoll(p[2])};
    } catch (const std::exception&) {
        throw ConfigError("not an integer triple: '" + text + "'");
    }
}

NormalizedOffset parse_normalized(const std::string& text) {
    const auto p = split_commas(text);
    if (p.size() != 3) throw ConfigError("expected three comma-separated numbers, got '" + text + "'");
    try {
        return {std::stod(p[0]), std::stod(p[1]), std::stod(p[2])};
    } catch (const std::exception&) {
        throw ConfigError("not a numeric triple: '" + text + "'");
    }
}

std::string show(const Offset& h) { return to_json(h).dump(); }

std::unique_ptr<TableCache> open_cache(const Global& g) {
    if (g.no_cache) return nullptr;
    auto cache = std::make_unique<TableCache>(g.cache_dir.empty() ? TableCache::default_dir() : std::filesystem::path(g.cache_dir));
    cache->set_warning_sink([](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    return cache;
}

RepresentationTable load_table(int s, i64 X, const TableCache* cache) {
    validate_params({s, X});
    if (cache)
        if (auto t = cache->load(s, X)) return std::move(*t);
    auto t = build_representation_table(s, X);
    if (cache) cache->store(t);
    return t;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print_table(const std::vector<Row>& rows, std::ostream& out) {
    if (rows.empty()) return;
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], r[i].size());
        }
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t i = 0; i < rows[k].size(); ++i) {
            out << rows[k][i];
            if (i + 1 < rows[k].size()) out << std::string(width[i] - rows[k][i].size() + 2, ' ');
        }
        out << "\n";
        if (k == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w + 2;
            out << std::string(total - 2, '-') << "\n";
        }
    }
}

void emit(const Report& rep, const Global& g) {
    if (g.json) {
        for (const auto& r : rep.records) std::cout << r.to_line() << "\n";
    } else {
        print_table(rep.table, std::cout);
        for (const auto& n : rep.notes) std::cout << n << "\n";
    }
    if (!g.output.empty()) {
        std::ofstream f(g.output, std::ios::app);
        if (!f) throw ConfigError("cannot write " + g.output);
        for (const auto& r : rep.records) f << r.to_line() << "\n";
    }
    std::cout.flush();
}

// ---- count ----

struct CountArgs {
    int s = 1;
    std::vector<i64> X;
    std::vector<std::string> h;
    int h_box = -1;
};

Report run_count(const CountArgs& a, const Global& g) {
    std::vector<Offset> offsets;
    for (const auto& t : a.h) offsets.push_back(parse_offset(t));
    if (a.h_box >= 0)
        for (i64 x = -a.h_box; x <= a.h_box; ++x)
            for (i64 y = -a.h_box; y <= a.h_box; ++y)
                for (i64 z = -a.h_box; z <= a.h_box; ++z) offsets.push_back({x, y, z});
    if (offsets.empty()) offsets.push_back({0, 0, 0});
    if (a.X.empty()) throw ConfigError("--X is required");

    const auto cache = open_cache(g);
    Report rep;
    rep.table.push_back({"s", "X", "h", "count", "method"});
    for (i64 X : a.X) {
        Stopwatch clock;
        const auto table = load_table(a.s, X, cache.get());
        for (const auto& h : offsets) {
            const u64 v = count_solutions(table, h).value;
            ResultRecord r;
            r.command = "count";
            r.inputs = {{"s", a.s}, {"X", X}, {"h", to_json(h)}};
            r.outputs = {{"count", tagged(v, kExactCount)}};
            r.methods = {kExactCount};
            if (g.timing) r.elapsed = clock.seconds();
            rep.records.push_back(r);
            rep.table.push_back({std::to_string(a.s), std::to_string(X), show(h), std::to_string(v), kExactCount});
        }
    }
    return rep;
}

// ---- asymptotic ----

struct AsymptoticArgs {
    int s = 6;
    std::string h = "1,1,1";
    std::vector<i64> X{8, 16, 24, 32};
    i64 qmax = 32;
    double B = 16.0;
    double tol = 1e-8;
};

Report run_asymptotic(const AsymptoticArgs& a, const Global& g) {
    const Offset h = parse_offset(a.h);
    if (!congruence_soluble(h))
        throw ConfigError("congruence-insoluble: h = " + show(h) +
                          " fails the congruence conditions, so no asymptotic is predicted");
    if (a.X.empty()) throw ConfigError("--X is required");
    for (std::size_t i = 1; i < a.X.size(); ++i)
        if (a.X[i] <= a.X[i - 1]) throw ConfigError("--X values must be strictly ascending");
    if (a.s < 3) throw ConfigError("--s must be at least 3 for the ratio B_s/X^(2s-6)");

    Stopwatch clock;
    const auto cache = open_cache(g);
    const DensityReport series = singular_series_truncated(a.s, h, a.qmax);
    Report rep;
    rep.table.push_back({"X", "count", "ratio", "series", "integral", "prediction", "ratio diff"});
    Json rows = Json::array();
    Json diffs = Json::array();
    double prev = std::nan("");
    for (i64 X : a.X) {
        const auto table = load_table(a.s, X, cache.get());
        const u64 count = count_solutions(table, h).value;
        const double ratio = static_cast<double>(count) / std::pow(static_cast<double>(X), 2 * a.s - 6);
        const IntegralResult J = singular_integral_truncated(a.s, NormalizedOffset::from_offset(h, X), a.B, a.tol);
        const double prediction = series.value * J.value;
        const double diff = ratio - prev;
        rows.push_back({{"X", X},
                        {"count", tagged(count, kExactCount)},
                        {"ratio", tagged(ratio, kExactCount)},
                        {"integral", tagged(J.value, kQuadrature)},
                        {"integral_tail", tagged(J.truncation_estimate, kQuadrature)},
                        {"prediction", tagged(prediction, kQuadrature)}});
        if (!std::isnan(prev)) diffs.push_back(tagged(diff, kExactCount));
        rep.table.push_back({std::to_string(X), std::to_string(count), fmt(ratio), fmt(series.value),
                             fmt(J.value), fmt(prediction), std::isnan(prev) ? "" : fmt(diff)});
        prev = ratio;
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < diffs.size(); ++i)
        shrinking = shrinking && std::abs(number_from(diffs[i]["value"])) <
                                     std::abs(number_from(diffs[i - 1]["value"]));
    ResultRecord r;
    r.command = "asymptotic";
    r.inputs = {{"s", a.s}, {"h", to_json(h)}, {"X", a.X}, {"Qmax", a.qmax}, {"B", a.B}, {"tol", a.tol}};
    r.outputs = {{"series", tagged(series.value, kTruncatedSeries)},
                 {"series_tail", tagged(series.tail_estimate, kTruncatedSeries)},
                 {"rows", rows},
                 {"ratio_differences", diffs},
                 {"differences_shrinking", shrinking}};
    r.methods = {kExactCount, kTruncatedSeries, kQuadrature};
    if (g.timing) r.elapsed = clock.seconds();
    rep.records.push_back(r);
    rep.notes.push_back(std::string("successive |ratio differences| ") +
                        (shrinking ? "shrink" : "do not shrink") + "; series tail estimate " +
                        fmt(series.tail_estimate, 4));
    return rep;
}

// ---- verify ----

struct VerifyArgs {
    std::vector<std::string> only;
};

int run_verify(const VerifyArgs& a, const Global& g) {
    std::vector<int> ids;
    for (const auto& key : a.only) {
        const auto* c = find_criterion(key);
        if (!c) throw ConfigError("unknown criterion '" + key + "'");
        if (std::find(ids.begin(), ids.end(), c->id) == ids.end()) ids.push_back(c->id);
    }
    if (ids.empty())
        for (const auto& c : acceptance_criteria()) ids.push_back(c.id);

    const auto cache = open_cache(g);
    AcceptanceContext ctx;
    ctx.cache = cache.get();
    ctx.seed = g.seed;
    if (!g.json) std::cout << "seed " << g.seed << "\n";

    Report rep;
    std::vector<std::string> failed;
    for (int id : ids) {
        const CriterionResult res = run_criterion(id, ctx);
        if (!res.passed) failed.push_back(res.name);
        rep.records.push_back(to_record(res, g.timing));
        if (!g.json) std::cout << summary_line(res) << std::endl;
    }
    ResultRecord summary;
    summary.command = "verify";
    summary.inputs = {{"criteria", ids}, {"seed", g.seed}};
    summary.outputs = {{"passed", ids.size() - failed.size()}, {"failed", failed}};
    rep.records.push_back(summary);
    rep.notes.push_back(std::to_string(ids.size() - failed.size()) + "/" + std::to_string(ids.size()) +
                        " criteria passed");
    for (const auto& name : failed) rep.notes.push_back("failed: " + name);
    emit(rep, g);
    return failed.empty() ? 0 : kExitCriterion;
}

// ---- dissect ----

struct DissectArgs {
    i64 X = 1'000'000;
    std::size_t samples = 100'000;
};

Report run_dissect(const DissectArgs& a, const Global& g) {
    if (a.X < 1) throw ConfigError("--X must be positive");
    Stopwatch clock;
    const DissectionReport d = dissect_samples(a.X, a.samples, g.seed);
    Report rep;
    rep.table.push_back({"label", "points", "share"});
    Json hist = Json::object();
    for (int k = 0; k < 4; ++k) {
        const std::string name = "W" + std::to_string(k + 1);
        hist[name] = tagged(static_cast<u64>(d.histogram[k]), kExactCount);
        rep.table.push_back({name, std::to_string(d.histogram[k]),
                             fmt(static_cast<double>(d.histogram[k]) / static_cast<double>(d.samples), 4)});
    }
    ResultRecord r;
    r.command = "dissect";
    r.inputs = {{"X", a.X}, {"samples", a.samples}, {"seed", g.seed}};
    r.outputs = {{"L", number(partition_L(a.X))},
                 {"Q", number(partition_Q(a.X))},
                 {"histogram", hist},
                 {"not_partitioned", tagged(static_cast<u64>(d.not_partitioned), kExactCount)},
                 {"p_outside_major", tagged(static_cast<u64>(d.p_outside_major), kExactCount)}};
    r.methods = {kExactCount};
    if (g.timing) r.elapsed = clock.seconds();
    rep.records.push_back(r);
    rep.notes.push_back("seed " + std::to_string(g.seed) + "; " + std::to_string(d.not_partitioned) +
                        " points not partitioned, " + std::to_string(d.p_outside_major) +
                        " P-points outside the major arcs");
    return rep;
}

// ---- weyl ----

struct WeylArgs {
    std::vector<i64> X{1000, 10'000, 100'000};
    std::size_t samples = 256;
    double Q = 0.0;  // 0: the partition cutoff X^(1/24)
};

Report run_weyl(const WeylArgs& a, const Global& g) {
    Report rep;
    rep.table.push_back({"X", "Q", "kept", "sup |f|", "minor ratio", "L", "major error", "error/L^2"});
    for (i64 X : a.X) {
        Stopwatch clock;
        const double Q = a.Q > 0 ? a.Q : partition_Q(X);
        const WeylProbeReport w = weyl_probe(X, Q, a.samples, g.seed);
        const MajorArcProbeReport m = major_arc_error_probe(X, a.samples, g.seed);
        ResultRecord r;
        r.command = "weyl";
        r.inputs = {{"X", X}, {"Q", number(Q)}, {"samples", a.samples}, {"seed", g.seed}};
        r.outputs = {{"kept", w.kept},
                     {"sup_abs", tagged(w.max_abs, kQuadrature)},
                     {"minor_ratio", tagged(w.ratio, kQuadrature)},
                     {"L", number(m.L)},
                     {"major_max_error", tagged(m.max_error, kQuadrature)},
                     {"major_normalized", tagged(m.normalized, kQuadrature)}};
        r.methods = {kQuadrature};
        if (g.timing) r.elapsed = clock.seconds();
        rep.records.push_back(r);
        rep.table.push_back({std::to_string(X), fmt(Q, 5), std::to_string(w.kept), fmt(w.max_abs),
                             fmt(w.ratio, 5), fmt(m.L, 5), fmt(m.max_error, 5), fmt(m.normalized, 5)});
    }
    rep.notes.push_back("seed " + std::to_string(g.seed));
    return rep;
}

// ---- density ----

struct DensityArgs {
    i64 p = 0;
    int s = 6;
    std::string h = "0,0,0";
    int H = 2;
    i64 qmax = 0;
    int hensel_depth = 0;
};

Report run_density(const DensityArgs& a, const Global& g) {
    if (a.p == 0 && a.qmax == 0) throw ConfigError("give --p for a p-adic density or --Qmax for the series");
    const Offset h = parse_offset(a.h);
    Stopwatch clock;
    Report rep;
    rep.table.push_back({"quantity", "value", "method"});
    ResultRecord r;
    r.command = "density";
    r.inputs = {{"s", a.s}, {"h", to_json(h)}};
    if (a.p != 0) {
        if (!is_prime(a.p)) throw ConfigError("--p must be prime");
        r.inputs["p"] = a.p;
        r.inputs["H"] = a.H;
        const DensityReport sums = padic_density_via_sums(a.p, a.s, h, a.H);
        const DensityReport counting = padic_density_via_counting(a.p, a.s, h, a.H);
        r.outputs["via_sums"] = tagged(sums.value, kTruncatedSeries);
        r.outputs["via_counting"] = tagged(counting.value, kExactCount);
        r.methods = {kTruncatedSeries, kExactCount};
        rep.table.push_back({"density (sums)", fmt(sums.value, 12), kTruncatedSeries});
        rep.table.push_back({"density (counting)", fmt(counting.value, 12), kExactCount});
        if (a.hensel_depth > 0) {
            r.inputs["hensel_depth"] = a.hensel_depth;
            HenselOptions opt;
            opt.seed = g.seed;
            const auto w = hensel_nonsingular_search(a.p, a.s, h, a.hensel_depth, opt);
            if (w) {
                r.outputs["hensel"] = {{"level", w->level},
                                       {"valuation", w->valuation},
                                       {"x", w->x},
                                       {"y", w->y},
                                       {"columns", w->columns},
                                       {"verified", verify_witness(*w, a.s, h)}};
                rep.table.push_back({"hensel witness", "level " + std::to_string(w->level) + ", minor valuation " +
                                                           std::to_string(w->valuation),
                                     kExactCount});
            } else {
                r.outputs["hensel"] = nullptr;
                rep.table.push_back({"hensel witness", "none found", kExactCount});
            }
        }
    }
    if (a.qmax != 0) {
        r.inputs["Qmax"] = a.qmax;
        const DensityReport series = singular_series_truncated(a.s, h, a.qmax);
        r.outputs["series"] = tagged(series.value, kTruncatedSeries);
        r.outputs["series_tail"] = tagged(series.tail_estimate, kTruncatedSeries);
        if (r.methods.empty()) r.methods = {kTruncatedSeries};
        rep.table.push_back({"singular series", fmt(series.value, 12), kTruncatedSeries});
        rep.table.push_back({"series tail", fmt(series.tail_estimate, 4), kTruncatedSeries});
    }
    if (g.timing) r.elapsed = clock.seconds();
    rep.records.push_back(r);
    return rep;
}

// ---- integral ----

struct IntegralArgs {
    int s = 6;
    std::string n = "0,0,0";
    double B = 16.0;
    double tol = 1e-8;
    int nodes_per_unit = IntegralOptions{}.nodes_per_unit;
    double eps = 0.0;
    std::uint64_t oracle_samples = 0;
};

Report run_integral(const IntegralArgs& a, const Global& g) {
    const NormalizedOffset n = parse_normalized(a.n);
    if (!(a.B > 0)) throw ConfigError("--B must be positive");
    if (a.oracle_samples > 0 && !(a.eps > 0)) throw ConfigError("--oracle-samples needs --eps");
    Stopwatch clock;
    IntegralOptions opt;
    opt.nodes_per_unit = a.nodes_per_unit;
    Report rep;
    rep.table.push_back({"quantity", "value", "method"});
    ResultRecord r;
    r.command = "integral";
    r.inputs = {{"s", a.s}, {"n", {n.n1, n.n2, n.n3}}, {"B", a.B}, {"tol", a.tol}, {"nodes_per_unit", a.nodes_per_unit}};
    const IntegralResult J = singular_integral_truncated(a.s, n, a.B, a.tol, opt);
    r.outputs = {{"value", tagged(J.value, kQuadrature)},
                 {"half_box_value", tagged(J.half_value, kQuadrature)},
                 {"tail_estimate", tagged(J.truncation_estimate, kQuadrature)},
                 {"axis_nodes", J.axis_nodes}};
    r.methods = {kQuadrature};
    rep.table.push_back({"integral over [-B,B]^3", fmt(J.value), kQuadrature});
    rep.table.push_back({"integral over [-B/2,B/2]^3", fmt(J.half_value), kQuadrature});
    rep.table.push_back({"tail estimate", fmt(J.truncation_estimate, 4), kQuadrature});
    if (a.eps > 0) {
        r.inputs["eps"] = a.eps;
        const IntegralResult S = singular_integral_smoothed(a.s, n, a.eps, a.B, a.tol, opt);
        r.outputs["smoothed"] = tagged(S.value, kQuadrature);
        rep.table.push_back({"eps-smoothed integral", fmt(S.value), kQuadrature});
    }
    if (a.oracle_samples > 0) {
        r.inputs["oracle_samples"] = a.oracle_samples;
        r.inputs["seed"] = g.seed;
        const OracleResult mc = real_density_oracle(a.s, n, a.eps, a.oracle_samples, g.seed);
        r.outputs["oracle"] = tagged(mc.estimate, kMonteCarlo);
        r.outputs["oracle_standard_error"] = tagged(mc.standard_error, kMonteCarlo);
        r.methods.push_back(kMonteCarlo);
        rep.table.push_back({"Monte Carlo density", fmt(mc.estimate) + " +- " + fmt(mc.standard_error, 3), kMonteCarlo});
        rep.notes.push_back("seed " + std::to_string(g.seed));
    }
    if (g.timing) r.elapsed = clock.seconds();
    rep.records.push_back(r);
    return rep;
}

// ---- cache ----

Report run_cache(bool clear, const Global& g) {
    TableCache cache(g.cache_dir.empty() ? TableCache::default_dir() : std::filesystem::path(g.cache_dir));
    Report rep;
    ResultRecord r;
    r.command = clear ? "cache clear" : "cache inspect";
    r.inputs = {{"dir", cache.dir().string()}};
    if (clear) {
        const std::size_t removed = cache.clear();
        r.outputs = {{"removed", removed}};
        rep.notes.push_back("removed " + std::to_string(removed) + " file(s) from " + cache.dir().string());
    } else {
        Json entries = Json::array();
        rep.table.push_back({"file", "s", "X", "entries", "bytes", "status"});
        for (const auto& e : cache.inspect()) {
            entries.push_back({{"file", e.path.filename().string()},
                               {"s", e.s},
                               {"X", e.X},
                               {"entries", e.entries},
                               {"bytes", e.bytes},
                               {"valid", e.valid}});
            rep.table.push_back({e.path.filename().string(), std::to_string(e.s), std::to_string(e.X),
                                 std::to_string(e.entries), std::to_string(e.bytes), e.valid ? "ok" : "corrupt"});
        }
        r.outputs = {{"entries", entries}};
        if (entries.empty()) rep.notes.push_back("no cached tables in " + cache.dir().string());
    }
    rep.records.push_back(r);
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting and circle-method diagnostics for the cubic Vinogradov system"};
    app.set_config("--config", "", "TOML/INI file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    // -h is taken by the offset option in several subcommands
    app.set_help_flag("--help", "print this help message and exit");

    Global g;
    app.add_flag("--json", g.json, "print one JSON record per line instead of a table");
    app.add_flag("--timing", g.timing, "include elapsed seconds in records");
    app.add_option("--threads", g.threads, "worker thread cap (0: all cores)");
    app.add_option("--seed", g.seed, "seed for randomized probes")->capture_default_str();
    app.add_option("--cache-dir", g.cache_dir, "table cache directory (default: $CUBICVS_CACHE_DIR or .cubicvs-cache)");
    app.add_flag("--no-cache", g.no_cache, "neither read nor write cached tables");
    app.add_option("--output", g.output, "append JSON records to this file");

    CountArgs count_args;
    auto* count = app.add_subcommand("count", "exact solution counts B_s(X;h)");
    count->add_option("--s", count_args.s, "pairs of variables")->capture_default_str();
    count->add_option("--X", count_args.X, "box sizes")->delimiter(',')->required();
    count->add_option("--h", count_args.h, "offset h1,h2,h3 (repeatable)");
    count->add_option("--h-box", count_args.h_box, "also count every h in [-R,R]^3");

    AsymptoticArgs asym_args;
    auto* asym = app.add_subcommand("asymptotic", "counts against the predicted leading term");
    asym->add_option("--s", asym_args.s)->capture_default_str();
    asym->add_option("--h", asym_args.h)->capture_default_str();
    asym->add_option("--X", asym_args.X, "ascending box sizes")->delimiter(',')->capture_default_str();
    asym->add_option("--Qmax", asym_args.qmax, "series truncation")->capture_default_str();
    asym->add_option("--B", asym_args.B, "integral box half-width")->capture_default_str();
    asym->add_option("--tol", asym_args.tol)->capture_default_str();

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_option("--only", verify_args.only, "criterion numbers or names")->delimiter(',');

    DissectArgs dissect_args;
    auto* dissect = app.add_subcommand("dissect", "W-label histogram of seeded sample points");
    dissect->add_option("--X", dissect_args.X)->capture_default_str();
    dissect->add_option("--samples", dissect_args.samples)->capture_default_str();

    WeylArgs weyl_args;
    auto* weyl = app.add_subcommand("weyl", "minor-arc sup and major-arc approximation probes");
    weyl->add_option("--X", weyl_args.X)->delimiter(',')->capture_default_str();
    weyl->add_option("--samples", weyl_args.samples)->capture_default_str();
    weyl->add_option("--Q", weyl_args.Q, "minor-arc cutoff (default X^(1/24))");

    DensityArgs density_args;
    auto* density = app.add_subcommand("density", "p-adic densities and the singular series");
    density->add_option("--p", density_args.p, "prime");
    density->add_option("--s", density_args.s)->capture_default_str();
    density->add_option("--h", density_args.h)->capture_default_str();
    density->add_option("--H", density_args.H, "p-adic level")->capture_default_str();
    density->add_option("--Qmax", density_args.qmax, "truncated singular series up to this modulus");
    density->add_option("--hensel-depth", density_args.hensel_depth, "search for a liftable solution mod p^depth");

    IntegralArgs integral_args;
    auto* integral = app.add_subcommand("integral", "truncated singular integral");
    integral->add_option("--s", integral_args.s)->capture_default_str();
    integral->add_option("--n", integral_args.n, "normalized offset n1,n2,n3")->capture_default_str();
    integral->add_option("--B", integral_args.B)->capture_default_str();
    integral->add_option("--tol", integral_args.tol)->capture_default_str();
    integral->add_option("--nodes-per-unit", integral_args.nodes_per_unit)->capture_default_str();
    integral->add_option("--eps", integral_args.eps, "also the eps-smoothed integral");
    integral->add_option("--oracle-samples", integral_args.oracle_samples, "Monte Carlo check at --eps");

    auto* cache = app.add_subcommand("cache", "manage cached representation tables");
    cache->require_subcommand(1);
    auto* inspect = cache->add_subcommand("inspect", "list cached tables");
    auto* clear = cache->add_subcommand("clear", "delete cached tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        set_thread_count(g.threads);
        if (*verify) return run_verify(verify_args, g);
        Report rep;
        if (*count) rep = run_count(count_args, g);
        else if (*asym) rep = run_asymptotic(asym_args, g);
        else if (*dissect) rep = run_dissect(dissect_args, g);
        else if (*weyl) rep = run_weyl(weyl_args, g);
        else if (*density) rep = run_density(density_args, g);
        else if (*integral) rep = run_integral(integral_args, g);
        else if (*inspect) rep = run_cache(false, g);
        else if (*clear) rep = run_cache(true, g);
        emit(rep, g);
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
