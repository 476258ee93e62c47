#pragma once

// Command-line front end: argument parsing, target construction and the
// three commands (profile, constants, verify). `run` is the whole program
// minus process setup so tests can drive it in-process.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isoprofile/isoprofile.hpp"
#include "report.hpp"

namespace isoprofile::cli {

enum ExitCode : int { ok = 0, failed = 1, usage = 2, numerical = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "levy-gromov",       "bbg",
        "morgan-johnson",    "two-sided",
        "ratio-monotone",    "supersolution-2nd",
        "supersolution-1st", "heintze-karcher"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string suite;

    std::vector<std::string> spaceform;  // key=value tokens
    std::string warp;
    std::string warp_csv;
    int n = 2;
    double eps = 0.05;
    double length = 1.0;

    bool h2 = false;
    std::size_t grid = 0;  // 0: command default
    double beta_min = std::numeric_limits<double>::quiet_NaN();
    double beta_max = std::numeric_limits<double>::quiet_NaN();
    double d = std::numeric_limits<double>::quiet_NaN();
    double kappa = 1.0;  // constants command
    double tol = std::numeric_limits<double>::quiet_NaN();
    std::string derivatives = "closed";
    std::size_t half_width = 8;
    bool assume_minimizer = false;

    std::string format = "json";
    std::string output;
    unsigned threads = 1;
};

// ---------------------------------------------------------------------------
// Targets

struct Target {
    std::optional<SpaceForm> space;
    std::optional<WarpedMetric> metric;
    double kappa = 0.0;  // space-form curvature, or certified Ricci bound of the warp
    json description;

    bool is_warp() const { return metric.has_value(); }
    int dimension() const { return space ? space->dimension() : metric->dimension(); }
    bool closed() const {
        return space ? space->compact() : metric->topology() == Topology::closed_sphere;
    }
    double total_volume() const { return space ? space->total_volume() : metric->total_volume(); }
};

inline double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError("--spaceform: value of '" + key + "' is not a number: " + text);
    return v;
}

inline SpaceForm parse_spaceform(const std::vector<std::string>& tokens) {
    std::optional<int> n;
    std::optional<double> kappa;
    for (const auto& raw : tokens) {
        std::stringstream ss(raw);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw UsageError("--spaceform: expected key=value, got " + tok);
            const std::string key = tok.substr(0, eq);
            const double v = parse_number(key, tok.substr(eq + 1));
            if (key == "n") {
                if (v != std::floor(v)) throw UsageError("--spaceform: n must be an integer");
                n = static_cast<int>(v);
            } else if (key == "kappa" || key == "k") {
                kappa = v;
            } else {
                throw UsageError("--spaceform: unknown key '" + key + "' (use n, kappa)");
            }
        }
    }
    if (!n) throw UsageError("--spaceform: missing n");
    if (*n < 2) throw UsageError("--spaceform: n must be >= 2");
    return SpaceForm(*n, kappa.value_or(1.0));
}

inline Target make_target(const RunConfig& cfg) {
    const int chosen = int(!cfg.spaceform.empty()) + int(!cfg.warp.empty()) + int(!cfg.warp_csv.empty());
    if (chosen != 1) throw UsageError("choose exactly one of --spaceform, --warp, --warp-csv");
    Target t;
    if (!cfg.spaceform.empty()) {
        t.space = parse_spaceform(cfg.spaceform);
        t.kappa = t.space->curvature();
        t.description = {{"type", "spaceform"},
                         {"n", t.space->dimension()},
                         {"kappa", t.kappa}};
        return t;
    }
    if (cfg.n < 2) throw UsageError("--n must be >= 2");
    bool normalized = false;
    if (!cfg.warp_csv.empty()) {
        t.metric = load_warp_csv(cfg.warp_csv, cfg.n);
    } else if (cfg.warp == "sin" || cfg.warp == "sphere") {
        t.metric = round_sphere(cfg.n);
    } else if (cfg.warp == "sin-perturbed") {
        t.metric = normalize_curvature(perturbed_sphere(cfg.n, cfg.eps));
        normalized = true;
    } else if (cfg.warp == "euclid") {
        t.metric = space_form_metric(SpaceForm(cfg.n, 0.0), cfg.length);
    } else if (cfg.warp == "sinh") {
        t.metric = space_form_metric(SpaceForm(cfg.n, -1.0), cfg.length);
    } else {
        throw UsageError("unknown --warp '" + cfg.warp + "' (sin, sphere, sin-perturbed, euclid, sinh)");
    }
    t.kappa = ricci_lower_bound(*t.metric).kappa_star;
    t.description = {{"type", "warp"},
                     {"name", cfg.warp_csv.empty() ? cfg.warp : "csv"},
                     {"n", cfg.n},
                     {"length", t.metric->length()},
                     {"total_volume", t.metric->total_volume()},
                     {"ricci_lower_bound", t.kappa},
                     {"normalized", normalized}};
    if (cfg.warp == "sin-perturbed") t.description["eps"] = cfg.eps;
    if (cfg.warp == "euclid" || cfg.warp == "sinh") t.description["ball_radius"] = cfg.length;
    if (!cfg.warp_csv.empty()) t.description["path"] = cfg.warp_csv;
    return t;
}

// ---------------------------------------------------------------------------
// Grids

/// Volume grid for an h2 profile on a space without finite volume: multiples
/// of beta_max/N, with beta_max defaulting to 4 unit-ball volumes.
inline std::vector<double> open_grid(const RunConfig& cfg, int n, std::size_t count) {
    const double hi = std::isnan(cfg.beta_max) ? 4.0 * unit_ball_volume(n) : cfg.beta_max;
    if (!(hi > 0.0)) throw UsageError("--beta-max must be positive");
    if (!std::isnan(cfg.beta_min)) {
        if (!(cfg.beta_min > 0.0 && cfg.beta_min < hi))
            throw UsageError("--beta-min must lie in (0, beta-max)");
        return numerics::linear_grid(cfg.beta_min, hi, count);
    }
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = hi * static_cast<double>(i + 1) / static_cast<double>(count);
    return grid;
}

/// Cosine-clustered interior points of (lo, hi), optionally narrowed by
/// --beta-min/--beta-max.
inline std::vector<double> closed_grid(const RunConfig& cfg, double lo, double hi,
                                       std::size_t count) {
    const double a = std::isnan(cfg.beta_min) ? lo : cfg.beta_min;
    const double b = std::isnan(cfg.beta_max) ? hi : cfg.beta_max;
    if (!(a >= lo && b <= hi && a < b))
        throw UsageError("--beta-min/--beta-max must lie inside the profile domain");
    return numerics::cosine_grid(a, b, count);
}

inline std::size_t grid_size(const RunConfig& cfg, std::size_t fallback) {
    const std::size_t count = cfg.grid ? cfg.grid : fallback;
    if (count < 3) throw UsageError("--grid must be at least 3");
    return count;
}

// ---------------------------------------------------------------------------
// Report skeleton

inline json base_config(const RunConfig& cfg, const Target* target) {
    json c;
    c["command"] = cfg.command;
    if (!cfg.suite.empty()) c["suite"] = cfg.suite;
    if (target) c["target"] = target->description;
    return c;
}

inline json make_report(const RunConfig& cfg, json config) {
    json r;
    r["schema"] = 1;
    r["command"] = cfg.command;
    r["config"] = std::move(config);
    r["verdicts"] = json::array();
    r["global_pass"] = true;
    r["tolerances"] = json::object();
    return r;
}

inline json row_value(double x) { return real(x); }

// ---------------------------------------------------------------------------
// profile

inline std::vector<CandidateValue> candidates(const WarpedMetric& m, std::span<const double> volumes,
                                              unsigned threads) {
    std::vector<CandidateValue> out(volumes.size());
    parallel_for(volumes.size(), threads,
                 [&](std::size_t i) { out[i] = candidate_profile(m, volumes[i]); });
    return out;
}

inline json cmd_profile(const RunConfig& cfg) {
    const Target t = make_target(cfg);
    json config = base_config(cfg, &t);
    const bool open = t.space && !t.space->compact();
    const std::size_t count = grid_size(cfg, open ? 128 : 129);
    config["grid"] = count;
    json rows = json::array();
    json columns = {"beta", "psi", "dpsi", "d2psi"};

    if (t.space) {
        const SpaceForm& sf = *t.space;
        if (!sf.compact() && !cfg.h2)
            throw UsageError("h1 needs finite volume; use --h2 for kappa <= 0");
        const bool h2 = cfg.h2;
        config["normalization"] = h2 ? "h2" : "h1";
        const Profile p = h2 ? h2_profile(sf) : h1_profile(sf);
        const std::vector<double> grid =
            sf.compact() ? closed_grid(cfg, 0.0, h2 ? sf.total_volume() : 1.0, count)
                         : open_grid(cfg, sf.dimension(), count);
        std::vector<ProfilePoint> pts(grid.size());
        parallel_for(grid.size(), cfg.threads, [&](std::size_t i) { pts[i] = p.at(grid[i]); });
        for (const auto& q : pts)
            rows.push_back({row_value(q.beta), row_value(q.value), row_value(q.slope),
                            row_value(q.curvature)});
    } else if (t.metric->topology() == Topology::ball) {
        // Geodesic balls about the centre; closed-form derivatives.
        config["normalization"] = "h2";
        config["profile"] = "ball";
        const Profile p = ball_h2_profile(*t.metric);
        const auto grid = closed_grid(cfg, 0.0, t.total_volume(), count);
        std::vector<ProfilePoint> pts(grid.size());
        parallel_for(grid.size(), cfg.threads, [&](std::size_t i) { pts[i] = p.at(grid[i]); });
        for (const auto& q : pts)
            rows.push_back({row_value(q.beta), row_value(q.value), row_value(q.slope),
                            row_value(q.curvature)});
    } else {
        config["normalization"] = "h2";
        config["profile"] = "candidate";
        const auto grid = closed_grid(cfg, 0.0, t.total_volume(), count);
        const auto cand = candidates(*t.metric, grid, cfg.threads);
        std::vector<double> values;
        for (const auto& c : cand) values.push_back(c.value);
        columns = {"beta", "psi", "dpsi", "d2psi", "witness", "r1", "r2"};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            json slope = nullptr;
            if (i > 0 && i + 1 < grid.size())
                slope = row_value(numerics::fd_derivatives(grid, values, i).first);
            rows.push_back({row_value(grid[i]), row_value(values[i]), slope, nullptr,
                            to_string(cand[i].witness.kind), row_value(cand[i].witness.r1),
                            row_value(cand[i].witness.r2)});
        }
    }
    json report = make_report(cfg, std::move(config));
    report["table"] = {{"columns", columns}, {"rows", rows}};
    return report;
}

// ---------------------------------------------------------------------------
// constants

inline json cmd_constants(const RunConfig& cfg) {
    if (cfg.n < 2) throw UsageError("--n must be >= 2");
    double d = cfg.d;
    if (std::isnan(d)) {
        if (!(cfg.kappa > 0.0)) throw UsageError("--d is required when kappa <= 0");
        d = std::numbers::pi / std::sqrt(cfg.kappa);
    }
    const ComparisonConstants k = comparison_constants(cfg.n, cfg.kappa, d);
    json config = base_config(cfg, nullptr);
    config["n"] = cfg.n;
    config["kappa"] = cfg.kappa;
    config["d"] = d;
    json report = make_report(cfg, std::move(config));
    report["table"] = {
        {"columns", {"n", "kappa", "d", "gamma", cfg.kappa > 0.0 ? "lambda" : "lambda0",
                     cfg.kappa > 0.0 ? "alpha" : "alpha_prime"}},
        {"rows", json::array({json::array({k.n, real(k.kappa), real(k.d), real(k.gamma),
                                           real(k.lambda), real(k.alpha)})})}};
    return report;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyContext {
    const RunConfig& cfg;
    const Target& target;
    json& config;
    json& verdicts;
    bool global_pass = true;
    double tol = 0.0;

    void add(double beta, bool pass, double residual, json witness, const char* verdict = nullptr) {
        json v;
        v["beta"] = real(beta);
        v["verdict"] = verdict ? verdict : (pass ? "pass" : "violation");
        v["residual"] = real(residual);
        if (!witness.is_null()) v["witness"] = std::move(witness);
        verdicts.push_back(std::move(v));
        global_pass = global_pass && pass;
    }
};

inline double default_tol(const RunConfig& cfg, double fallback) {
    return std::isnan(cfg.tol) ? fallback : cfg.tol;
}

inline void require_minimizer_flag(const VerifyContext& ctx) {
    if (ctx.target.is_warp() && !ctx.cfg.assume_minimizer)
        throw UsageError("suite '" + ctx.cfg.suite +
                         "' compares the candidate profile of a warp; it is an upper bound for "
                         "the true profile, so pass --assume-minimizer to accept it as h");
}

inline void require_closed_positive(const VerifyContext& ctx) {
    if (!ctx.target.closed())
        throw UsageError("suite '" + ctx.cfg.suite + "' needs a closed target with finite volume");
    if (!(ctx.target.kappa > 0.0))
        throw UsageError("suite '" + ctx.cfg.suite + "' needs a positive Ricci lower bound");
}

/// Candidate profile of a closed warp on a volume-fraction grid, h1 or h2.
struct SampledCandidate {
    std::vector<double> grid;
    std::vector<CandidateValue> values;
    Profile profile;
};

inline SampledCandidate sample_candidate(const VerifyContext& ctx, bool h1) {
    const WarpedMetric& m = *ctx.target.metric;
    const double total = m.total_volume();
    const auto fractions = closed_grid(ctx.cfg, 0.0, 1.0, grid_size(ctx.cfg, 256));
    std::vector<double> volumes(fractions);
    for (auto& v : volumes) v *= total;
    auto cand = candidates(m, volumes, ctx.cfg.threads);
    std::vector<double> values;
    for (const auto& c : cand) values.push_back(h1 ? c.value / total : c.value);
    const std::vector<double>& grid = h1 ? fractions : volumes;
    Profile p = Profile::sampled(h1 ? Normalization::h1 : Normalization::h2, m.dimension(),
                                 {0.0, h1 ? 1.0 : total}, grid, values);
    return {grid, std::move(cand), std::move(p)};
}

inline json candidate_witness(const CandidateValue& c) {
    return {{"kind", to_string(c.witness.kind)}, {"r1", real(c.witness.r1)}, {"r2", real(c.witness.r2)}};
}

inline void verify_supersolution(VerifyContext& ctx, bool second) {
    const Target& t = ctx.target;
    const int n = t.dimension();
    DifferentialInequality ineq = second_order(n, t.kappa);
    if (!second) {
        if (t.kappa < 0.0) throw UsageError("supersolution-1st needs kappa >= 0");
        if (!t.closed()) throw UsageError("supersolution-1st needs a closed target with finite volume");
        double d = ctx.cfg.d;
        if (std::isnan(d)) d = t.space ? t.space->diameter() : t.metric->length();
        ctx.config["d"] = d;
        ineq = first_order(n, t.kappa, d);
    }
    ctx.config["inequality"] = describe(ineq);

    if (t.is_warp()) {
        require_minimizer_flag(ctx);
        if (!t.closed()) throw UsageError("supersolution suites on warps need a closed warp");
        const bool h1 = !second || !ctx.cfg.h2;
        ctx.config["normalization"] = h1 ? "h1" : "h2";
        ctx.config["derivatives"] = "subjet";
        const auto sc = sample_candidate(ctx, h1);
        ctx.tol = default_tol(ctx.cfg, 1e-6);
        SubjetOptions opts;
        opts.half_width = ctx.cfg.half_width;
        ctx.config["half_width"] = opts.half_width;
        const auto nodes = interior_nodes(sc.profile, opts.half_width);
        const auto rep = check_supersolution(sc.profile, ineq, nodes, ctx.tol, opts, ctx.cfg.threads);
        for (const auto& pt : rep.points) {
            json w = {{"p", real(pt.p)}};
            if (second) w["X"] = real(pt.X);
            if (pt.verdict == Verdict::vacuous) w = nullptr;
            ctx.add(pt.beta, pt.verdict != Verdict::violation, pt.residual, std::move(w),
                    to_string(pt.verdict));
        }
        return;
    }

    const SpaceForm& sf = *t.space;
    const bool h1 = sf.compact() && !ctx.cfg.h2;
    if (!sf.compact() && !ctx.cfg.h2) throw UsageError("kappa <= 0 has no h1; use --h2");
    ctx.config["normalization"] = h1 ? "h1" : "h2";
    const Profile p = h1 ? h1_profile(sf) : h2_profile(sf);
    const std::vector<double> grid =
        sf.compact() ? closed_grid(ctx.cfg, 0.0, h1 ? 1.0 : sf.total_volume(), grid_size(ctx.cfg, 512))
                     : open_grid(ctx.cfg, sf.dimension(), grid_size(ctx.cfg, 512));
    const std::string& mode = ctx.cfg.derivatives;
    ctx.config["derivatives"] = mode;
    SupersolutionReport rep;
    if (mode == "closed") {
        ctx.tol = default_tol(ctx.cfg, 1e-8);
        rep = check_supersolution(p, ineq, grid, ctx.tol, {}, ctx.cfg.threads);
    } else if (mode == "fd") {
        ctx.tol = default_tol(ctx.cfg, 1e-5);
        const Profile s = p.sample(grid, ctx.cfg.threads);
        const std::vector<double> nodes(grid.begin() + 1, grid.end() - 1);
        rep = check_supersolution_fd(s, ineq, nodes, ctx.tol, ctx.cfg.threads);
    } else if (mode == "subjet") {
        ctx.tol = default_tol(ctx.cfg, 1e-6);
        SubjetOptions opts;
        opts.half_width = ctx.cfg.half_width;
        ctx.config["half_width"] = opts.half_width;
        const Profile s = p.sample(grid, ctx.cfg.threads);
        rep = check_supersolution(s, ineq, interior_nodes(s, opts.half_width), ctx.tol, opts,
                                  ctx.cfg.threads);
    } else {
        throw UsageError("--derivatives must be closed, fd or subjet");
    }
    for (const auto& pt : rep.points) {
        json w = {{"p", real(pt.p)}};
        if (second) w["X"] = real(pt.X);
        if (pt.verdict == Verdict::vacuous) w = nullptr;
        ctx.add(pt.beta, pt.verdict != Verdict::violation, pt.residual, std::move(w),
                to_string(pt.verdict));
    }
}

inline void emit_comparison(VerifyContext& ctx, const ComparisonReport& rep,
                            const std::vector<CandidateValue>* cand) {
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& e = rep.entries[i];
        json w = {{"h", real(e.h)}, {"bound", real(e.bound)}};
        if (cand) w["candidate"] = candidate_witness((*cand)[i]);
        ctx.add(e.beta, e.pass, e.slack, std::move(w));
    }
}

inline void verify_comparison(VerifyContext& ctx) {
    const Target& t = ctx.target;
    const std::string& suite = ctx.cfg.suite;
    const int n = t.dimension();
    require_closed_positive(ctx);
    require_minimizer_flag(ctx);
    ctx.tol = default_tol(ctx.cfg, 1e-6);
    const SpaceForm model(n, t.kappa);
    const bool ratio = suite == "ratio-monotone";
    ctx.config["normalization"] = ratio ? "h2" : "h1";
    ctx.config["reference"] = {{"type", "spaceform"}, {"n", n}, {"kappa", t.kappa}};

    ComparisonMode mode = LevyGromov{};
    if (suite == "bbg") {
        double d = ctx.cfg.d;
        if (std::isnan(d)) {
            d = t.space ? t.space->diameter() : t.metric->length();
            if (t.is_warp())
                ctx.config["note"] =
                    "d is the radial extent L of the warp, an upper bound for the diameter; "
                    "alpha decreases in d, so this weakens the tested inequality";
        }
        const ComparisonConstants k = comparison_constants(n, t.kappa, d);
        ctx.config["d"] = d;
        ctx.config["alpha"] = k.alpha;
        mode = Bbg{k.alpha};
    } else if (suite == "two-sided") {
        mode = TwoSided{t.total_volume(), model.total_volume()};
        ctx.config["model_volume"] = model.total_volume();
    } else if (ratio) {
        mode = RatioMonotone{};
    }
    const Profile ref = ratio ? h2_profile(model) : h1_profile(model);

    if (t.is_warp()) {
        const auto sc = sample_candidate(ctx, !ratio);
        emit_comparison(ctx, comparison_check(sc.profile, ref, mode, ctx.tol), &sc.values);
        return;
    }
    const SpaceForm& sf = *t.space;
    const Profile h = ratio ? h2_profile(sf) : h1_profile(sf);
    const auto grid = closed_grid(ctx.cfg, 0.0, ratio ? sf.total_volume() : 1.0, grid_size(ctx.cfg, 512));
    emit_comparison(ctx, comparison_check(h, ref, mode, ctx.tol, grid), nullptr);
}

inline void verify_morgan_johnson(VerifyContext& ctx) {
    const Target& t = ctx.target;
    ctx.tol = default_tol(ctx.cfg, 1e-9);
    const WarpedMetric m = t.metric ? *t.metric
                                    : space_form_metric(*t.space, ctx.cfg.length);
    const double kappa = t.metric ? t.kappa : t.space->curvature();
    ctx.config["kappa"] = kappa;
    const auto grid = closed_grid(ctx.cfg, 0.0, m.total_volume(), grid_size(ctx.cfg, 256));
    const auto rep = ball_comparison_check(m, kappa, grid, ctx.tol, Pole::origin, ctx.cfg.threads);
    for (const auto& e : rep.entries) {
        const std::pair<const char*, double> parts[] = {{"profile", e.profile_slack},
                                                        {"volume", e.volume_slack},
                                                        {"mean-curvature", e.curvature_slack},
                                                        {"increment", e.increment_slack}};
        auto worst = parts[0];
        for (const auto& p : parts)
            if (p.second < worst.second) worst = p;
        json w = {{"ingredient", worst.first},
                  {"radius", real(e.radius)},
                  {"radius_model", real(e.radius_model)},
                  {"profile", real(e.profile)},
                  {"profile_model", real(e.profile_model)}};
        ctx.add(e.beta, worst.second >= -ctx.tol, worst.second, std::move(w));
    }
}

inline void verify_heintze_karcher(VerifyContext& ctx) {
    const Target& t = ctx.target;
    require_closed_positive(ctx);
    ctx.tol = default_tol(ctx.cfg, 1e-8);
    const int n = t.dimension();
    // Curvature normalized to 1: unit sphere for space forms, the rescaled
    // metric for warps.
    const WarpedMetric m = t.metric ? t.metric->rescaled(t.kappa) : round_sphere(n);
    double d = ctx.cfg.d;
    if (std::isnan(d)) d = m.length();
    ctx.config["d"] = d;
    ctx.config["kappa"] = 1.0;
    ctx.config["caps"] = "distance spheres about the origin pole";
    const double L = m.length();
    const double total = m.total_volume();
    const auto radii = numerics::cosine_grid(0.0, L, grid_size(ctx.cfg, 64));
    std::vector<double> values(radii.size());
    parallel_for(radii.size(), ctx.cfg.threads, [&](std::size_t i) {
        const double r = radii[i];
        values[i] = hk_volume_bound(n, d, m.area(r) / total, mean_curvature_sphere(m, r), r);
    });
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        ctx.add(m.volume_below(r) / total, values[i] - 1.0 >= -ctx.tol, values[i] - 1.0,
                {{"radius", real(r)}, {"bound", real(values[i])}});
    }
}

inline json cmd_verify(const RunConfig& cfg) {
    const Target t = make_target(cfg);
    json config = base_config(cfg, &t);
    config["assume_minimizer"] = cfg.assume_minimizer;
    json verdicts = json::array();
    VerifyContext ctx{cfg, t, config, verdicts};

    const std::string& s = cfg.suite;
    if (s == "supersolution-2nd") verify_supersolution(ctx, true);
    else if (s == "supersolution-1st") verify_supersolution(ctx, false);
    else if (s == "levy-gromov" || s == "bbg" || s == "two-sided" || s == "ratio-monotone")
        verify_comparison(ctx);
    else if (s == "morgan-johnson") verify_morgan_johnson(ctx);
    else if (s == "heintze-karcher") verify_heintze_karcher(ctx);
    else throw UsageError("unknown suite " + s);

    if (cfg.grid) config["grid"] = cfg.grid;
    json report = make_report(cfg, std::move(config));
    report["verdicts"] = std::move(verdicts);
    report["global_pass"] = ctx.global_pass;
    report["tolerances"] = {{"tol", ctx.tol}};
    return report;
}

// ---------------------------------------------------------------------------
// Entry point

inline unsigned threads_from_env() {
    const char* env = std::getenv("ISO_PROFILE_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024)
        throw UsageError("ISO_PROFILE_THREADS must be an integer in [1, 1024]");
    return static_cast<unsigned>(v);
}

inline void add_target_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--spaceform", cfg.spaceform, "space form as n=<dim> kappa=<curvature>")
        ->expected(1, 2);
    sub->add_option("--warp", cfg.warp, "warp family: sin, sphere, sin-perturbed, euclid, sinh");
    sub->add_option("--warp-csv", cfg.warp_csv, "warp table with header r,f,fp,fpp");
    sub->add_option("--n", cfg.n, "dimension for warps")->capture_default_str();
    sub->add_option("--eps", cfg.eps, "perturbation for sin-perturbed (rescaled to Ric >= n-1)")
        ->capture_default_str();
    sub->add_option("--length", cfg.length, "ball radius for euclid and sinh warps")
        ->capture_default_str();
    sub->add_option("--grid", cfg.grid,
                    "grid size (profile 129, or 128 for infinite volume; verify 512 for space forms, 256 for warps, "
                    "64 caps for heintze-karcher)");
    sub->add_option("--beta-min", cfg.beta_min, "lower end of the volume grid");
    sub->add_option("--beta-max", cfg.beta_max,
                    "upper end of the volume grid (infinite volume: 4 unit-ball volumes)");
}

inline void add_output_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--output", cfg.output, "write the report here instead of stdout");
    sub->add_option("--threads", cfg.threads, "worker threads (fallback: ISO_PROFILE_THREADS)")
        ->check(CLI::Range(1u, 1024u));
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Isoperimetric profiles of space forms and warped metrics, and checks of the "
                 "comparison theorems they satisfy",
                 "isoprofile"};
    app.require_subcommand(1);

    auto* profile = app.add_subcommand("profile", "tabulate beta, psi, psi', psi''");
    add_target_options(profile, cfg);
    profile->add_flag("--h2", cfg.h2, "unnormalized profile (absolute volume)");
    add_output_options(profile, cfg);

    auto* constants = app.add_subcommand("constants", "gamma_n, lambda and alpha for (n, kappa, d)");
    constants->add_option("--n", cfg.n, "dimension")->capture_default_str();
    constants->add_option("--kappa", cfg.kappa, "Ricci lower bound / (n-1), >= 0")
        ->capture_default_str();
    constants->add_option("--d", cfg.d, "diameter (default pi/sqrt(kappa))");
    add_output_options(constants, cfg);

    auto* verify = app.add_subcommand("verify", "run a verification suite; exit 0 iff it passes");
    verify->add_option("suite", cfg.suite, "suite name")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    add_target_options(verify, cfg);
    verify->add_flag("--h2", cfg.h2, "check the h2 profile of a space form");
    verify->add_option("--d", cfg.d, "diameter for first-order suites and bbg");
    verify->add_option("--tol", cfg.tol,
                       "tolerance (closed 1e-8, fd 1e-5, subjet and comparisons 1e-6, "
                       "morgan-johnson 1e-9, heintze-karcher 1e-8)");
    verify->add_option("--derivatives", cfg.derivatives, "space forms: closed, fd or subjet")
        ->check(CLI::IsMember({"closed", "fd", "subjet"}))
        ->capture_default_str();
    verify->add_option("--window", cfg.half_width, "subjet half-width in grid points")
        ->check(CLI::Range(std::size_t{5}, std::size_t{64}))
        ->capture_default_str();
    verify->add_flag("--assume-minimizer", cfg.assume_minimizer,
                     "treat the rotationally invariant candidate as the profile of a warp");
    add_output_options(verify, cfg);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        cfg.threads = threads_from_env();
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    }

    json report;
    try {
        if (profile->parsed()) {
            cfg.command = "profile";
            report = cmd_profile(cfg);
        } else if (constants->parsed()) {
            cfg.command = "constants";
            report = cmd_constants(cfg);
        } else {
            cfg.command = "verify";
            report = cmd_verify(cfg);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return numerical;
    }

    std::ostringstream body;
    if (cfg.format == "csv") write_csv(body, report);
    else write_json(body, report);
    if (cfg.output.empty()) {
        out << body.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << cfg.output << '\n';
            return numerical;
        }
        file << body.str();
    }
    return report["global_pass"].get<bool>() ? ok : failed;
}

} // namespace isoprofile::cli
