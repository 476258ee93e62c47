#pragma once

// Viscosity-supersolution checks for profile functions and the comparison
// statements derived from them by the maximum principle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "isoprofile/constants.hpp"
#include "isoprofile/error.hpp"
#include "isoprofile/parallel.hpp"
#include "isoprofile/profile.hpp"

namespace isoprofile {

// ---------------------------------------------------------------------------
// Inequalities. Supersolution means residual >= 0.

/// -psi'' psi >= (n-1)(kappa + (psi'/(n-1))^2)
struct SecondOrder {
    int n;
    double kappa;
};

/// psi (1 + (psi'/(n-1))^2 / kappa)^((n-1)/2) >= 1/lambda^kappa_{n,d}
struct FirstOrderPositive {
    int n;
    double kappa;
    double d;
    double lambda;
};

/// psi (1 + (psi'/(n-1))^2)^((n-1)/2) >= 1/lambda^0_{n,d}
struct FirstOrderZero {
    int n;
    double d;
    double lambda;
};

using DifferentialInequality = std::variant<SecondOrder, FirstOrderPositive, FirstOrderZero>;

inline DifferentialInequality second_order(int n, double kappa) {
    if (n < 2) throw DomainError("second_order: dimension must be >= 2");
    return SecondOrder{n, kappa};
}

/// First-order inequality for Ric >= (n-1) kappa, kappa >= 0, diameter d.
inline DifferentialInequality first_order(int n, double kappa, double d) {
    if (n < 2) throw DomainError("first_order: dimension must be >= 2");
    if (kappa > 0.0) return FirstOrderPositive{n, kappa, d, lambda_kappa(n, kappa, d)};
    if (kappa == 0.0) return FirstOrderZero{n, d, lambda0(n, d)};
    throw DomainError("first_order: kappa < 0 is not supported");
}

inline std::string describe(const DifferentialInequality& ineq) {
    struct {
        std::string operator()(const SecondOrder& q) const {
            return "second-order(n=" + std::to_string(q.n) + ")";
        }
        std::string operator()(const FirstOrderPositive& q) const {
            return "first-order-positive(n=" + std::to_string(q.n) + ")";
        }
        std::string operator()(const FirstOrderZero& q) const {
            return "first-order-zero(n=" + std::to_string(q.n) + ")";
        }
    } visitor;
    return std::visit(visitor, ineq);
}

inline bool uses_curvature(const DifferentialInequality& ineq) {
    return std::holds_alternative<SecondOrder>(ineq);
}

inline double residual_second_order(const SecondOrder& q, double psi, double p, double X) {
    if (!(psi > 0.0)) throw PositivityError("residual_second_order: psi must be positive");
    const double slope = p / (q.n - 1);
    return -X * psi - (q.n - 1) * (q.kappa + slope * slope);
}

inline double residual_first_order(const FirstOrderPositive& q, double psi, double p) {
    if (!(psi > 0.0)) throw PositivityError("residual_first_order: psi must be positive");
    const double slope = p / (q.n - 1);
    return psi * std::pow(1.0 + slope * slope / q.kappa, 0.5 * (q.n - 1)) - 1.0 / q.lambda;
}

inline double residual_first_order(const FirstOrderZero& q, double psi, double p) {
    if (!(psi > 0.0)) throw PositivityError("residual_first_order: psi must be positive");
    const double slope = p / (q.n - 1);
    return psi * std::pow(1.0 + slope * slope, 0.5 * (q.n - 1)) - 1.0 / q.lambda;
}

inline double residual(const DifferentialInequality& ineq, double psi, double p, double X) {
    struct {
        double psi, p, X;
        double operator()(const SecondOrder& q) const { return residual_second_order(q, psi, p, X); }
        double operator()(const FirstOrderPositive& q) const { return residual_first_order(q, psi, p); }
        double operator()(const FirstOrderZero& q) const { return residual_first_order(q, psi, p); }
    } visitor{psi, p, X};
    return std::visit(visitor, ineq);
}

// ---------------------------------------------------------------------------
// Subjets of sampled profiles

struct SubjetSample {
    double p;
    double X;  // largest curvature of a parabola with slope p touching from below
};

struct SubjetOptions {
    std::size_t half_width = 8;  // grid points on each side of the base point
    std::size_t slopes = 33;     // interior slope samples; endpoints are added
    double cap_factor = 2.0;     // floor = -cap_factor * max |second difference| at other nodes
};

/// Discrete second-order subjet at a grid node.
///
/// Test parabolas p t + X t^2/2 must stay below psi(beta0 + t) - psi(beta0)
/// at every window node, with curvature no lower than a floor set by the
/// discrete curvature at the other window nodes. The slope interval is the
/// one-sided chord interval, widened by the least curvature allowance that
/// makes it non-empty; the subjet is empty when that allowance exceeds the
/// floor (a concave corner).
struct Subjet {
    double beta0 = 0.0;
    std::size_t index = 0;
    bool empty = true;
    double p_lo = 0.0;
    double p_hi = 0.0;
    double curvature_allowance = 0.0;
    double curvature_floor = 0.0;
    std::vector<SubjetSample> samples;

    /// Sample with the largest admissible curvature.
    SubjetSample best() const {
        if (empty || samples.empty()) throw DomainError("Subjet::best: subjet is empty");
        return *std::max_element(samples.begin(), samples.end(),
                                 [](const SubjetSample& a, const SubjetSample& b) { return a.X < b.X; });
    }
};

inline Subjet subjet_at(const Profile& profile, std::size_t index, const SubjetOptions& opts = {}) {
    if (profile.kind() != Profile::Kind::sampled)
        throw DomainError("subjet_at: requires a sampled profile");
    const std::size_t w = opts.half_width;
    if (w < 5) throw DomainError("subjet_at: window must cover at least 5 points per side");
    if (index < w || index + w >= profile.size())
        throw OutOfRangeError("subjet_at: window does not fit inside the grid");

    const auto x = profile.betas();
    const auto y = profile.values();
    Subjet s;
    s.index = index;
    s.beta0 = x[index];
    const double y0 = y[index];

    std::vector<double> left_gap(w), left_chord(w), right_gap(w), right_chord(w);
    for (std::size_t j = 1; j <= w; ++j) {
        left_gap[j - 1] = s.beta0 - x[index - j];
        left_chord[j - 1] = (y0 - y[index - j]) / left_gap[j - 1];
        right_gap[j - 1] = x[index + j] - s.beta0;
        right_chord[j - 1] = (y[index + j] - y0) / right_gap[j - 1];
    }

    double allowance = 0.0;
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j)
            allowance = std::max(allowance, 2.0 * (left_chord[i] - right_chord[j]) /
                                                (left_gap[i] + right_gap[j]));

    // Curvature scale of the data away from the base point: a corner has
    // linear neighbours on both sides, a smooth profile does not.
    double neighbour_curvature = 0.0;
    double magnitude = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = index - w + 1; k + 1 <= index + w; ++k) {
        magnitude = std::max(magnitude, std::abs(y[k]));
        min_gap = std::min(min_gap, x[k + 1] - x[k]);
        if (k == index) continue;
        const auto fd = numerics::fd_derivatives(x, y, k);
        neighbour_curvature = std::max(neighbour_curvature, std::abs(fd.second));
    }
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max(magnitude, std::abs(y0)) / (min_gap * min_gap);
    s.curvature_floor = -(opts.cap_factor * neighbour_curvature + roundoff);
    s.curvature_allowance = allowance;

    if (allowance > -s.curvature_floor) {
        s.empty = true;
        s.p_lo = *std::max_element(left_chord.begin(), left_chord.end());
        s.p_hi = *std::min_element(right_chord.begin(), right_chord.end());
        return s;
    }

    s.empty = false;
    double p_lo = -std::numeric_limits<double>::infinity();
    double p_hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w; ++i) {
        p_lo = std::max(p_lo, left_chord[i] - 0.5 * allowance * left_gap[i]);
        p_hi = std::min(p_hi, right_chord[i] + 0.5 * allowance * right_gap[i]);
    }
    if (p_lo > p_hi) p_lo = p_hi = 0.5 * (p_lo + p_hi);
    s.p_lo = p_lo;
    s.p_hi = p_hi;

    const auto max_curvature = [&](double p) {
        double X = std::numeric_limits<double>::infinity();
        for (std::size_t k = index - w; k <= index + w; ++k) {
            if (k == index) continue;
            const double t = x[k] - s.beta0;
            X = std::min(X, 2.0 * (y[k] - y0 - p * t) / (t * t));
        }
        return X;
    };
    const std::size_t count = p_hi > p_lo ? opts.slopes + 2 : 1;
    s.samples.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double p = count == 1 ? p_lo
                                    : p_lo + (p_hi - p_lo) * static_cast<double>(k) /
                                                 static_cast<double>(count - 1);
        s.samples.push_back({p, max_curvature(p)});
    }
    return s;
}

// ---------------------------------------------------------------------------
// Supersolution check

enum class Verdict { pass, vacuous, violation };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::vacuous:
        return "vacuous";
    case Verdict::violation:
        return "violation";
    }
    return "?";
}

struct PointVerdict {
    double beta;
    Verdict verdict;
    double residual;  // worst residual over the tested (p, X); NaN when vacuous
    double p;
    double X;
};

struct SupersolutionReport {
    std::string inequality;
    double tol = 0.0;
    std::size_t half_width = 0;  // 0 for closed-form profiles
    std::vector<PointVerdict> points;
    bool global_pass = true;

    std::size_t count(Verdict v) const {
        return static_cast<std::size_t>(std::count_if(
            points.begin(), points.end(), [v](const PointVerdict& p) { return p.verdict == v; }));
    }

    double worst_residual() const {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& p : points)
            if (p.verdict != Verdict::vacuous) worst = std::min(worst, p.residual);
        return worst;
    }
};

namespace detail {

inline std::size_t node_index(const Profile& profile, double beta) {
    const auto x = profile.betas();
    auto it = std::lower_bound(x.begin(), x.end(), beta);
    if (it == x.end() || *it != beta)
        throw AlignmentError("grid point is not a node of the sampled profile");
    return static_cast<std::size_t>(it - x.begin());
}

} // namespace detail

/// Tests the inequality at every grid point. Closed-form profiles are
/// smooth, so the tested jet is (psi', psi''). Sampled profiles use the
/// discrete subjet; a point passes when the worst residual over the sampled
/// (p, X(p)) is >= -tol and is vacuous when the subjet is empty.
inline SupersolutionReport check_supersolution(const Profile& profile,
                                               const DifferentialInequality& ineq,
                                               std::span<const double> grid, double tol,
                                               const SubjetOptions& opts = {},
                                               unsigned threads = 1) {
    SupersolutionReport report;
    report.inequality = describe(ineq);
    report.tol = tol;
    report.half_width = profile.is_closed_form() ? 0 : opts.half_width;
    report.points.resize(grid.size());

    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const double beta = grid[i];
        PointVerdict v{beta, Verdict::pass, 0.0, 0.0, 0.0};
        if (profile.is_closed_form()) {
            const ProfilePoint q = profile.at(beta);
            v.p = q.slope;
            v.X = q.curvature;
            v.residual = residual(ineq, q.value, q.slope, q.curvature);
        } else {
            const std::size_t idx = detail::node_index(profile, beta);
            const double psi = profile.values()[idx];
            const Subjet jet = subjet_at(profile, idx, opts);
            if (jet.empty) {
                v.verdict = Verdict::vacuous;
                v.residual = std::numeric_limits<double>::quiet_NaN();
                report.points[i] = v;
                return;
            }
            v.residual = std::numeric_limits<double>::infinity();
            for (const auto& sample : jet.samples) {
                const double r = residual(ineq, psi, sample.p, sample.X);
                if (r < v.residual) {
                    v.residual = r;
                    v.p = sample.p;
                    v.X = sample.X;
                }
            }
        }
        v.verdict = v.residual >= -tol ? Verdict::pass : Verdict::violation;
        report.points[i] = v;
    });

    report.global_pass = report.count(Verdict::violation) == 0;
    return report;
}

/// Tests the inequality at sampled nodes using the 3-point finite-difference
/// jet in place of the subjet. Only meaningful for smooth data.
inline SupersolutionReport check_supersolution_fd(const Profile& profile,
                                                  const DifferentialInequality& ineq,
                                                  std::span<const double> grid, double tol,
                                                  unsigned threads = 1) {
    if (profile.is_closed_form())
        throw DomainError("check_supersolution_fd: requires a sampled profile");
    SupersolutionReport report;
    report.inequality = describe(ineq);
    report.tol = tol;
    report.half_width = 1;
    report.points.resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const std::size_t idx = detail::node_index(profile, grid[i]);
        const auto fd = profile.derivatives_at(idx);
        const double r = residual(ineq, profile.values()[idx], fd.first, fd.second);
        report.points[i] = {grid[i], r >= -tol ? Verdict::pass : Verdict::violation, r, fd.first,
                            fd.second};
    });
    report.global_pass = report.count(Verdict::violation) == 0;
    return report;
}

/// Nodes of a sampled profile whose subjet window fits inside the grid.
inline std::vector<double> interior_nodes(const Profile& profile, std::size_t half_width) {
    std::vector<double> nodes;
    const auto x = profile.betas();
    for (std::size_t i = half_width; i + half_width < x.size(); ++i) nodes.push_back(x[i]);
    return nodes;
}

// ---------------------------------------------------------------------------
// Comparison statements

/// h >= ref.
struct LevyGromov {};

/// h >= alpha * ref.
struct Bbg {
    double alpha;
};

/// ref <= h <= (|M_model|/|M|) ref(|M| beta / |M_model|), both h1-normalized.
struct TwoSided {
    double total_volume;
    double model_volume;
};

/// h/ref non-increasing along the grid.
struct RatioMonotone {};

using ComparisonMode = std::variant<LevyGromov, Bbg, TwoSided, RatioMonotone>;

inline const char* mode_name(const ComparisonMode& mode) {
    switch (mode.index()) {
    case 0:
        return "levy-gromov";
    case 1:
        return "bbg";
    case 2:
        return "two-sided";
    default:
        return "ratio-monotone";
    }
}

struct ComparisonEntry {
    double beta;
    double h;
    double bound;  // the bound h is compared with (lower bound, or previous ratio)
    double slack;  // >= -tol means pass
    bool pass;
};

struct ComparisonReport {
    std::string mode;
    double tol = 0.0;
    std::vector<ComparisonEntry> entries;
    bool global_pass = true;

    double min_slack() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& e : entries) s = std::min(s, e.slack);
        return s;
    }
};

namespace detail {

inline double value_on_grid(const Profile& p, double beta) {
    if (p.is_closed_form()) return p.value(beta);
    return p.values()[node_index(p, beta)];
}

} // namespace detail

/// Evaluates the chosen comparison on `grid` (defaults to the grid of a
/// sampled `h`). Sampled profiles must be sampled at every grid point.
inline ComparisonReport comparison_check(const Profile& h, const Profile& ref,
                                         const ComparisonMode& mode, double tol,
                                         std::span<const double> grid = {}) {
    if (grid.empty()) {
        if (h.is_closed_form() && ref.is_closed_form())
            throw AlignmentError("comparison_check: closed-form profiles need an explicit grid");
        grid = h.is_closed_form() ? ref.betas() : h.betas();
    }
    if (h.normalization() != ref.normalization())
        throw AlignmentError("comparison_check: profiles use different normalizations");
    if (std::holds_alternative<TwoSided>(mode)) {
        if (!ref.is_closed_form())
            throw AlignmentError("comparison_check: two-sided bound needs a closed-form reference");
        if (h.normalization() != Normalization::h1)
            throw DomainError("comparison_check: two-sided bound is stated for h1");
    }

    ComparisonReport report;
    report.mode = mode_name(mode);
    report.tol = tol;
    report.entries.reserve(grid.size());
    double prev_ratio = std::numeric_limits<double>::quiet_NaN();

    for (const double beta : grid) {
        const double hv = detail::value_on_grid(h, beta);
        const double rv = detail::value_on_grid(ref, beta);
        ComparisonEntry e{beta, hv, rv, 0.0, true};
        if (std::holds_alternative<LevyGromov>(mode)) {
            e.slack = hv - rv;
        } else if (const auto* bbg = std::get_if<Bbg>(&mode)) {
            e.bound = bbg->alpha * rv;
            e.slack = hv - e.bound;
        } else if (const auto* two = std::get_if<TwoSided>(&mode)) {
            const double scale = two->model_volume / two->total_volume;
            const double upper = scale * ref.value(beta / scale);
            e.slack = std::min(hv - rv, upper - hv);
        } else {
            const double ratio = hv / rv;
            e.h = ratio;
            e.bound = prev_ratio;
            e.slack = std::isnan(prev_ratio) ? std::numeric_limits<double>::infinity()
                                             : prev_ratio - ratio;
            prev_ratio = ratio;
        }
        e.pass = e.slack >= -tol;
        report.global_pass = report.global_pass && e.pass;
        report.entries.push_back(e);
    }
    return report;
}

} // namespace isoprofile
