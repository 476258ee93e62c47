#pragma once

// Rotationally symmetric metrics dr^2 + f(r)^2 g_{S^{n-1}} on [0, L].

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isoprofile/constants.hpp"
#include "isoprofile/error.hpp"
#include "isoprofile/numerics.hpp"
#include "isoprofile/parallel.hpp"
#include "isoprofile/profile.hpp"
#include "isoprofile/spaceform.hpp"

namespace isoprofile {

struct WarpSample {
    double f;
    double fp;
    double fpp;
};

using WarpFunction = std::function<WarpSample(double)>;

/// closed_sphere: f vanishes at both ends (two poles).
/// ball: f vanishes only at r = 0; r = L is a boundary sphere.
enum class Topology { closed_sphere, ball };

enum class Pole { origin, far_end };

class WarpedMetric {
public:
    static constexpr double closed_form_closure_tol = 1e-8;
    static constexpr double sampled_closure_tol = 1e-5;

    WarpedMetric(int n, double length, WarpFunction warp, Topology topology, std::string name,
                 double closure_tol = closed_form_closure_tol, std::size_t panels = 256)
        : state_(std::make_shared<State>()) {
        if (n < 2) throw InvalidMetricError("WarpedMetric: dimension must be >= 2");
        if (!(length > 0.0) || !std::isfinite(length))
            throw InvalidMetricError("WarpedMetric: radial extent must be positive");
        if (panels < 1) throw InvalidMetricError("WarpedMetric: need at least one panel");
        State& s = *state_;
        s.n = n;
        s.length = length;
        s.warp = std::move(warp);
        s.topology = topology;
        s.name = std::move(name);
        s.closure_tol = closure_tol;
        s.omega = unit_sphere_area(n - 1);
        validate();
        build_tables(panels);
    }

    int dimension() const { return state_->n; }
    double length() const { return state_->length; }
    Topology topology() const { return state_->topology; }
    const std::string& name() const { return state_->name; }
    double closure_tol() const { return state_->closure_tol; }

    WarpSample warp(double r) const { return state_->warp(r); }
    const WarpFunction& warp_function() const { return state_->warp; }

    /// Radial-geodesic length, used as the diameter of a closed sphere.
    double diameter() const { return state_->length; }

    double total_volume() const { return state_->lower.back(); }

    /// Area of the distance sphere {r}.
    double area(double r) const {
        if (r <= 0.0) return 0.0;
        if (r >= length()) return topology() == Topology::closed_sphere ? 0.0 : area_raw(length());
        return area_raw(r);
    }

    /// Volume of {r' < r}.
    double volume_below(double r) const {
        const State& s = *state_;
        if (r <= 0.0) return 0.0;
        if (r >= s.length) return s.lower.back();
        const std::size_t k = panel_of(r);
        return s.lower[k] + s.omega * integrate_density(s.nodes[k], r);
    }

    /// Volume of {r' > r}.
    double volume_above(double r) const {
        const State& s = *state_;
        if (r >= s.length) return 0.0;
        if (r <= 0.0) return s.upper.front();
        const std::size_t k = panel_of(r);
        return s.upper[k + 1] + s.omega * integrate_density(r, s.nodes[k + 1]);
    }

    /// Volume of the geodesic ball of radius rho about the chosen pole.
    double ball_volume(Pole pole, double rho) const {
        return pole == Pole::origin ? volume_below(rho) : volume_above(length() - rho);
    }

    /// Radial coordinate r with volume_below(r) = v.
    double radius_below(double v) const {
        const State& s = *state_;
        if (v <= 0.0) return 0.0;
        if (v >= s.lower.back()) return s.length;
        auto it = std::upper_bound(s.lower.begin(), s.lower.end(), v);
        std::size_t k = static_cast<std::size_t>(it - s.lower.begin()) - 1;
        k = std::min(k, s.nodes.size() - 2);
        const double base = s.lower[k];
        const double a = s.nodes[k];
        const auto excess = [&](double r) {
            return base + s.omega * integrate_density(a, r) - v;
        };
        return numerics::find_root(excess, {a, s.nodes[k + 1], 1e-15, 400});
    }

    /// Radial coordinate r with volume_above(r) = v.
    double radius_above(double v) const {
        const State& s = *state_;
        if (v <= 0.0) return s.length;
        if (v >= s.upper.front()) return 0.0;
        // upper[] decreases in k; find k with upper[k+1] <= v < upper[k].
        auto it = std::upper_bound(s.upper.rbegin(), s.upper.rend(), v);
        std::size_t k = s.upper.size() - static_cast<std::size_t>(it - s.upper.rbegin()) - 1;
        k = std::min(k, s.nodes.size() - 2);
        const double base = s.upper[k + 1];
        const double b = s.nodes[k + 1];
        const auto excess = [&](double r) {
            return base + s.omega * integrate_density(r, b) - v;
        };
        return numerics::find_root(excess, {s.nodes[k], b, 1e-15, 400});
    }

    /// Distance from the pole to the boundary of the ball of volume v.
    double ball_radius(Pole pole, double v) const {
        return pole == Pole::origin ? radius_below(v) : length() - radius_above(v);
    }

    /// The metric c*g, i.e. warp sqrt(c) f(r/sqrt(c)) on [0, sqrt(c) L].
    WarpedMetric rescaled(double c) const {
        if (!(c > 0.0)) throw DomainError("WarpedMetric::rescaled: scale must be positive");
        const double root = std::sqrt(c);
        WarpFunction base = state_->warp;
        WarpFunction scaled = [base, root](double r) {
            const WarpSample w = base(r / root);
            return WarpSample{root * w.f, w.fp, w.fpp / root};
        };
        std::ostringstream label;
        label.precision(17);
        label << name() << "*" << c;
        return WarpedMetric(dimension(), root * length(), std::move(scaled), topology(),
                            label.str(), closure_tol(), state_->nodes.size() - 1);
    }

private:
    struct State {
        int n = 0;
        double length = 0.0;
        WarpFunction warp;
        Topology topology = Topology::closed_sphere;
        std::string name;
        double closure_tol = closed_form_closure_tol;
        double omega = 0.0;
        std::vector<double> nodes;
        std::vector<double> lower;  // volume of {r < nodes[k]}
        std::vector<double> upper;  // volume of {r > nodes[k]}
    };

    double area_raw(double r) const {
        return state_->omega * std::pow(state_->warp(r).f, state_->n - 1);
    }

    double integrate_density(double a, double b) const {
        if (b <= a) return 0.0;
        const int n = state_->n;
        const WarpFunction& warp = state_->warp;
        return numerics::integrate([&](double t) { return std::pow(warp(t).f, n - 1); }, a, b);
    }

    std::size_t panel_of(double r) const {
        const State& s = *state_;
        auto it = std::upper_bound(s.nodes.begin(), s.nodes.end(), r);
        std::size_t k = static_cast<std::size_t>(it - s.nodes.begin());
        k = k == 0 ? 0 : k - 1;
        return std::min(k, s.nodes.size() - 2);
    }

    void validate() const {
        const State& s = *state_;
        const WarpSample start = s.warp(0.0);
        const WarpSample end = s.warp(s.length);
        auto fail = [&](const std::string& what) {
            throw InvalidMetricError("WarpedMetric '" + s.name + "': " + what);
        };
        if (std::abs(start.f) > s.closure_tol) fail("f(0) must vanish");
        if (std::abs(start.fp - 1.0) > s.closure_tol) fail("f'(0) must equal 1");
        if (s.topology == Topology::closed_sphere) {
            if (std::abs(end.f) > s.closure_tol) fail("f(L) must vanish on a closed sphere");
            if (std::abs(end.fp + 1.0) > s.closure_tol)
                fail("f'(L) must equal -1 on a closed sphere");
        } else if (!(end.f > 0.0)) {
            fail("f(L) must be positive on a ball");
        }
        constexpr std::size_t probes = 1024;
        for (std::size_t i = 1; i < probes; ++i) {
            const double r = s.length * static_cast<double>(i) / probes;
            const WarpSample w = s.warp(r);
            if (!(w.f > 0.0) || !std::isfinite(w.fp) || !std::isfinite(w.fpp))
                fail("f must be positive and smooth on (0, L)");
        }
    }

    void build_tables(std::size_t panels) {
        State& s = *state_;
        s.nodes = numerics::linear_grid(0.0, s.length, panels + 1);
        std::vector<double> pieces(panels);
        for (std::size_t k = 0; k < panels; ++k)
            pieces[k] = s.omega * integrate_density(s.nodes[k], s.nodes[k + 1]);
        s.lower.assign(panels + 1, 0.0);
        s.upper.assign(panels + 1, 0.0);
        for (std::size_t k = 0; k < panels; ++k) s.lower[k + 1] = s.lower[k] + pieces[k];
        for (std::size_t k = panels; k-- > 0;) s.upper[k] = s.upper[k + 1] + pieces[k];
    }

    std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Warp families

inline WarpedMetric round_sphere(int n, double radius = 1.0) {
    if (!(radius > 0.0)) throw DomainError("round_sphere: radius must be positive");
    return WarpedMetric(
        n, std::numbers::pi * radius,
        [radius](double r) {
            const double t = r / radius;
            return WarpSample{radius * std::sin(t), std::cos(t), -std::sin(t) / radius};
        },
        Topology::closed_sphere, radius == 1.0 ? "sin" : "sphere(R)");
}

/// f(r) = sin r (1 + eps sin^2 r) on [0, pi].
inline WarpedMetric perturbed_sphere(int n, double eps) {
    if (!(eps > -1.0 / 3.0)) throw DomainError("perturbed_sphere: eps must exceed -1/3");
    return WarpedMetric(
        n, std::numbers::pi,
        [eps](double r) {
            const double s = std::sin(r);
            const double c = std::cos(r);
            return WarpSample{s + eps * s * s * s, c + 3.0 * eps * s * s * c,
                              -s + eps * (6.0 * s * c * c - 3.0 * s * s * s)};
        },
        Topology::closed_sphere, "sin-perturbed");
}

/// Geodesic ball model of M_kappa: the whole sphere for kappa > 0, otherwise
/// the ball of radius `length`.
inline WarpedMetric space_form_metric(const SpaceForm& sf, double length = 1.0) {
    const double kappa = sf.curvature();
    const WarpFunction warp = [kappa](double r) {
        return WarpSample{sk(kappa, r), ck(kappa, r), -kappa * sk(kappa, r)};
    };
    if (sf.compact())
        return WarpedMetric(sf.dimension(), sf.diameter(), warp, Topology::closed_sphere,
                            "space-form");
    return WarpedMetric(sf.dimension(), length, warp, Topology::ball, "space-form-ball");
}

/// Warp tabulated at increasing radii with exact f, f', f''. Values between
/// nodes use cubic Hermite interpolation for f and f', linear for f''.
class SampledWarp {
public:
    SampledWarp(std::vector<double> r, std::vector<double> f, std::vector<double> fp,
                std::vector<double> fpp)
        : r_(std::move(r)), f_(std::move(f)), fp_(std::move(fp)), fpp_(std::move(fpp)) {
        if (r_.size() < 2 || f_.size() != r_.size() || fp_.size() != r_.size() ||
            fpp_.size() != r_.size())
            throw InvalidMetricError("SampledWarp: need >= 2 rows of equal length");
        if (r_.front() != 0.0) throw InvalidMetricError("SampledWarp: radii must start at 0");
        for (std::size_t i = 1; i < r_.size(); ++i)
            if (!(r_[i] > r_[i - 1]))
                throw InvalidMetricError("SampledWarp: radii must be strictly increasing");
    }

    double length() const { return r_.back(); }
    double f_end() const { return f_.back(); }

    WarpSample operator()(double r) const {
        if (r <= r_.front()) return {f_.front(), fp_.front(), fpp_.front()};
        if (r >= r_.back()) return {f_.back(), fp_.back(), fpp_.back()};
        auto it = std::upper_bound(r_.begin(), r_.end(), r);
        const std::size_t k = static_cast<std::size_t>(it - r_.begin()) - 1;
        const double h = r_[k + 1] - r_[k];
        const double t = (r - r_[k]) / h;
        return {hermite(f_[k], f_[k + 1], fp_[k], fp_[k + 1], h, t),
                hermite(fp_[k], fp_[k + 1], fpp_[k], fpp_[k + 1], h, t),
                (1.0 - t) * fpp_[k] + t * fpp_[k + 1]};
    }

private:
    static double hermite(double y0, double y1, double d0, double d1, double h, double t) {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * h * d1;
    }

    std::vector<double> r_, f_, fp_, fpp_;
};

/// Reads the `r,f,fp,fpp` CSV format. The topology is a closed sphere when
/// f returns to zero at the last radius, a ball otherwise.
inline WarpedMetric load_warp_csv(std::istream& in, int n, const std::string& name = "csv") {
    std::string line;
    if (!std::getline(in, line)) throw InvalidMetricError("warp CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "r,f,fp,fpp") throw InvalidMetricError("warp CSV: header must be 'r,f,fp,fpp'");

    std::vector<double> cols[4];
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 4> row{};
        std::size_t field = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (field < 4) {
            while (p < end && *p == ' ') ++p;
            auto [next, ec] = std::from_chars(p, end, row[field]);
            if (ec != std::errc{})
                throw InvalidMetricError("warp CSV: bad number on line " + std::to_string(line_no));
            p = next;
            while (p < end && *p == ' ') ++p;
            ++field;
            if (field < 4) {
                if (p == end || *p != ',')
                    throw InvalidMetricError("warp CSV: expected 4 fields on line " +
                                             std::to_string(line_no));
                ++p;
            }
        }
        if (p != end)
            throw InvalidMetricError("warp CSV: trailing data on line " + std::to_string(line_no));
        for (std::size_t j = 0; j < 4; ++j) cols[j].push_back(row[j]);
    }
    auto table = std::make_shared<const SampledWarp>(std::move(cols[0]), std::move(cols[1]),
                                                     std::move(cols[2]), std::move(cols[3]));
    const double tol = WarpedMetric::sampled_closure_tol;
    const Topology topo =
        std::abs(table->f_end()) <= tol ? Topology::closed_sphere : Topology::ball;
    return WarpedMetric(
        n, table->length(), [table](double r) { return (*table)(r); }, topo, name, tol);
}

inline WarpedMetric load_warp_csv(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw InvalidMetricError("warp CSV: cannot open '" + path + "'");
    return load_warp_csv(in, n, path);
}

// ---------------------------------------------------------------------------
// Curvature

struct RicciBoundReport {
    double kappa_star;
    double argmin_radius;
    double radial;      // -f''/f at the argmin
    double tangential;  // [-f''/f + (n-2)(1-f'^2)/f^2]/(n-1) at the argmin
};

namespace detail {

struct RicciPair {
    double radial;
    double tangential;

    double min() const { return std::min(radial, tangential); }
};

inline RicciPair ricci_pair(const WarpedMetric& m, double r) {
    const WarpSample w = m.warp(r);
    const int n = m.dimension();
    const double radial = -w.fpp / w.f;
    const double tangential = (radial + (n - 2) * (1.0 - w.fp * w.fp) / (w.f * w.f)) / (n - 1);
    return {radial, tangential};
}

// Limit of both quantities at a pole: -f'''/f' with f''' from a one-sided
// second-order difference of f''.
inline double pole_limit(const WarpedMetric& m, bool at_origin) {
    const double h = 1e-3 * m.length();
    const double r0 = at_origin ? 0.0 : m.length();
    const double dir = at_origin ? 1.0 : -1.0;
    static constexpr double weights[] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    double sum = 0.0;
    for (int k = 0; k < 5; ++k) sum += weights[k] * m.warp(r0 + dir * k * h).fpp;
    const double f3 = dir * sum / (12.0 * h);
    return -f3 / m.warp(r0).fp;
}

} // namespace detail

/// Largest kappa with Ric >= (n-1) kappa, by dense-grid minimization with
/// local refinement; poles use their limiting values.
inline RicciBoundReport ricci_lower_bound(const WarpedMetric& m, std::size_t grid_points = 4096) {
    const double L = m.length();
    RicciBoundReport best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
    auto consider = [&](double r, detail::RicciPair q) {
        if (!std::isfinite(q.radial) || !std::isfinite(q.tangential))
            throw InvalidMetricError("ricci_lower_bound: non-finite curvature at r = " +
                                     std::to_string(r));
        if (q.min() < best.kappa_star) best = {q.min(), r, q.radial, q.tangential};
    };

    const double origin = detail::pole_limit(m, true);
    consider(0.0, {origin, origin});
    if (m.topology() == Topology::closed_sphere) {
        const double far = detail::pole_limit(m, false);
        consider(L, {far, far});
    } else {
        consider(L, detail::ricci_pair(m, L));
    }
    const double h = L / static_cast<double>(grid_points);
    std::size_t argmin_index = 0;
    double grid_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double r = h * static_cast<double>(i);
        const detail::RicciPair q = detail::ricci_pair(m, r);
        consider(r, q);
        if (q.min() < grid_min) {
            grid_min = q.min();
            argmin_index = i;
        }
    }

    // Refine an interior minimum between its grid neighbours.
    if (argmin_index > 0 && best.argmin_radius > 0.0 && best.argmin_radius < L) {
        const double a = std::max(h * static_cast<double>(argmin_index - 1), 1e-3 * h);
        const double b = std::min(h * static_cast<double>(argmin_index + 1), L - 1e-3 * h);
        const auto objective = [&](double r) { return detail::ricci_pair(m, r).min(); };
        const numerics::Minimum refined = numerics::minimize_1d(objective, a, b, 1e-12);
        if (refined.value < best.kappa_star) consider(refined.argmin, detail::ricci_pair(m, refined.argmin));
    }
    return best;
}

/// Rescales a metric with positive Ricci lower bound kappa* so the bound
/// becomes exactly 1.
inline WarpedMetric normalize_curvature(const WarpedMetric& m) {
    const double kappa = ricci_lower_bound(m).kappa_star;
    if (!(kappa > 0.0))
        throw DomainError("normalize_curvature: Ricci lower bound is not positive");
    return m.rescaled(kappa);
}

/// f'/f: mean curvature of the distance sphere {r}, normalized so that the
/// derivative of the ball profile is (n-1) H.
inline double mean_curvature_sphere(const WarpedMetric& m, double r) {
    if (!(r > 0.0 && r < m.length()))
        throw SingularRadiusError("mean_curvature_sphere: radius must lie in (0, L)");
    const WarpSample w = m.warp(r);
    return w.fp / w.f;
}

// ---------------------------------------------------------------------------
// Ball profiles and rotationally invariant candidates

/// Boundary area of the geodesic ball of volume beta about the pole.
inline double ball_profile(const WarpedMetric& m, Pole pole, double beta) {
    if (!(beta > 0.0 && beta < m.total_volume()))
        throw DomainError("ball_profile: beta outside (0, |M|)");
    const double r = pole == Pole::origin ? m.radius_below(beta) : m.radius_above(beta);
    return m.area(r);
}

struct CandidateWitness {
    enum class Kind { cap_origin, cap_far_end, band };
    Kind kind;
    double r1;  // band: inner radius; caps: boundary radius
    double r2;  // band: outer radius; caps: same as r1
};

inline const char* to_string(CandidateWitness::Kind k) {
    switch (k) {
    case CandidateWitness::Kind::cap_origin:
        return "cap@0";
    case CandidateWitness::Kind::cap_far_end:
        return "cap@L";
    case CandidateWitness::Kind::band:
        return "band";
    }
    return "?";
}

struct CandidateValue {
    double value;
    CandidateWitness witness;
};

/// Least boundary area at volume beta among caps about either pole and bands
/// {r1 < r < r2}. An upper bound for h2(beta, g).
inline CandidateValue candidate_profile(const WarpedMetric& m, double beta) {
    if (m.topology() != Topology::closed_sphere)
        throw DomainError("candidate_profile: requires a closed-sphere metric");
    const double total = m.total_volume();
    if (!(beta > 0.0 && beta < total)) throw DomainError("candidate_profile: beta outside (0, |M|)");

    const double cap0_r = m.radius_below(beta);
    const double capL_r = m.radius_above(beta);
    const double cap0 = m.area(cap0_r);
    const double capL = m.area(capL_r);
    CandidateValue best = cap0 <= capL * (1.0 + 1e-12)
                              ? CandidateValue{cap0, {CandidateWitness::Kind::cap_origin, cap0_r, cap0_r}}
                              : CandidateValue{capL, {CandidateWitness::Kind::cap_far_end, capL_r, capL_r}};

    // Band {r1 < r < r2} parametrized by the volume below r1.
    const double span = total - beta;
    const auto band_area = [&](double below) {
        return m.area(m.radius_below(below)) + m.area(m.radius_below(below + beta));
    };
    constexpr int seeds = 8;
    const double tol = 1e-9 * total;
    double best_band = std::numeric_limits<double>::infinity();
    double best_below = 0.0;
    for (int k = 0; k < seeds; ++k) {
        const double a = span * k / seeds;
        const double b = span * (k + 1) / seeds;
        if (!(b - a > 4.0 * tol)) continue;
        const numerics::Minimum local = numerics::minimize_1d(band_area, a, b, tol);
        if (local.value < best_band) {
            best_band = local.value;
            best_below = local.argmin;
        }
    }
    const double margin = 1e-12 * std::max(1.0, best.value);
    if (best_band < best.value - margin) {
        best = {best_band,
                {CandidateWitness::Kind::band, m.radius_below(best_below),
                 m.radius_below(best_below + beta)}};
    }
    return best;
}

/// Candidate profile sampled on a volume grid (h2 normalization).
inline Profile candidate_h2_profile(const WarpedMetric& m, std::span<const double> grid,
                                    unsigned threads = 1) {
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), threads,
                 [&](std::size_t i) { values[i] = candidate_profile(m, grid[i]).value; });
    return Profile::sampled(Normalization::h2, m.dimension(), {0.0, m.total_volume()},
                            {grid.begin(), grid.end()}, std::move(values));
}

/// Geodesic-ball profile about the origin pole as a closed-form h2 profile:
/// slope (n-1) f'/f, curvature (n-1)(f''/f - (f'/f)^2)/area.
inline Profile ball_h2_profile(const WarpedMetric& m) {
    return Profile::closed_form(
        Normalization::h2, m.dimension(), {0.0, m.total_volume()}, [m](double beta) {
            if (!(beta > 0.0 && beta < m.total_volume()))
                throw DomainError("ball profile: beta outside (0, |M|)");
            const double r = m.radius_below(beta);
            const WarpSample w = m.warp(r);
            const int n = m.dimension();
            const double area = m.area(r);
            const double h = w.fp / w.f;
            return ProfilePoint{beta, area, (n - 1) * h, (n - 1) * (w.fpp / w.f - h * h) / area};
        });
}

// ---------------------------------------------------------------------------
// Ball comparison against the space form

struct BallComparisonEntry {
    double beta;
    double radius;        // r with |B_p(r)| = beta in g
    double radius_model;  // r_bar with |B(r_bar)| = beta in the space form
    double profile;       // I_p(beta, g)
    double profile_model; // I(beta, g_kappa)
    double volume_model;  // |B(r)| in the space form at the same radius
    double curvature;     // H(r)
    double curvature_model;  // H_bar(r)
    double profile_slack;    // I_model - I_p
    double volume_slack;     // |B_model(r)| - beta
    double curvature_slack;  // H_bar(r) - H(r)
    double increment_slack;  // -(f_i - f_{i-1}) with f = I_p - I_model; +inf at i = 0
};

struct BallComparisonFailure {
    double beta;
    std::string ingredient;  // "profile" | "volume" | "mean-curvature" | "increment"
    double lhs;
    double rhs;
};

struct BallComparisonReport {
    double kappa;
    double tol;
    std::vector<BallComparisonEntry> entries;
    std::vector<BallComparisonFailure> failures;

    bool passed() const { return failures.empty(); }

    double min_slack() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& e : entries)
            s = std::min({s, e.profile_slack, e.volume_slack, e.curvature_slack, e.increment_slack});
        return s;
    }
};

/// Checks the three ingredients of the geodesic-ball comparison on a volume
/// grid: I_p <= I_model, |B_p(r)| <= |B_model(r)|, H(r) <= H_model(r), and
/// that I_p - I_model is non-increasing.
inline BallComparisonReport ball_comparison_check(const WarpedMetric& m, double kappa,
                                                  std::span<const double> grid,
                                                  double tol = 1e-9, Pole pole = Pole::origin,
                                                  unsigned threads = 1) {
    const double kappa_star = ricci_lower_bound(m).kappa_star;
    if (kappa > kappa_star + 1e-9)
        throw DomainError("ball_comparison_check: kappa exceeds the certified Ricci bound");
    const SpaceForm model(m.dimension(), kappa);
    const double model_total = model.total_volume();

    BallComparisonReport report{kappa, tol, {}, {}};
    report.entries.resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const double beta = grid[i];
        if (!(beta > 0.0 && beta < m.total_volume()))
            throw DomainError("ball_comparison_check: grid volume outside (0, |M|)");
        BallComparisonEntry e{};
        e.beta = beta;
        e.radius = m.ball_radius(pole, beta);
        const double r_coord = pole == Pole::origin ? e.radius : m.length() - e.radius;
        e.profile = m.area(r_coord);
        const double inf = std::numeric_limits<double>::infinity();
        if (beta < model_total) {
            e.radius_model = model.ball_radius(beta);
            e.profile_model = model.ball_area(e.radius_model);
        } else {
            e.radius_model = inf;
            e.profile_model = -inf;
        }
        if (e.radius <= model.diameter()) {
            e.volume_model = model.ball_volume(e.radius);
            e.curvature_model = ck(kappa, e.radius) / sk(kappa, e.radius);
        } else {
            e.volume_model = -inf;
            e.curvature_model = -inf;
        }
        const double h = mean_curvature_sphere(m, r_coord);
        e.curvature = pole == Pole::origin ? h : -h;
        e.profile_slack = e.profile_model - e.profile;
        e.volume_slack = e.volume_model - beta;
        e.curvature_slack = e.curvature_model - e.curvature;
        e.increment_slack = inf;
        report.entries[i] = e;
    });

    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        auto& e = report.entries[i];
        if (i > 0) {
            const auto& prev = report.entries[i - 1];
            e.increment_slack = -((e.profile - e.profile_model) - (prev.profile - prev.profile_model));
        }
        if (e.profile_slack < -tol)
            report.failures.push_back({e.beta, "profile", e.profile, e.profile_model});
        if (e.volume_slack < -tol)
            report.failures.push_back({e.beta, "volume", e.beta, e.volume_model});
        if (e.curvature_slack < -tol)
            report.failures.push_back({e.beta, "mean-curvature", e.curvature, e.curvature_model});
        if (e.increment_slack < -tol)
            report.failures.push_back({e.beta, "increment", e.profile - e.profile_model,
                                       report.entries[i - 1].profile -
                                           report.entries[i - 1].profile_model});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Heintze-Karcher volume bound

/// psi0 * integral over [r0 - d, r0] of (cos t - H sin t)_+^(n-1), with kappa
/// normalized to 1. The positive part is integrated piecewise between the
/// located sign changes.
inline double hk_volume_bound(int n, double d, double psi0, double H, double r0) {
    if (n < 2) throw DomainError("hk_volume_bound: dimension must be >= 2");
    if (!(d > 0.0) || d > std::numbers::pi * (1.0 + 1e-15))
        throw DomainError("hk_volume_bound: diameter outside (0, pi]");
    const auto g = [H](double t) { return std::cos(t) - H * std::sin(t); };
    const double a = r0 - d;
    const double b = r0;

    std::vector<double> breaks{a};
    constexpr int scan = 64;
    double prev_t = a;
    double prev_g = g(a);
    for (int k = 1; k <= scan; ++k) {
        const double t = a + (b - a) * k / scan;
        const double gt = g(t);
        if (prev_g != 0.0 && gt != 0.0 && std::signbit(prev_g) != std::signbit(gt))
            breaks.push_back(numerics::find_root(g, {prev_t, t, 1e-15, 200}));
        prev_t = t;
        prev_g = gt;
    }
    breaks.push_back(b);

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = breaks[k];
        const double hi = breaks[k + 1];
        if (!(hi > lo)) continue;
        if (g(0.5 * (lo + hi)) <= 0.0) continue;
        total += numerics::integrate(
            [&](double t) { return std::pow(std::max(0.0, g(t)), n - 1); }, lo, hi);
    }
    return psi0 * total;
}

/// psi0 (1 + H^2)^((n-1)/2) lambda^1_{n,d}; dominates hk_volume_bound.
inline double hk_majorant(int n, double d, double psi0, double H) {
    return psi0 * std::pow(1.0 + H * H, 0.5 * (n - 1)) * lambda_kappa(n, 1.0, d);
}

} // namespace isoprofile
