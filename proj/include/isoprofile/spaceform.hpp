#pragma once

// Geometry of the simply connected space forms M_kappa: geodesic balls and
// the isoperimetric profiles they realize.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "isoprofile/error.hpp"
#include "isoprofile/numerics.hpp"
#include "isoprofile/profile.hpp"

namespace isoprofile {

/// Generalized sine: sin(sqrt(k) t)/sqrt(k), t, or sinh(sqrt(-k) t)/sqrt(-k).
inline double sk(double kappa, double t) {
    if (kappa > 0.0) {
        const double root = std::sqrt(kappa);
        return std::sin(root * t) / root;
    }
    if (kappa < 0.0) {
        const double root = std::sqrt(-kappa);
        return std::sinh(root * t) / root;
    }
    return t;
}

/// Generalized cosine, the derivative of sk in t.
inline double ck(double kappa, double t) {
    if (kappa > 0.0) return std::cos(std::sqrt(kappa) * t);
    if (kappa < 0.0) return std::cosh(std::sqrt(-kappa) * t);
    return 1.0;
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
    const double half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

/// Area of the unit sphere S^m in R^{m+1}.
inline double unit_sphere_area(int m) {
    const double half = 0.5 * (m + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

class SpaceForm {
public:
    SpaceForm(int dimension, double kappa) : n_(dimension), kappa_(kappa) {
        if (dimension < 2) throw DomainError("SpaceForm: dimension must be >= 2");
        if (!std::isfinite(kappa)) throw DomainError("SpaceForm: curvature must be finite");
        total_ = compact() ? ball_volume(diameter()) : std::numeric_limits<double>::infinity();
    }

    int dimension() const { return n_; }
    double curvature() const { return kappa_; }
    bool compact() const { return kappa_ > 0.0; }

    /// pi/sqrt(kappa) for the sphere, +inf otherwise.
    double diameter() const {
        return compact() ? std::numbers::pi / std::sqrt(kappa_)
                         : std::numeric_limits<double>::infinity();
    }

    /// Area of the unit (n-1)-sphere, the angular factor of every ball.
    double angular_area() const { return unit_sphere_area(n_ - 1); }

    double ball_area(double r) const {
        check_radius(r);
        return angular_area() * std::pow(sk(kappa_, r), n_ - 1);
    }

    double ball_volume(double r, const numerics::QuadratureSpec& spec = {}) const {
        check_radius(r);
        const auto density = [this](double t) { return std::pow(sk(kappa_, t), n_ - 1); };
        return angular_area() * numerics::integrate(density, 0.0, r, spec);
    }

    /// |M_kappa|; +inf when kappa <= 0.
    double total_volume() const { return total_; }

    /// Radius of the geodesic ball of the given volume.
    double ball_radius(double volume) const {
        const double total = total_volume();
        if (!(volume > 0.0 && volume < total))
            throw DomainError("SpaceForm::ball_radius: volume outside (0, |M|)");
        if (compact() && volume > 0.5 * total) {
            // Reflect through the antipode so that both halves are resolved
            // from the nearer pole.
            return diameter() - ball_radius(total - volume);
        }
        const auto excess = [&](double r) { return r <= 0.0 ? -volume : ball_volume(r) - volume; };
        double upper = compact() ? 0.5 * diameter() : 1.0;
        if (compact()) {
            if (excess(upper) < 0.0) upper = diameter();
        } else {
            while (excess(upper) < 0.0) upper *= 2.0;
        }
        return numerics::find_root(excess, {0.0, upper, 1e-15, 400});
    }

private:
    void check_radius(double r) const {
        if (!(r > 0.0)) throw DomainError("SpaceForm: radius must be positive");
        if (compact() && r > diameter() * (1.0 + 1e-15))
            throw DomainError("SpaceForm: radius exceeds pi/sqrt(kappa)");
    }

    int n_;
    double kappa_;
    double total_;
};

/// h1 of the round sphere M_kappa (kappa > 0) at volume fraction beta.
/// The second derivative is exact: psi' = (n-1) c/s differentiated through
/// dr/dbeta = |M|/area.
inline ProfilePoint profile_h1(const SpaceForm& sf, double beta) {
    if (!sf.compact()) throw DomainError("profile_h1: requires kappa > 0 (finite volume)");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("profile_h1: beta outside (0, 1)");
    const double total = sf.total_volume();
    const double r = sf.ball_radius(beta * total);
    const double s = sk(sf.curvature(), r);
    const double c = ck(sf.curvature(), r);
    const double area = sf.ball_area(r);
    const int n = sf.dimension();
    return {beta, area / total, (n - 1) * c / s, -(n - 1) * total / (s * s * area)};
}

/// h2 of M_kappa at absolute volume beta, realized by geodesic balls.
inline ProfilePoint profile_h2(const SpaceForm& sf, double beta) {
    if (!(beta > 0.0 && beta < sf.total_volume()))
        throw DomainError("profile_h2: beta outside (0, |M|)");
    const double r = sf.ball_radius(beta);
    const double s = sk(sf.curvature(), r);
    const double c = ck(sf.curvature(), r);
    const double area = sf.ball_area(r);
    const int n = sf.dimension();
    return {beta, area, (n - 1) * c / s, -(n - 1) / (s * s * area)};
}

inline Profile h1_profile(const SpaceForm& sf) {
    if (!sf.compact()) throw DomainError("h1_profile: requires kappa > 0 (finite volume)");
    return Profile::closed_form(Normalization::h1, sf.dimension(), {0.0, 1.0},
                                [sf](double beta) { return profile_h1(sf, beta); });
}

inline Profile h2_profile(const SpaceForm& sf) {
    return Profile::closed_form(Normalization::h2, sf.dimension(), {0.0, sf.total_volume()},
                                [sf](double beta) { return profile_h2(sf, beta); });
}

/// Limit of h1(beta)/beta^((n-1)/n) as beta -> 0 on a manifold of the given
/// total volume.
inline double asymptotic_constant(int n, double total_volume) {
    if (n < 2) throw DomainError("asymptotic_constant: dimension must be >= 2");
    if (!(total_volume > 0.0)) throw DomainError("asymptotic_constant: volume must be positive");
    return n * std::pow(unit_ball_volume(n), 1.0 / n) / std::pow(total_volume, 1.0 / n);
}

/// h2 profile of the metric c*g given the h2 profile of g:
/// h2(beta, c g) = c^((n-1)/2) h2(c^(-n/2) beta, g).
inline Profile scale_profile(const Profile& p, double c) {
    if (p.normalization() != Normalization::h2)
        throw DomainError("scale_profile: requires an h2 profile");
    if (!(c > 0.0)) throw DomainError("scale_profile: scale factor must be positive");
    const int n = p.dimension();
    const double value_factor = std::pow(c, 0.5 * (n - 1));
    const double volume_factor = std::pow(c, 0.5 * n);
    const Interval dom{p.domain().lo * volume_factor, p.domain().hi * volume_factor};

    if (p.is_closed_form()) {
        return Profile::closed_form(
            Normalization::h2, n, dom, [p, c, value_factor, volume_factor](double beta) {
                const ProfilePoint q = p.at(beta / volume_factor);
                return ProfilePoint{beta, value_factor * q.value, q.slope / std::sqrt(c),
                                    q.curvature * value_factor / volume_factor / volume_factor};
            });
    }
    std::vector<double> betas(p.betas().begin(), p.betas().end());
    std::vector<double> values(p.values().begin(), p.values().end());
    for (auto& b : betas) b *= volume_factor;
    for (auto& v : values) v *= value_factor;
    return Profile::sampled(Normalization::h2, n, dom, std::move(betas), std::move(values));
}

} // namespace isoprofile
