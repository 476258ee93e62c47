#pragma once

// Comparison constants for the first-order (diameter-dependent) bounds.

#include <cmath>
#include <numbers>

#include "isoprofile/error.hpp"
#include "isoprofile/numerics.hpp"
#include "isoprofile/spaceform.hpp"

namespace isoprofile {

/// Integral of cos^(n-1) over [-pi/2, pi/2].
inline double gamma_n(int n) {
    if (n < 2) throw DomainError("gamma_n: dimension must be >= 2");
    const double half_pi = 0.5 * std::numbers::pi;
    return numerics::integrate([n](double t) { return std::pow(std::cos(t), n - 1); }, -half_pi,
                               half_pi);
}

/// Integral of c_kappa^(n-1) over [-d/2, d/2], for kappa > 0 and
/// 0 < d <= pi/sqrt(kappa).
inline double lambda_kappa(int n, double kappa, double d) {
    if (n < 2) throw DomainError("lambda_kappa: dimension must be >= 2");
    if (!(kappa > 0.0)) throw DomainError("lambda_kappa: requires kappa > 0");
    const double max_d = std::numbers::pi / std::sqrt(kappa);
    if (!(d > 0.0) || d > max_d * (1.0 + 1e-15))
        throw DomainError("lambda_kappa: diameter outside (0, pi/sqrt(kappa)]");
    return numerics::integrate([n, kappa](double t) { return std::pow(ck(kappa, t), n - 1); },
                               -0.5 * d, 0.5 * d);
}

/// (gamma_n / lambda^1_{n,d})^(1/n) for 0 < d <= pi.
inline double alpha(int n, double d) {
    if (!(d > 0.0) || d > std::numbers::pi * (1.0 + 1e-15))
        throw DomainError("alpha: diameter outside (0, pi]");
    return std::pow(gamma_n(n) / lambda_kappa(n, 1.0, d), 1.0 / n);
}

/// Integral of (1 + t^2)^((n-1)/2) over [0, d].
inline double lambda0(int n, double d) {
    if (n < 2) throw DomainError("lambda0: dimension must be >= 2");
    if (!(d > 0.0)) throw DomainError("lambda0: diameter must be positive");
    return numerics::integrate([n](double t) { return std::pow(1.0 + t * t, 0.5 * (n - 1)); },
                               0.0, d);
}

inline double alpha_prime(int n, double d) {
    return std::pow(gamma_n(n) / lambda0(n, d), 1.0 / n);
}

struct ComparisonConstants {
    int n;
    double kappa;
    double d;
    double gamma;
    double lambda;  // lambda^kappa_{n,d} for kappa > 0, lambda^0_{n,d} for kappa = 0
    double alpha;   // alpha(n, sqrt(kappa) d) for kappa > 0, alpha'(n, d) for kappa = 0
};

/// Constants for Ric >= (n-1) kappa and diameter d. Negative kappa has no
/// sharp first-order comparison and is rejected.
inline ComparisonConstants comparison_constants(int n, double kappa, double d) {
    if (kappa < 0.0) throw DomainError("comparison_constants: kappa < 0 is not supported");
    const double g = gamma_n(n);
    if (kappa == 0.0) {
        const double lam = lambda0(n, d);
        return {n, kappa, d, g, lam, std::pow(g / lam, 1.0 / n)};
    }
    const double lam = lambda_kappa(n, kappa, d);
    // alpha is scale invariant: sqrt(kappa) * lambda^kappa_{n,d} = lambda^1_{n, sqrt(kappa) d}.
    return {n, kappa, d, g, lam, std::pow(g / (std::sqrt(kappa) * lam), 1.0 / n)};
}

} // namespace isoprofile
