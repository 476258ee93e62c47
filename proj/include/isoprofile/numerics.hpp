#pragma once

// Shared numerical kernel: adaptive Gauss-Kronrod quadrature, Brent root
// finding and minimization, non-uniform finite differences, grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoprofile/error.hpp"

namespace isoprofile::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw DomainError("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    }
};

struct RootSpec {
    double lower = 0.0;
    double upper = 0.0;
    double tol = 1e-12;
    int max_iterations = 200;
};

struct FdDerivatives {
    double first;
    double second;
};

struct Minimum {
    double argmin;
    double value;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair, abscissae on [-1, 1].
inline constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[j] * fsum;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * fsum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Integral of f over [a, b] by globally adaptive G7/K15 bisection.
///
/// Stops once the summed error estimate is below max(abs_tol, rel_tol*|I|).
/// Throws NonConvergenceError (with the current estimate) when the
/// subdivision budget runs out first.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::priority_queue<detail::Panel> panels;
    detail::Panel first = detail::gauss_kronrod_15(f, a, b);
    double total = first.value;
    double error = first.error;
    panels.push(first);

    auto converged = [&] {
        return error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    };

    int subdivisions = 1;
    while (!converged()) {
        if (subdivisions >= spec.max_subdivisions)
            throw NonConvergenceError("integrate: subdivision budget exhausted", total);
        detail::Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NonConvergenceError("integrate: interval too small to bisect", total);
        panels.pop();
        detail::Panel left = detail::gauss_kronrod_15(f, worst.a, mid);
        detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }

    // Re-sum to shed the drift of the running updates.
    double sum = 0.0;
    while (!panels.empty()) {
        sum += panels.top().value;
        panels.pop();
    }
    return sum;
}

/// Brent's bracketed zero finder.
template <class F>
double find_root(F&& f, const RootSpec& spec) {
    if (spec.lower == spec.upper) throw BracketError("find_root: bracket endpoints coincide");
    if (!(spec.tol > 0.0)) throw DomainError("find_root: tolerance must be positive");

    double a = spec.lower;
    double b = spec.upper;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!std::isfinite(fa) || !std::isfinite(fb) || std::signbit(fa) == std::signbit(fb))
        throw BracketError("find_root: no sign change over bracket");

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < spec.max_iterations; ++iter) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * spec.tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (m > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NonConvergenceError("find_root: iteration budget exhausted", b);
}

/// Centered 3-point Lagrange derivatives at an interior grid node.
inline FdDerivatives fd_derivatives(std::span<const double> x, std::span<const double> y,
                                    std::size_t index) {
    if (x.size() != y.size()) throw AlignmentError("fd_derivatives: grid/value size mismatch");
    if (x.size() < 3) throw OutOfRangeError("fd_derivatives: need at least 3 grid points");
    if (index == 0 || index + 1 >= x.size())
        throw OutOfRangeError("fd_derivatives: index must be interior");

    const double hl = x[index] - x[index - 1];
    const double hr = x[index + 1] - x[index];
    const double ym = y[index - 1];
    const double y0 = y[index];
    const double yp = y[index + 1];

    const double first = -hr / (hl * (hl + hr)) * ym + (hr - hl) / (hl * hr) * y0 +
                         hl / (hr * (hl + hr)) * yp;
    const double second =
        2.0 * (ym / (hl * (hl + hr)) - y0 / (hl * hr) + yp / (hr * (hl + hr)));
    return {first, second};
}

/// Brent's minimizer (golden section with parabolic steps) on [a, b].
///
/// Returns a local minimizer located to within `tol`; the endpoint values are
/// compared too, so a monotone f yields the better endpoint.
template <class F>
Minimum minimize_1d(F&& f, double a, double b, double tol, int max_iterations = 500) {
    if (!(a < b)) throw DomainError("minimize_1d: requires a < b");
    if (!(tol > 0.0)) throw DomainError("minimize_1d: tolerance must be positive");

    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    constexpr double sqrt_eps = 1.4901161193847656e-08;

    double lo = a;
    double hi = b;
    double x = lo + golden * (hi - lo);
    double w = x;
    double v = x;
    double fx = f(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;

    bool converged = false;
    for (int iter = 0; iter < max_iterations; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double tol1 = sqrt_eps * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (hi - lo)) {
            converged = true;
            break;
        }
        bool golden_step = true;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (lo - x) && p < q * (hi - x)) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = x < mid ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x < mid ? hi : lo) - x;
            d = golden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            (u < x ? hi : lo) = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            (u < x ? lo : hi) = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    if (!converged) throw NonConvergenceError("minimize_1d: iteration budget exhausted", x);

    Minimum best{x, fx};
    const double fa = f(a);
    const double fb = f(b);
    if (fa < best.value) best = {a, fa};
    if (fb < best.value) best = {b, fb};
    return best;
}

/// `count` interior points of (lo, hi), clustered toward both ends.
inline std::vector<double> cosine_grid(double lo, double hi, std::size_t count) {
    std::vector<double> grid(count);
    const double denom = static_cast<double>(count + 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i + 1) / denom;
        grid[i] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(theta));
    }
    return grid;
}

/// `count` equispaced points spanning [lo, hi] inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    grid.back() = hi;
    return grid;
}

} // namespace isoprofile::numerics
