#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isoprofile/error.hpp"
#include "isoprofile/numerics.hpp"
#include "isoprofile/parallel.hpp"

namespace isoprofile {

/// h1: boundary area over total volume, argument is the volume fraction.
/// h2: absolute boundary area, argument is the absolute volume.
enum class Normalization { h1, h2 };

inline const char* to_string(Normalization n) { return n == Normalization::h1 ? "h1" : "h2"; }

struct Interval {
    double lo;
    double hi;

    bool contains_open(double x) const { return x > lo && x < hi; }
};

/// Value and first two derivatives of a profile at one argument.
struct ProfilePoint {
    double beta;
    double value;
    double slope;
    double curvature;
};

/// A positive profile function, either closed-form (with exact derivative
/// access) or sampled on a strictly increasing grid (derivatives by finite
/// differences).
class Profile {
public:
    enum class Kind { closed_form, sampled };
    using Evaluator = std::function<ProfilePoint(double)>;

    static Profile closed_form(Normalization norm, int dimension, Interval domain,
                               Evaluator eval) {
        Profile p;
        p.kind_ = Kind::closed_form;
        p.norm_ = norm;
        p.dimension_ = dimension;
        p.domain_ = domain;
        p.eval_ = std::make_shared<const Evaluator>(std::move(eval));
        return p;
    }

    static Profile sampled(Normalization norm, int dimension, Interval domain,
                           std::vector<double> betas, std::vector<double> values) {
        if (betas.size() != values.size())
            throw AlignmentError("Profile::sampled: grid/value size mismatch");
        for (std::size_t i = 1; i < betas.size(); ++i)
            if (!(betas[i] > betas[i - 1]))
                throw DomainError("Profile::sampled: grid must be strictly increasing");
        Profile p;
        p.kind_ = Kind::sampled;
        p.norm_ = norm;
        p.dimension_ = dimension;
        p.domain_ = domain;
        p.betas_ = std::move(betas);
        p.values_ = std::move(values);
        return p;
    }

    Kind kind() const { return kind_; }
    bool is_closed_form() const { return kind_ == Kind::closed_form; }
    Normalization normalization() const { return norm_; }
    int dimension() const { return dimension_; }
    Interval domain() const { return domain_; }

    std::span<const double> betas() const { return betas_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return betas_.size(); }

    /// Closed-form evaluation with derivatives.
    ProfilePoint at(double beta) const {
        require_closed_form("at");
        return (*eval_)(beta);
    }

    /// Profile value. Sampled profiles interpolate linearly between nodes
    /// and reject arguments outside the sampled range.
    double value(double beta) const {
        if (kind_ == Kind::closed_form) return (*eval_)(beta).value;
        if (betas_.empty() || beta < betas_.front() || beta > betas_.back())
            throw DomainError("Profile::value: argument outside sampled range");
        auto it = std::lower_bound(betas_.begin(), betas_.end(), beta);
        const auto i = static_cast<std::size_t>(it - betas_.begin());
        if (betas_[i] == beta) return values_[i];
        const double t = (beta - betas_[i - 1]) / (betas_[i] - betas_[i - 1]);
        return (1.0 - t) * values_[i - 1] + t * values_[i];
    }

    /// Finite-difference derivatives at an interior node of a sampled profile.
    numerics::FdDerivatives derivatives_at(std::size_t index) const {
        if (kind_ != Kind::sampled)
            throw DomainError("Profile::derivatives_at: profile is not sampled");
        return numerics::fd_derivatives(betas_, values_, index);
    }

    /// Tabulate a closed-form profile on `grid`.
    Profile sample(std::span<const double> grid, unsigned threads = 1) const {
        require_closed_form("sample");
        std::vector<double> values(grid.size());
        parallel_for(grid.size(), threads,
                     [&](std::size_t i) { values[i] = (*eval_)(grid[i]).value; });
        return sampled(norm_, dimension_, domain_, {grid.begin(), grid.end()},
                       std::move(values));
    }

private:
    void require_closed_form(const char* what) const {
        if (kind_ != Kind::closed_form)
            throw DomainError(std::string("Profile::") + what + ": profile is not closed-form");
    }

    Kind kind_ = Kind::sampled;
    Normalization norm_ = Normalization::h1;
    int dimension_ = 0;
    Interval domain_{0.0, 0.0};
    std::shared_ptr<const Evaluator> eval_;
    std::vector<double> betas_;
    std::vector<double> values_;
};

} // namespace isoprofile
