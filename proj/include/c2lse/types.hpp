#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace c2lse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Eigen::Index;

/// Axis-aligned box domain S = [lower, upper] in R^d.
struct DomainBounds {
    Vector lower;
    Vector upper;

    DomainBounds() = default;
    DomainBounds(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }

    Index dim() const { return lower.size(); }
    double width(Index i) const { return upper[i] - lower[i]; }
    Vector widths() const { return upper - lower; }

    bool contains(const Vector& x) const {
        if (x.size() != lower.size()) return false;
        return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
    }

    Vector clip(Vector x) const {
        return x.cwiseMax(lower).cwiseMin(upper);
    }

    void validate() const {
        if (lower.size() == 0 || lower.size() != upper.size())
            throw std::invalid_argument("DomainBounds: lower/upper must be nonempty and equally sized");
        for (Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("DomainBounds: lower[" + std::to_string(i) +
                                            "] must be < upper[" + std::to_string(i) + "]");
    }
};

/// Raised when a linear-algebra routine fails beyond recovery (jitter exhausted etc).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace c2lse
