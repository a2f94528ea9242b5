#pragma once

#include <cmath>
#include <string>

#include "c2lse/types.hpp"

namespace c2lse {

enum class KernelFamily { Matern52, SquaredExponential };

std::string to_string(KernelFamily family);

/// Stationary kernel description: one lengthscale per input dimension plus a
/// signal variance (outputscale), so k(x, x) = outputscale everywhere.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52;
    Vector lengthscales;
    double outputscale = 1.0;

    Index dim() const { return lengthscales.size(); }

    void validate() const {
        if (lengthscales.size() == 0)
            throw std::invalid_argument("KernelSpec: lengthscales must be nonempty");
        if (!(lengthscales.array() > 0.0).all())
            throw std::invalid_argument("KernelSpec: all lengthscales must be > 0");
        if (!(outputscale > 0.0))
            throw std::invalid_argument("KernelSpec: outputscale must be > 0");
    }

    static KernelSpec isotropic(KernelFamily family, Index dim, double lengthscale,
                                double outputscale) {
        KernelSpec spec;
        spec.family = family;
        spec.lengthscales = Vector::Constant(dim, lengthscale);
        spec.outputscale = outputscale;
        spec.validate();
        return spec;
    }
};

namespace detail {

inline double kernel_from_scaled_r2(KernelFamily family, double r2, double outputscale) {
    switch (family) {
        case KernelFamily::Matern52: {
            const double r = std::sqrt(r2);
            const double sqrt5_r = 2.2360679774997896964091736687747 * r;
            return outputscale * (1.0 + sqrt5_r + 5.0 * r2 / 3.0) * std::exp(-sqrt5_r);
        }
        case KernelFamily::SquaredExponential:
            return outputscale * std::exp(-0.5 * r2);
    }
    return 0.0;  // unreachable
}

}  // namespace detail

/// k(a, b) for any dense vector expressions of matching dimension.
template <typename DerivedA, typename DerivedB>
double kernel_eval(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != spec.dim() || b.size() != spec.dim())
        throw std::invalid_argument("kernel_eval: point dimension " + std::to_string(a.size()) +
                                    "/" + std::to_string(b.size()) +
                                    " does not match kernel dimension " +
                                    std::to_string(spec.dim()));
    const double r2 =
        ((a.derived() - b.derived()).template cast<double>().array() / spec.lengthscales.array())
            .square()
            .sum();
    return detail::kernel_from_scaled_r2(spec.family, r2, spec.outputscale);
}

/// Gram matrix of a point set (rows are points).
Matrix kernel_matrix(const KernelSpec& spec, const Matrix& points);

/// Cross-covariance vector k_t(x) = [k(x_i, x)]_i.
Vector kernel_cross(const KernelSpec& spec, const Matrix& points, const Vector& x);

/// Cross-covariance block between two point sets, rows(a) x rows(b).
Matrix kernel_cross_matrix(const KernelSpec& spec, const Matrix& a, const Matrix& b);

}  // namespace c2lse
