#pragma once

#include <utility>
#include <vector>

#include "c2lse/kernel.hpp"
#include "c2lse/types.hpp"

namespace c2lse {

/// Queried points (rows) and their noisy responses.
struct ObservationSet {
    Matrix points;     // t x d
    Vector responses;  // t
    double noise_variance = 1e-4;

    Index count() const { return points.rows(); }
    Index dim() const { return points.cols(); }

    void validate() const {
        if (points.rows() != responses.size())
            throw std::invalid_argument("ObservationSet: points and responses must have equal length");
        if (!(noise_variance >= 0.0))
            throw std::invalid_argument("ObservationSet: noise_variance must be >= 0");
    }

    void append(const Vector& x, double y) {
        if (points.rows() == 0) points.resize(0, x.size());
        if (x.size() != points.cols())
            throw std::invalid_argument("ObservationSet::append: dimension mismatch");
        points.conservativeResize(points.rows() + 1, Eigen::NoChange);
        points.row(points.rows() - 1) = x.transpose();
        responses.conservativeResize(responses.size() + 1);
        responses[responses.size() - 1] = y;
    }
};

struct PosteriorValue {
    double mean;
    double variance;
};

/// Exact GP posterior with a constant prior mean. Immutable once fitted;
/// mean/variance queries are safe to run concurrently.
struct GPosterior {
    KernelSpec kernel;
    ObservationSet observations;
    double prior_mean = 0.0;
    Matrix gram_factor;   // lower Cholesky factor of K_t + sigma^2 I
    Vector alpha;         // (K_t + sigma^2 I)^{-1} (y - prior_mean)
    double jitter = 0.0;  // diagonal jitter that was needed, 0 if none

    Index count() const { return observations.count(); }
};

/// Factorize K_t + sigma^2 I and precompute the solve against the centered
/// responses. Escalates diagonal jitter 1e-10 -> 1e-6 on factorization
/// failure before raising NumericalError naming the smallest pivot.
GPosterior fit(const KernelSpec& kernel, const ObservationSet& obs, double prior_mean = 0.0);

/// Posterior mean and variance at x; variance clamped to [0, outputscale].
PosteriorValue posterior_mean_var(const GPosterior& gp, const Vector& x);

/// Posterior over many query points (rows) in one pass.
void posterior_batch(const GPosterior& gp, const Matrix& queries, Vector& means, Vector& variances);

/// log p(y | X, kernel) = -1/2 y^T (K+s2I)^-1 y - 1/2 log det(K+s2I) - t/2 log 2pi,
/// with y centered by prior_mean. Zero observations give 0 by convention.
double log_marginal_likelihood(const KernelSpec& kernel, const ObservationSet& obs,
                               double prior_mean = 0.0);

/// Realized information gain of a query sequence from the posterior variances
/// held just before each query: 1/2 sum log(1 + variance / noise_variance).
double realized_information_gain(const std::vector<double>& variances_before,
                                 double noise_variance);

/// Same quantity from the Gram matrix of the queried points:
/// 1/2 log det(I + K_T / noise_variance). Matches the sequential form when the
/// kernel is held fixed over the sequence.
double information_gain_from_gram(const KernelSpec& kernel, const Matrix& points,
                                  double noise_variance);

}  // namespace c2lse
