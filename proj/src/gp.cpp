#include "c2lse/gp.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace c2lse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// LLT with a jitter ladder. Returns the factor and the jitter that was used.
std::pair<Matrix, double> cholesky_with_jitter(const Matrix& gram, double noise_variance) {
    Matrix a = gram;
    a.diagonal().array() += noise_variance;
    double jitter = 0.0;
    for (;;) {
        Eigen::LLT<Matrix> llt(a);
        if (llt.info() == Eigen::Success) return {Matrix(llt.matrixL()), jitter};
        jitter = (jitter == 0.0) ? 1e-10 : jitter * 10.0;
        if (jitter > 1e-6) {
            Eigen::LDLT<Matrix> ldlt(a);
            const double smallest = ldlt.vectorD().minCoeff();
            std::ostringstream msg;
            msg << "fit: Gram matrix not positive definite after jitter ladder"
                << " (smallest pivot " << smallest << ")";
            throw NumericalError(msg.str());
        }
        a = gram;
        a.diagonal().array() += noise_variance + jitter;
    }
}

}  // namespace

GPosterior fit(const KernelSpec& kernel, const ObservationSet& obs, double prior_mean) {
    kernel.validate();
    obs.validate();
    GPosterior gp;
    gp.kernel = kernel;
    gp.observations = obs;
    gp.prior_mean = prior_mean;
    if (obs.count() == 0) return gp;  // prior state
    if (obs.dim() != kernel.dim())
        throw std::invalid_argument("fit: observation dimension does not match kernel");

    const Matrix gram = kernel_matrix(kernel, obs.points);
    auto [factor, jitter] = cholesky_with_jitter(gram, obs.noise_variance);
    gp.gram_factor = std::move(factor);
    gp.jitter = jitter;

    const Vector centered = obs.responses.array() - prior_mean;
    gp.alpha = gp.gram_factor.transpose().triangularView<Eigen::Upper>().solve(
        gp.gram_factor.triangularView<Eigen::Lower>().solve(centered));
    return gp;
}

PosteriorValue posterior_mean_var(const GPosterior& gp, const Vector& x) {
    if (x.size() != gp.kernel.dim())
        throw std::invalid_argument("posterior_mean_var: query dimension mismatch");
    if (gp.count() == 0) return {gp.prior_mean, gp.kernel.outputscale};

    const Vector k = kernel_cross(gp.kernel, gp.observations.points, x);
    const double mean = gp.prior_mean + k.dot(gp.alpha);
    const Vector v = gp.gram_factor.triangularView<Eigen::Lower>().solve(k);
    double variance = gp.kernel.outputscale - v.squaredNorm();
    variance = std::min(std::max(variance, 0.0), gp.kernel.outputscale);
    return {mean, variance};
}

void posterior_batch(const GPosterior& gp, const Matrix& queries, Vector& means,
                     Vector& variances) {
    const Index n = queries.rows();
    means.resize(n);
    variances.resize(n);
    if (gp.count() == 0) {
        means.setConstant(gp.prior_mean);
        variances.setConstant(gp.kernel.outputscale);
        return;
    }
    const Matrix kx = kernel_cross_matrix(gp.kernel, gp.observations.points, queries);  // t x n
    means = (kx.transpose() * gp.alpha).array() + gp.prior_mean;
    const Matrix v = gp.gram_factor.triangularView<Eigen::Lower>().solve(kx);
    variances = (-v.colwise().squaredNorm().transpose()).array() + gp.kernel.outputscale;
    variances = variances.cwiseMax(0.0).cwiseMin(gp.kernel.outputscale);
}

double log_marginal_likelihood(const KernelSpec& kernel, const ObservationSet& obs,
                               double prior_mean) {
    obs.validate();
    const Index t = obs.count();
    if (t == 0) return 0.0;
    const GPosterior gp = fit(kernel, obs, prior_mean);
    const Vector centered = obs.responses.array() - prior_mean;
    const double quad = centered.dot(gp.alpha);
    const double logdet = 2.0 * gp.gram_factor.diagonal().array().log().sum();
    return -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(t) * std::log(kTwoPi);
}

double realized_information_gain(const std::vector<double>& variances_before,
                                 double noise_variance) {
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("realized_information_gain: noise_variance must be > 0");
    double total = 0.0;
    for (double v : variances_before) {
        if (!(v >= 0.0))
            throw std::invalid_argument("realized_information_gain: variances must be >= 0");
        total += std::log1p(v / noise_variance);
    }
    return 0.5 * total;
}

double information_gain_from_gram(const KernelSpec& kernel, const Matrix& points,
                                  double noise_variance) {
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("information_gain_from_gram: noise_variance must be > 0");
    if (points.rows() == 0) return 0.0;
    Matrix a = kernel_matrix(kernel, points) / noise_variance;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("information_gain_from_gram: factorization failed");
    return Matrix(llt.matrixL()).diagonal().array().log().sum();
}

}  // namespace c2lse
