#include "c2lse/kernel.hpp"

namespace c2lse {

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Matern52: return "matern52";
        case KernelFamily::SquaredExponential: return "squared_exponential";
    }
    return "unknown";
}

namespace {

// Lengthscale-normalized squared distances between row sets, as one dense op:
// r2(i,j) = sum_k ((a(i,k) - b(j,k)) / ls_k)^2
Matrix scaled_sq_dist(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
    const Matrix as = a.array().rowwise() / spec.lengthscales.transpose().array();
    const Matrix bs = b.array().rowwise() / spec.lengthscales.transpose().array();
    const Vector a2 = as.rowwise().squaredNorm();
    const Vector b2 = bs.rowwise().squaredNorm();
    Matrix r2 = (-2.0 * as * bs.transpose());
    r2.colwise() += a2;
    r2.rowwise() += b2.transpose();
    // round-off can push tiny distances slightly negative
    return r2.cwiseMax(0.0);
}

Matrix apply_kernel(const KernelSpec& spec, Matrix r2) {
    for (Index j = 0; j < r2.cols(); ++j)
        for (Index i = 0; i < r2.rows(); ++i)
            r2(i, j) = detail::kernel_from_scaled_r2(spec.family, r2(i, j), spec.outputscale);
    return r2;
}

}  // namespace

Matrix kernel_matrix(const KernelSpec& spec, const Matrix& points) {
    if (points.rows() == 0) return Matrix(0, 0);
    if (points.cols() != spec.dim())
        throw std::invalid_argument("kernel_matrix: point dimension mismatch");
    Matrix k = apply_kernel(spec, scaled_sq_dist(spec, points, points));
    // exact symmetry and exact prior variance on the diagonal
    k = ((k + k.transpose()) / 2.0).eval();
    k.diagonal().setConstant(spec.outputscale);
    return k;
}

Vector kernel_cross(const KernelSpec& spec, const Matrix& points, const Vector& x) {
    if (x.size() != spec.dim())
        throw std::invalid_argument("kernel_cross: query dimension mismatch");
    Vector out(points.rows());
    for (Index i = 0; i < points.rows(); ++i) out[i] = kernel_eval(spec, points.row(i).transpose(), x);
    return out;
}

Matrix kernel_cross_matrix(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
    if (a.cols() != spec.dim() || b.cols() != spec.dim())
        throw std::invalid_argument("kernel_cross_matrix: point dimension mismatch");
    if (a.rows() == 0 || b.rows() == 0) return Matrix(a.rows(), b.rows());
    return apply_kernel(spec, scaled_sq_dist(spec, a, b));
}

}  // namespace c2lse
