#include "c2lse/problems.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "c2lse/csv.hpp"

namespace c2lse {

Index TabularOracle::lookup(const Vector& x) const {
    Index nearest = -1;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < points.rows(); ++i) {
        const double inf_dist = (points.row(i).transpose() - x).cwiseAbs().maxCoeff();
        if (inf_dist <= tolerance) return i;
        const double dist = (points.row(i).transpose() - x).norm();
        if (dist < nearest_dist) {
            nearest_dist = dist;
            nearest = i;
        }
    }
    std::ostringstream msg;
    msg << "tabular lookup miss for point (";
    for (Index j = 0; j < x.size(); ++j) msg << (j ? ", " : "") << x[j];
    msg << "); nearest stored point is (";
    if (nearest >= 0)
        for (Index j = 0; j < points.cols(); ++j) msg << (j ? ", " : "") << points(nearest, j);
    msg << ") at distance " << nearest_dist;
    throw std::runtime_error(msg.str());
}

double LevelSetProblem::evaluate_noiseless(const Vector& x) const {
    if (tabular) return tabular->values[tabular->lookup(x)];
    if (!analytic) throw std::logic_error("LevelSetProblem: no oracle configured");
    return analytic(x);
}

double mc2d_eval(const Vector& x) {
    if (x.size() != 2) throw std::invalid_argument("mc2d_eval: expects a 2-vector");
    const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
    return std::exp(s1 * s1 * s2 * s2);
}

double mc3d_eval(const Vector& x) {
    if (x.size() != 3) throw std::invalid_argument("mc3d_eval: expects a 3-vector");
    const double s1 = std::sin(x[0]), s2 = std::sin(x[1]), s3 = std::sin(x[2]);
    return std::exp(s1 * s1 * s2 * s2 * s3 * s3);
}

double sin2d_eval(const Vector& x) {
    if (x.size() != 2) throw std::invalid_argument("sin2d_eval: expects a 2-vector");
    return std::sin(10.0 * x[0]) + std::cos(4.0 * x[1]) - std::cos(3.0 * x[0] * x[1]);
}

LevelSetProblem make_problem(const std::string& name, double noise_variance) {
    LevelSetProblem p;
    p.name = name;
    p.noise_variance = noise_variance;
    if (name == "mc2d") {
        p.bounds = DomainBounds(Vector::Zero(2), Vector::Constant(2, 9.0));
        p.threshold = 2.2;
        p.analytic = mc2d_eval;
        p.truth_grid_shape = {100, 100};
    } else if (name == "mc3d") {
        p.bounds = DomainBounds(Vector::Zero(3), Vector::Constant(3, 6.0));
        p.threshold = 1.6;
        p.analytic = mc3d_eval;
        p.truth_grid_shape = {30, 30, 30};
    } else if (name == "sin2d") {
        Vector hi(2);
        hi << 2.0, 3.0;
        p.bounds = DomainBounds(Vector::Zero(2), hi);
        p.threshold = 0.5;
        p.analytic = sin2d_eval;
        p.truth_grid_shape = {100, 100};
    } else {
        throw std::invalid_argument("unknown problem '" + name +
                                    "' (expected mc2d | mc3d | sin2d)");
    }
    return p;
}

Matrix uniform_grid(const DomainBounds& bounds, const std::vector<Index>& shape) {
    const Index d = bounds.dim();
    if (static_cast<Index>(shape.size()) != d)
        throw std::invalid_argument("uniform_grid: shape rank does not match domain dimension");
    Index total = 1;
    for (Index n : shape) {
        if (n < 1) throw std::invalid_argument("uniform_grid: counts must be >= 1");
        total *= n;
    }
    Matrix grid(total, d);
    std::vector<Index> idx(shape.size(), 0);
    for (Index r = 0; r < total; ++r) {
        for (Index j = 0; j < d; ++j) {
            const Index n = shape[static_cast<std::size_t>(j)];
            // single-point axes sit at the lower bound
            const double frac = (n == 1) ? 0.0
                                         : static_cast<double>(idx[static_cast<std::size_t>(j)]) /
                                               static_cast<double>(n - 1);
            grid(r, j) = bounds.lower[j] + frac * bounds.width(j);
        }
        // row-major: last dimension fastest
        for (Index j = d - 1; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < shape[static_cast<std::size_t>(j)]) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
    }
    return grid;
}

GroundTruth build_ground_truth(const LevelSetProblem& problem) {
    GroundTruth truth;
    if (problem.is_tabular() && problem.truth_grid_shape.empty()) {
        truth.points = problem.tabular->points;
        truth.values = problem.tabular->values;
    } else {
        truth.points = uniform_grid(problem.bounds, problem.truth_grid_shape);
        truth.values.resize(truth.points.rows());
        if (problem.is_tabular()) {
            std::vector<std::string> gaps;
            for (Index i = 0; i < truth.points.rows(); ++i) {
                try {
                    truth.values[i] = problem.evaluate_noiseless(truth.points.row(i).transpose());
                } catch (const std::runtime_error&) {
                    if (gaps.size() < 10) {
                        std::ostringstream pt;
                        pt << "(";
                        for (Index j = 0; j < truth.points.cols(); ++j)
                            pt << (j ? ", " : "") << truth.points(i, j);
                        pt << ")";
                        gaps.push_back(pt.str());
                    } else {
                        gaps.push_back("...");
                        break;
                    }
                }
            }
            if (!gaps.empty()) {
                std::string msg = "build_ground_truth: tabular oracle is missing grid points:";
                for (const auto& g : gaps) msg += " " + g;
                throw std::runtime_error(msg);
            }
        } else {
            for (Index i = 0; i < truth.points.rows(); ++i)
                truth.values[i] = problem.analytic(truth.points.row(i).transpose());
        }
    }
    truth.labels.resize(static_cast<std::size_t>(truth.count()));
    for (Index i = 0; i < truth.count(); ++i)
        truth.labels[static_cast<std::size_t>(i)] =
            truth.values[i] > problem.threshold ? Label::Super : Label::Sub;
    return truth;
}

Index GroundTruth::count_super() const {
    Index n = 0;
    for (Label l : labels) n += (l == Label::Super) ? 1 : 0;
    return n;
}

double observe(const LevelSetProblem& problem, const Vector& x, Rng& rng) {
    if (!problem.is_tabular() && !problem.bounds.contains(x))
        throw std::invalid_argument("observe: point lies outside the domain box");
    const double f = problem.evaluate_noiseless(x);
    if (problem.noise_variance == 0.0) return f;
    return f + std::sqrt(problem.noise_variance) * normal01(rng);
}

LevelSetProblem load_tabular_dataset(const std::string& path,
                                     const std::vector<std::string>& point_columns,
                                     const std::string& value_column, double threshold,
                                     double noise_variance, double tolerance) {
    if (point_columns.empty())
        throw std::invalid_argument("load_tabular_dataset: point_columns must be nonempty");
    CsvTable table = read_csv(path);

    std::vector<Index> pt_cols;
    for (const auto& name : point_columns) pt_cols.push_back(table.column_index(name));
    const Index val_col = table.column_index(value_column);

    const Index n = table.row_count();
    if (n == 0) throw std::runtime_error("load_tabular_dataset: '" + path + "' has no data rows");
    const Index d = static_cast<Index>(pt_cols.size());

    TabularOracle oracle;
    oracle.tolerance = tolerance;
    oracle.points.resize(n, d);
    oracle.values.resize(n);
    for (Index r = 0; r < n; ++r) {
        for (Index j = 0; j < d; ++j)
            oracle.points(r, j) = table.numeric(r, pt_cols[static_cast<std::size_t>(j)]);
        oracle.values[r] = table.numeric(r, val_col);
    }

    // duplicate points (within tolerance) make lookups ambiguous
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if ((oracle.points.row(i) - oracle.points.row(j)).cwiseAbs().maxCoeff() <= tolerance) {
                std::ostringstream msg;
                msg << "load_tabular_dataset: rows " << (i + 2) << " and " << (j + 2)
                    << " of '" << path << "' are duplicate points within tolerance " << tolerance;
                throw std::runtime_error(msg.str());
            }

    LevelSetProblem p;
    p.name = path;
    p.threshold = threshold;
    p.noise_variance = noise_variance;
    Vector lo = oracle.points.colwise().minCoeff();
    Vector hi = oracle.points.colwise().maxCoeff();
    for (Index j = 0; j < d; ++j)
        if (!(lo[j] < hi[j])) hi[j] = lo[j] + 1.0;  // degenerate axis: widen for a valid box
    p.bounds = DomainBounds(std::move(lo), std::move(hi));
    p.tabular = std::move(oracle);
    return p;
}

}  // namespace c2lse
