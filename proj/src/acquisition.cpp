#include "c2lse/acquisition.hpp"

#include <cmath>

namespace c2lse {

namespace {

double standard_normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

}  // namespace

std::string to_string(Label label) {
    switch (label) {
        case Label::Super: return "SUPER";
        case Label::Sub: return "SUB";
        case Label::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string to_string(AcquisitionMethod method) {
    switch (method) {
        case AcquisitionMethod::C2LSE: return "c2lse";
        case AcquisitionMethod::Straddle: return "straddle";
        case AcquisitionMethod::LseAmbiguity: return "lse_ambiguity";
    }
    return "c2lse";
}

AcquisitionMethod acquisition_method_from_string(const std::string& name) {
    if (name == "c2lse") return AcquisitionMethod::C2LSE;
    if (name == "straddle") return AcquisitionMethod::Straddle;
    if (name == "lse_ambiguity") return AcquisitionMethod::LseAmbiguity;
    throw std::invalid_argument("unknown acquisition method '" + name +
                                "' (expected c2lse | straddle | lse_ambiguity)");
}

double c2lse_score(double mean, double stddev, double h, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("c2lse_score: epsilon must be > 0");
    if (!(stddev >= 0.0)) throw std::invalid_argument("c2lse_score: stddev must be >= 0");
    return stddev / std::max(epsilon, std::abs(mean - h));
}

double confidence_score(double mean, double stddev, double h) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("confidence_score: stddev must be >= 0");
    if (stddev == 0.0) return 1.0;  // degenerate certain posterior
    return 2.0 * standard_normal_cdf(std::abs(mean - h) / stddev) - 1.0;
}

double straddle_score(double mean, double stddev, double h, double kappa) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("straddle_score: stddev must be >= 0");
    return kappa * stddev - std::abs(mean - h);
}

double lse_ambiguity_score(double mean, double stddev, double h, double beta) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("lse_ambiguity_score: stddev must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("lse_ambiguity_score: beta must be > 0");
    return std::min(mean + beta * stddev - h, h - mean + beta * stddev);
}

double acquisition_score(const AcquisitionSpec& spec, double mean, double stddev, double h) {
    switch (spec.method) {
        case AcquisitionMethod::C2LSE: return c2lse_score(mean, stddev, h, spec.epsilon);
        case AcquisitionMethod::Straddle: return straddle_score(mean, stddev, h, spec.straddle_kappa);
        case AcquisitionMethod::LseAmbiguity: return lse_ambiguity_score(mean, stddev, h, spec.beta);
    }
    return 0.0;
}

Label classify_point(double mean, double stddev, double h, double beta) {
    if (!(stddev >= 0.0)) throw std::invalid_argument("classify_point: stddev must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("classify_point: beta must be > 0");
    if (mean - beta * stddev > h) return Label::Super;
    if (mean + beta * stddev < h) return Label::Sub;
    return Label::Unknown;
}

std::vector<Label> classify_set(const GPosterior& gp, const Matrix& points, double h, double beta) {
    if (points.rows() == 0) throw std::invalid_argument("classify_set: points must be nonempty");
    Vector means, variances;
    posterior_batch(gp, points, means, variances);
    std::vector<Label> labels(static_cast<std::size_t>(points.rows()));
    for (Index i = 0; i < points.rows(); ++i)
        labels[static_cast<std::size_t>(i)] =
            classify_point(means[i], std::sqrt(variances[i]), h, beta);
    return labels;
}

}  // namespace c2lse
