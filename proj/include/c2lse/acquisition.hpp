#pragma once

#include <string>
#include <vector>

#include "c2lse/gp.hpp"

namespace c2lse {

enum class Label { Super, Sub, Unknown };

std::string to_string(Label label);

enum class AcquisitionMethod { C2LSE, Straddle, LseAmbiguity };

std::string to_string(AcquisitionMethod method);
AcquisitionMethod acquisition_method_from_string(const std::string& name);

/// Which scoring rule ranks candidate queries, plus its parameters. epsilon is
/// the exploration floor of the confidence-ratio rule; beta is the band
/// multiplier shared with classification.
struct AcquisitionSpec {
    AcquisitionMethod method = AcquisitionMethod::C2LSE;
    double epsilon = 0.1;
    double beta = 3.0;
    double straddle_kappa = 1.96;  // band width of the straddle heuristic

    void validate() const {
        if (method == AcquisitionMethod::C2LSE && !(epsilon > 0.0))
            throw std::invalid_argument("AcquisitionSpec: epsilon must be > 0");
        if (!(beta > 0.0)) throw std::invalid_argument("AcquisitionSpec: beta must be > 0");
    }
};

/// sigma / max(epsilon, |mu - h|): the uncertainty-to-margin ratio with an
/// exploration floor. Nonnegative, bounded above by sigma / epsilon.
double c2lse_score(double mean, double stddev, double h, double epsilon);

/// Classification confidence |P(f > h) - P(f < h)| = 2 Phi(|mu - h| / sigma) - 1.
/// A point-mass posterior (stddev == 0) is certain: returns 1.
double confidence_score(double mean, double stddev, double h);

/// kappa * sigma - |mu - h| (straddle heuristic).
double straddle_score(double mean, double stddev, double h, double kappa = 1.96);

/// min(ucb - h, h - lcb) with ucb/lcb = mu +/- beta * sigma; positive exactly
/// when h lies inside the beta-band.
double lse_ambiguity_score(double mean, double stddev, double h, double beta);

/// Dispatch on the configured method.
double acquisition_score(const AcquisitionSpec& spec, double mean, double stddev, double h);

/// Band rule: Super if mu - beta*sigma > h, Sub if mu + beta*sigma < h,
/// Unknown otherwise (boundary equality is Unknown).
Label classify_point(double mean, double stddev, double h, double beta);

/// Elementwise classification of a point set under the posterior.
std::vector<Label> classify_set(const GPosterior& gp, const Matrix& points, double h, double beta);

}  // namespace c2lse
