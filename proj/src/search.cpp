#include "c2lse/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "c2lse/rng.hpp"

namespace c2lse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498948482;

const int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    int i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

// Golden-section maximization of a 1-D slice, returning the best point seen.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters) {
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return (f1 >= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

constexpr int kGoldenItersPerLine = 16;

}  // namespace

Matrix quasirandom_probes(const DomainBounds& bounds, int n, std::uint64_t seed) {
    const Index d = bounds.dim();
    if (d > static_cast<Index>(std::size(kHaltonPrimes)))
        throw std::invalid_argument("quasirandom_probes: dimension too large for the Halton bases");
    Rng rng(sub_seed(seed, 0x51c5));
    Vector shift(d);
    for (Index j = 0; j < d; ++j) shift[j] = uniform01(rng);

    Matrix probes(n, d);
    for (int i = 0; i < n; ++i) {
        for (Index j = 0; j < d; ++j) {
            double u = halton(i + 1, kHaltonPrimes[j]) + shift[j];
            u -= std::floor(u);  // toroidal wrap keeps the low-discrepancy structure
            probes(i, j) = bounds.lower[j] + u * bounds.width(j);
        }
    }
    return probes;
}

SearchResult maximize_on_grid(const ScoreFn& score, const Matrix& candidates) {
    if (candidates.rows() == 0)
        throw std::invalid_argument("maximize_on_grid: candidate list is empty");
    SearchResult best;
    best.value = kNegInf;
    Index best_index = -1;
    for (Index i = 0; i < candidates.rows(); ++i) {
        const double v = score(candidates.row(i).transpose());
        ++best.evaluations;
        if (std::isfinite(v) && v > best.value) {
            best.value = v;
            best_index = i;
        }
    }
    if (best_index < 0)
        throw NumericalError("maximize_on_grid: every candidate scored non-finite");
    best.argmax = candidates.row(best_index).transpose();
    return best;
}

SearchResult maximize_continuous(const ScoreFn& score, const DomainBounds& bounds,
                                 const SearchBudget& budget) {
    budget.validate();
    const Index d = bounds.dim();
    const int n_raw = budget.n_raw_samples > 0 ? budget.n_raw_samples
                                               : 512 * static_cast<int>(d);
    long evaluations = 0;

    const Matrix probes = quasirandom_probes(bounds, n_raw, budget.seed);
    std::vector<double> values(static_cast<std::size_t>(n_raw), kNegInf);
    Index best_index = -1;
    double best_value = kNegInf;
    for (int i = 0; i < n_raw; ++i) {
        const double v = score(probes.row(i).transpose());
        ++evaluations;
        if (!std::isfinite(v)) continue;  // discard this probe
        values[static_cast<std::size_t>(i)] = v;
        if (v > best_value) {
            best_value = v;
            best_index = i;
        }
    }
    if (best_index < 0)
        throw NumericalError("maximize_continuous: every probe scored non-finite");

    Vector best_point = probes.row(best_index).transpose();

    if (budget.max_refine_iters > 0) {
        // Top probes by value, ties to the lower probe index.
        std::vector<int> order(static_cast<std::size_t>(n_raw));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
        });
        const int n_restarts = std::min(budget.n_restarts, n_raw);

        for (int r = 0; r < n_restarts; ++r) {
            const int idx = order[static_cast<std::size_t>(r)];
            if (values[static_cast<std::size_t>(idx)] == kNegInf) break;
            Vector x = probes.row(idx).transpose();
            double fx = values[static_cast<std::size_t>(idx)];

            for (int sweep = 0; sweep < budget.max_refine_iters; ++sweep) {
                const double prev = fx;
                for (Index c = 0; c < d; ++c) {
                    const double radius = bounds.width(c) * std::pow(0.5, sweep + 2);
                    const double a = std::max(bounds.lower[c], x[c] - radius);
                    const double b = std::min(bounds.upper[c], x[c] + radius);
                    auto line = [&](double v) {
                        Vector probe = x;
                        probe[c] = v;
                        const double s = score(probe);
                        ++evaluations;
                        return std::isfinite(s) ? s : kNegInf;
                    };
                    auto [v, fv] = golden_max(line, a, b, kGoldenItersPerLine);
                    if (fv > fx) {
                        x[c] = v;
                        fx = fv;
                    }
                }
                if (!(fx > prev + 1e-8 * (1.0 + std::abs(prev)))) break;
            }
            // ordered reduction over restarts: strict improvement keeps the
            // earlier restart on ties, so parallel and serial agree
            if (fx > best_value) {
                best_value = fx;
                best_point = x;
            }
        }
    }

    SearchResult result;
    result.argmax = bounds.clip(best_point);
    result.value = best_value;
    result.evaluations = evaluations;
    return result;
}

Matrix sample_initial_design(const DomainBounds& bounds, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_initial_design: n must be >= 1");
    const Index d = bounds.dim();
    Rng rng(sub_seed(seed, 0x1a5));
    Matrix design(n, d);
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (Index j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        // Fisher-Yates with our own uniform so the shuffle is reproducible
        for (int i = n - 1; i > 0; --i) {
            const int k = static_cast<int>(uniform01(rng) * (i + 1));
            std::swap(strata[static_cast<std::size_t>(i)], strata[static_cast<std::size_t>(k)]);
        }
        for (int i = 0; i < n; ++i) {
            const double u = (strata[static_cast<std::size_t>(i)] + uniform01(rng)) / n;
            design(i, j) = bounds.lower[j] + u * bounds.width(j);
        }
    }
    return design;
}

}  // namespace c2lse
