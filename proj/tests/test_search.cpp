#include <doctest.h>

#include <cmath>
#include <set>

#include "c2lse/rng.hpp"
#include "c2lse/search.hpp"

using namespace c2lse;

namespace {

DomainBounds unit_box(Index d) { return DomainBounds(Vector::Zero(d), Vector::Ones(d)); }

}  // namespace

TEST_CASE("continuous maximization finds a concave quadratic optimum") {
    Vector c(2);
    c << 0.3, 0.7;
    const ScoreFn score = [&](const Vector& x) { return -(x - c).squaredNorm(); };
    SearchBudget budget;
    budget.seed = 42;
    const SearchResult result = maximize_continuous(score, unit_box(2), budget);
    CHECK((result.argmax - c).norm() < 1e-3);
    CHECK(result.value == doctest::Approx(score(result.argmax)));
}

TEST_CASE("constant score returns the constant at an in-bounds point") {
    const ScoreFn score = [](const Vector&) { return 3.25; };
    SearchBudget budget;
    budget.seed = 1;
    const DomainBounds box = unit_box(2);
    const SearchResult result = maximize_continuous(score, box, budget);
    CHECK(result.value == 3.25);
    CHECK(box.contains(result.argmax));
}

TEST_CASE("kinked 1-D objective still converges") {
    const ScoreFn score = [](const Vector& x) { return -std::abs(x[0] - 0.5); };
    SearchBudget budget;
    budget.seed = 7;
    const SearchResult result = maximize_continuous(score, unit_box(1), budget);
    CHECK(std::abs(result.argmax[0] - 0.5) < 1e-3);
}

TEST_CASE("non-finite probes are discarded; all non-finite raises") {
    const DomainBounds box = unit_box(1);
    SearchBudget budget;
    budget.seed = 3;
    const ScoreFn partial = [](const Vector& x) {
        return x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : x[0];
    };
    const SearchResult result = maximize_continuous(partial, box, budget);
    CHECK(result.argmax[0] >= 0.5);

    const ScoreFn always_nan = [](const Vector&) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK_THROWS_AS(maximize_continuous(always_nan, box, budget), NumericalError);
}

TEST_CASE("grid maximization is an exact scan with first-index ties") {
    Matrix candidates(2, 1);
    candidates << 0.0, 1.0;
    const ScoreFn identity = [](const Vector& x) { return x[0]; };
    const SearchResult top = maximize_on_grid(identity, candidates);
    CHECK(top.argmax[0] == 1.0);
    CHECK(top.value == 1.0);

    const ScoreFn constant = [](const Vector&) { return 7.0; };
    const SearchResult tie = maximize_on_grid(constant, candidates);
    CHECK(tie.argmax[0] == 0.0);  // first candidate wins

    CHECK_THROWS_AS(maximize_on_grid(identity, Matrix(0, 1)), std::invalid_argument);
}

TEST_CASE("grid maximization matches an independent re-scan on random candidates") {
    Rng rng(55);
    Matrix candidates(1000, 3);
    for (Index i = 0; i < candidates.rows(); ++i)
        for (Index j = 0; j < 3; ++j) candidates(i, j) = uniform(rng, -2.0, 2.0);
    const ScoreFn score = [](const Vector& x) {
        return std::sin(3.0 * x[0]) + x[1] * x[1] - std::cos(x[2]);
    };
    const SearchResult result = maximize_on_grid(score, candidates);

    double best = -1e300;
    Index best_i = -1;
    for (Index i = 0; i < candidates.rows(); ++i) {
        const double v = score(candidates.row(i).transpose());
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    CHECK(result.value == best);
    CHECK((result.argmax - candidates.row(best_i).transpose()).norm() == 0.0);
}

TEST_CASE("continuous maximization stays inside the box on random objectives") {
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 1 + static_cast<Index>(uniform01(rng) * 3);
        Vector lo = Vector::NullaryExpr(d, [&](Index) { return uniform(rng, -3.0, 0.0); });
        Vector hi = Vector::NullaryExpr(d, [&](Index) { return uniform(rng, 0.5, 3.0); });
        const DomainBounds box(lo, hi);
        const double a = uniform(rng, 0.5, 5.0);
        const double p = uniform(rng, 1.0, 6.0);
        const ScoreFn score = [a, p](const Vector& x) {
            return std::sin(a * x.sum()) + std::cos(p * x[0]);
        };
        SearchBudget budget;
        budget.seed = static_cast<std::uint64_t>(trial);
        budget.n_raw_samples = 64;
        budget.max_refine_iters = 6;
        const SearchResult result = maximize_continuous(score, box, budget);
        CHECK(box.contains(result.argmax));
        CHECK(result.value == doctest::Approx(score(result.argmax)));
    }
}

TEST_CASE("probe sequences are prefix-extendable and budget growth is monotone") {
    const DomainBounds box = unit_box(2);
    const Matrix small = quasirandom_probes(box, 64, 99);
    const Matrix large = quasirandom_probes(box, 256, 99);
    CHECK((large.topRows(64) - small).cwiseAbs().maxCoeff() == 0.0);

    const ScoreFn score = [](const Vector& x) {
        return std::sin(7.0 * x[0]) * std::cos(5.0 * x[1]);
    };
    double previous = -1e300;
    for (int n : {32, 64, 128, 256, 512}) {
        SearchBudget budget;
        budget.seed = 99;
        budget.n_raw_samples = n;
        budget.max_refine_iters = 0;  // probe scan only
        const SearchResult result = maximize_continuous(score, box, budget);
        CHECK(result.value >= previous);
        previous = result.value;
    }
}

TEST_CASE("with refinement disabled, continuous and grid modes coincide on the probes") {
    const DomainBounds box = unit_box(2);
    const ScoreFn score = [](const Vector& x) { return -(x.array() - 0.4).matrix().squaredNorm(); };
    SearchBudget budget;
    budget.seed = 12;
    budget.n_raw_samples = 128;
    budget.max_refine_iters = 0;
    const SearchResult cont = maximize_continuous(score, box, budget);
    const SearchResult grid = maximize_on_grid(score, quasirandom_probes(box, 128, 12));
    CHECK(cont.value == grid.value);
    CHECK((cont.argmax - grid.argmax).norm() == 0.0);
}

TEST_CASE("search is deterministic for a fixed seed") {
    const DomainBounds box = unit_box(3);
    const ScoreFn score = [](const Vector& x) { return std::sin(x.prod() * 9.0); };
    SearchBudget budget;
    budget.seed = 1234;
    const SearchResult a = maximize_continuous(score, box, budget);
    const SearchResult b = maximize_continuous(score, box, budget);
    CHECK(a.value == b.value);
    CHECK((a.argmax - b.argmax).norm() == 0.0);
}

TEST_CASE("latin hypercube design") {
    SUBCASE("single point is in bounds") {
        const DomainBounds box = unit_box(2);
        const Matrix design = sample_initial_design(box, 1, 5);
        CHECK(design.rows() == 1);
        CHECK(box.contains(design.row(0).transpose()));
    }
    SUBCASE("ten 1-D points occupy one decile each") {
        const Matrix design = sample_initial_design(unit_box(1), 10, 6);
        std::set<int> deciles;
        for (Index i = 0; i < 10; ++i) {
            CHECK(design(i, 0) >= 0.0);
            CHECK(design(i, 0) < 1.0);
            deciles.insert(static_cast<int>(design(i, 0) * 10.0));
        }
        CHECK(deciles.size() == 10);
    }
    SUBCASE("same seed reproduces the design") {
        const Matrix a = sample_initial_design(unit_box(3), 7, 77);
        const Matrix b = sample_initial_design(unit_box(3), 7, 77);
        CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    }
}
