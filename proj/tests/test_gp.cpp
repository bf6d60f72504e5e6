#include "vorgp/gp.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace vorgp;
using test_util::dense_gp_oracle;

namespace {

Vector vec1(double a) {
    Vector v(1);
    v << a;
    return v;
}

TrainingSet five_point_set() {
    Matrix x(5, 1);
    x << 0.05, 0.31, 0.52, 0.74, 0.97;
    Vector y(5);
    y << 1.2, 0.4, -0.3, 0.9, 2.1;
    return {x, y};
}

}  // namespace

TEST_CASE("corr_gaussian basics") {
    Vector x(2), z(2), b(2);
    x << 0.3, 0.7;
    z << 0.9, 0.1;
    b << 2.0, 5.0;
    CHECK(corr_gaussian(x, x, b) == doctest::Approx(1.0));
    CHECK(corr_gaussian(x, z, Vector::Zero(2)) == doctest::Approx(1.0));
    CHECK(corr_gaussian(vec1(0.0), vec1(1.0), vec1(1.0)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(corr_gaussian(x, z, b) == doctest::Approx(corr_gaussian(z, x, b)));
    CHECK_THROWS_AS(corr_gaussian(x, vec1(0.5), b), ArgumentError);
}

TEST_CASE("build_cov structure") {
    GpHyperparams hyper{vec1(1.0), 0.25};
    Matrix one(1, 1);
    one << 0.4;
    const Matrix a1 = build_cov(one, hyper);
    CHECK(a1.rows() == 1);
    CHECK(a1(0, 0) == doctest::Approx(1.25));

    Matrix two(2, 1);
    two << 0.0, 1.0;
    GpHyperparams det{vec1(1.0), 0.0};
    const Matrix a2 = build_cov(two, det);
    CHECK(a2(0, 0) == doctest::Approx(1.0));
    CHECK(a2(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(a2(1, 0) == doctest::Approx(a2(0, 1)));

    Matrix dup(2, 1);
    dup << 0.5, 0.5;
    const Matrix a3 = build_cov(dup, det);
    CHECK(a3(0, 1) == doctest::Approx(1.0));  // rank-1, rejected downstream
    CHECK(std::abs(a3.determinant()) < 1e-12);
}

TEST_CASE("log marginal likelihood matches a dense-inverse evaluation") {
    const TrainingSet data = five_point_set();

    SUBCASE("free nugget, no jitter involved") {
        GpHyperparams hyper{vec1(3.0), 0.1};
        const double got = log_marginal_likelihood(data, hyper);
        const auto oracle =
            dense_gp_oracle(data.inputs, data.outputs, hyper, 0.0, vec1(0.5));
        CHECK(got == doctest::Approx(oracle.log_lik).epsilon(1e-10));
    }
    SUBCASE("zero nugget includes the stabilising jitter") {
        GpHyperparams hyper{vec1(3.0), 0.0};
        const double got = log_marginal_likelihood(data, hyper);
        const auto oracle =
            dense_gp_oracle(data.inputs, data.outputs, hyper, kZeroNuggetJitter, vec1(0.5));
        CHECK(got == doctest::Approx(oracle.log_lik).epsilon(1e-9));
    }
}

TEST_CASE("zero-residual data reports a degenerate fit") {
    Matrix x(5, 1);
    x << 0.1, 0.3, 0.5, 0.7, 0.9;
    TrainingSet data(x, Vector::Zero(5));
    CHECK_THROWS_AS(log_marginal_likelihood(data, GpHyperparams{vec1(2.0), 0.0}),
                    DegenerateFitError);
    // the fit itself stays usable with the floored variance
    const GpFit fit = fit_gp(data, GpHyperparams{vec1(2.0), 0.0});
    CHECK(fit.degenerate);
    CHECK(fit.sigma_hat_sq == doctest::Approx(1e-12));
}

TEST_CASE("likelihood is invariant under data permutation") {
    const TrainingSet data = five_point_set();
    GpHyperparams hyper{vec1(2.5), 0.05};
    const double base = log_marginal_likelihood(data, hyper);

    std::vector<int> perm{3, 0, 4, 1, 2};
    const TrainingSet shuffled = data.subset(perm);
    CHECK(log_marginal_likelihood(shuffled, hyper) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("likelihood is invariant under input-dimension relabeling") {
    RngStream rng(41);
    Matrix x = test_util::random_points(12, 2, rng);
    Vector y(12);
    for (int i = 0; i < 12; ++i) {
        y[i] = std::sin(3 * x(i, 0)) + x(i, 1);
    }
    Vector b(2);
    b << 4.0, 0.7;
    const double base = log_marginal_likelihood(TrainingSet(x, y), GpHyperparams{b, 0.01});

    Matrix xs(12, 2);
    xs.col(0) = x.col(1);
    xs.col(1) = x.col(0);
    Vector bs(2);
    bs << b[1], b[0];
    const double swapped =
        log_marginal_likelihood(TrainingSet(xs, y), GpHyperparams{bs, 0.01});
    CHECK(swapped == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("insufficient data raises") {
    Matrix x(3, 1);
    x << 0.1, 0.5, 0.9;
    TrainingSet data(x, Vector::Ones(3));
    CHECK_THROWS_AS(log_marginal_likelihood(data, GpHyperparams{vec1(1.0), 0.0}),
                    InsufficientDataError);
    CHECK_THROWS_AS(fit_hyperparams(data, true), InsufficientDataError);
}

TEST_CASE("duplicate points with zero nugget raise a conditioning error") {
    Matrix x(5, 1);
    x << 0.1, 0.3, 0.3, 0.7, 0.9;
    TrainingSet data(x, Vector::LinSpaced(5, 0.0, 1.0));
    try {
        fit_gp(data, GpHyperparams{vec1(1.0), 0.0});
        FAIL("expected ConditioningError");
    } catch (const ConditioningError& e) {
        CHECK(e.point_i == 1);
        CHECK(e.point_j == 2);
    }
}

TEST_CASE("fit_hyperparams recovers the roughness scale of simulated data") {
    RngStream rng(1234);
    Matrix x = test_util::random_points(40, 1, rng);
    const Vector truth_b = vec1(5.0);
    const Vector y = test_util::sample_gp(x, truth_b, 2.0, 1.0, rng);
    TrainingSet data(x, y);

    const FitResult fit = fit_hyperparams(data, true);
    CHECK(fit.hyper.nugget == 0.0);
    CHECK(fit.hyper.roughness[0] >= 1.0);
    CHECK(fit.hyper.roughness[0] <= 25.0);

    // the maximised likelihood dominates the value at the truth
    const double at_truth = log_marginal_likelihood(data, GpHyperparams{truth_b, 0.0});
    CHECK(fit.log_lik >= at_truth - 1e-6);
}

TEST_CASE("fitted likelihood beats a coarse grid over the search box") {
    const TrainingSet data = five_point_set();
    const FitResult fit = fit_hyperparams(data, true);
    const double best = log_marginal_likelihood(data, fit.hyper);

    for (int g = 0; g < 5; ++g) {
        const double b = std::exp(std::log(1e-3) + (std::log(1e3) - std::log(1e-3)) * g / 4.0);
        double value;
        try {
            value = log_marginal_likelihood(data, GpHyperparams{vec1(b), 0.0});
        } catch (const DegenerateFitError&) {
            continue;
        }
        CHECK(best >= value - 1e-8);
    }
}

TEST_CASE("gp_predict interpolates deterministic data") {
    const TrainingSet data = five_point_set();
    const FitResult res = fit_hyperparams(data, true);
    const GpFit fit = fit_gp(data, res.hyper);
    for (int i = 0; i < data.n(); ++i) {
        const PredictiveT p = gp_predict(fit, data, data.inputs.row(i).transpose());
        CHECK(std::abs(p.mean - data.outputs[i]) < 1e-8);
        CHECK(p.scale < 1e-6);
        CHECK(p.dof == data.n() - 1);
    }
}

TEST_CASE("gp_predict reverts to the fitted constant far from data") {
    Matrix x(5, 1);
    x << 0.0, 0.05, 0.1, 0.15, 0.2;
    Vector y(5);
    y << 1.0, 1.4, 0.8, 1.1, 1.3;
    TrainingSet data(x, y);
    const GpFit fit = fit_gp(data, GpHyperparams{vec1(1000.0), 0.0});
    // correlations at distance >= 0.7: exp(-1000 * 0.49) ~ 0
    const PredictiveT p = gp_predict(fit, data, vec1(0.9));
    CHECK(p.mean == doctest::Approx(fit.beta_hat).epsilon(1e-10));
}

TEST_CASE("gp_predict matches the dense-inverse oracle") {
    const TrainingSet data = five_point_set();
    GpHyperparams hyper{vec1(4.0), 0.2};
    const GpFit fit = fit_gp(data, hyper);
    const Vector query = vec1(0.42);
    const auto oracle = dense_gp_oracle(data.inputs, data.outputs, hyper, 0.0, query);

    const PredictiveT p = gp_predict(fit, data, query);
    CHECK(p.mean == doctest::Approx(oracle.mean_at).epsilon(1e-10));
    const int n = data.n();
    const double expected_scale =
        std::sqrt(oracle.sigma2 * ((n - 3.0) / (n - 1.0)) * oracle.c_star_at);
    CHECK(p.scale == doctest::Approx(expected_scale).epsilon(1e-9));
}

TEST_CASE("adding a constant to the outputs shifts predictions by it") {
    const TrainingSet data = five_point_set();
    GpHyperparams hyper{vec1(3.0), 0.0};
    const GpFit fit = fit_gp(data, hyper);
    const TrainingSet shifted(data.inputs, data.outputs.array() + 7.5);
    const GpFit fit2 = fit_gp(shifted, hyper);

    for (double xq : {0.2, 0.48, 0.81}) {
        const double m1 = gp_predict(fit, data, vec1(xq)).mean;
        const double m2 = gp_predict(fit2, shifted, vec1(xq)).mean;
        CHECK(m2 - m1 == doctest::Approx(7.5).epsilon(1e-8));
    }
}

TEST_CASE("predictive scale is nonnegative everywhere") {
    RngStream rng(7);
    Matrix x = test_util::random_points(20, 2, rng);
    Vector y(20);
    for (int i = 0; i < 20; ++i) {
        y[i] = std::cos(4 * x(i, 0)) * x(i, 1);
    }
    TrainingSet data(x, y);
    const FitResult res = fit_hyperparams(data, true, FitConfig{.n_restarts = 3});
    const GpFit fit = fit_gp(data, res.hyper);
    for (int t = 0; t < 200; ++t) {
        Vector q(2);
        q << rng.uniform01(), rng.uniform01();
        CHECK(gp_predict(fit, data, q).scale >= 0.0);
    }
}
