#pragma once

#include "vorgp/common.hpp"
#include "vorgp/types.hpp"

#include <vector>

namespace vorgp {

// Hyperparameters of the Gaussian correlation
//   c(x, x') = exp(-sum_j roughness_j (x_j - x'_j)^2),
// plus an additive nugget on the covariance diagonal.  nugget = 0 models a
// deterministic response.
struct GpHyperparams {
    Vector roughness;      // length d, entries >= 0
    double nugget = 0.0;   // >= 0
};

// One-point predictive distribution: (eta(x) - mean)/scale ~ t_dof.
struct PredictiveT {
    double mean = 0.0;
    double scale = 0.0;
    int dof = 0;
};

// Fitted regression state for one data set under the constant basis h(x)=1,
// q = 1.  The generalised-least-squares coefficient and scale are profiled
// out analytically:
//   beta_hat  = (h'A^-1 h)^-1 h'A^-1 y
//   sigma2    = (y - h beta)' A^-1 (y - h beta) / (n - q - 2)
// A zero-residual data set (all outputs equal) makes sigma2 collapse; the
// fit is kept usable by flooring sigma2 at 1e-12 and flagging `degenerate`.
struct GpFit {
    GpHyperparams hyper;
    double beta_hat = 0.0;
    double sigma_hat_sq = 0.0;
    Matrix chol_lower;       // L with L L' = A (+ stabilising jitter)
    Vector resid_weights;    // A^-1 (y - h beta_hat)
    Vector ainv_h;           // A^-1 h
    double ht_ainv_h = 0.0;  // h'A^-1 h
    double log_det_a = 0.0;
    bool degenerate = false;
    int n = 0;

    static constexpr int basis_dim = 1;  // q
};

// Diagonal jitter added to A when nugget = 0, purely for factorisation
// stability.  Interpolation checks through the generic path tolerate the
// resulting ~1e-10 perturbation; exact-coincidence queries short-circuit.
inline constexpr double kZeroNuggetJitter = 1e-10;

// Squared distance below which two points count as coincident.
inline constexpr double kCoincidentDistSq = 1e-24;

double corr_gaussian(const Vector& x, const Vector& x2, const Vector& roughness);

// n x n matrix A with A_ij = c(x_i, x_j) + nugget * delta_ij.
Matrix build_cov(const Matrix& inputs, const GpHyperparams& hyper);

// Factorise and profile the GLS quantities for fixed hyperparameters.
// Throws ConditioningError on duplicate points with zero nugget or on a
// failed factorisation; InsufficientDataError when n < q + 3.
GpFit fit_gp(const TrainingSet& data, const GpHyperparams& hyper);

// log L(B, nugget; data) up to the additive constant fixed by (n, q):
//   -1/2 log|A| - 1/2 log|h'A^-1 h| + (q - n)/2 log sigma2.
// Zero-residual data raises DegenerateFitError instead of returning +inf.
double log_marginal_likelihood(const TrainingSet& data, const GpHyperparams& hyper);

// Same value computed from an existing fit, with sigma2 floored (no throw).
double log_marginal_likelihood(const GpFit& fit);

struct FitConfig {
    int n_restarts = 5;      // space-filling starts in the log-parameter box
    int max_evals = 300;     // likelihood evaluations per restart
    double f_tol = 1e-7;     // simplex spread stop, relative to 1 + |f|
    double x_tol = 1e-4;     // simplex diameter stop, log-parameter units
    double rough_lo = 1e-3;
    double rough_hi = 1e3;
    double nugget_lo = 1e-8;
    double nugget_hi = 1.0;
};

struct FitResult {
    GpHyperparams hyper;
    double log_lik = 0.0;
    bool converged = false;
};

// Maximise the marginal likelihood over log-transformed parameters with a
// simplex search restarted from a deterministic space-filling start set.
// `deterministic` pins the nugget to exactly 0.  The search is a pure
// function of (data, cfg): repeated calls reproduce the same result.
FitResult fit_hyperparams(const TrainingSet& data, bool deterministic,
                          const FitConfig& cfg = {});

// Posterior t-predictive at x.  With nugget 0 a query coinciding with a
// training input returns the interpolated value exactly (mean = y_i,
// scale = 0), which is the zero-jitter limit of the formulas.
PredictiveT gp_predict(const GpFit& fit, const TrainingSet& data, const Vector& x);

// Mean only; same value as gp_predict(...).mean, skipping the variance
// solves.  All mean surfaces route through this one loop.
double gp_mean(const GpFit& fit, const TrainingSet& data, const Vector& x);

}  // namespace vorgp
