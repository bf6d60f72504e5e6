#pragma once

#include "vorgp/adaptive.hpp"
#include "vorgp/predict.hpp"
#include "vorgp/rjmcmc.hpp"
#include "vorgp/rng.hpp"

#include <functional>
#include <map>
#include <string>

namespace vorgp {

// A benchmark response surface: a smooth base with a fixed +10 offset on a
// membership set, so the branch indicator is always recoverable from the
// value.
struct TestFunction {
    std::string name;
    int dim = 2;
    std::function<double(const Vector&)> eval;
    std::function<bool(const Vector&)> inside;
};

// sin(x1) + cos(x2), plus 10 outside the diamond
// |x2 - x1| <= 0.2, 0.8 <= x1 + x2 <= 1.2.
TestFunction eta1();

// x1^2 + 5 x2^2 + 3 cos(10 x1^2 + 5 x2^2), plus 10 on the composite set
// ((x1 in [0.25,0.6]) u (x2 in [0.3,0.6]) u disc(0.25,0.6;0.15)
//   u disc(0.6,0.6;0.15)) n disc(0.4125,0.3;0.175),
// the trailing intersection applied last.
TestFunction eta2();

// Six-dimensional synthetic analogue (not from any published study): smooth
// base with a +10 offset inside a disc in the (x1, x6) plane.
TestFunction synthetic6d();

// One Latin hypercube draw: each dimension occupies every stratum
// [i/n, (i+1)/n) exactly once, jittered uniformly within the stratum.
Matrix lhs_sample(int n, int d, RngStream& rng);

// Best of n_restarts LHS draws, each improved by pairwise coordinate swaps
// accepted when they increase the minimum pairwise distance.
Matrix maximin_lhs(int n, int d, RngStream& rng, int n_restarts = 5,
                   int swaps_per_restart = 0 /* 0 -> 40 n */);

double min_pairwise_distance(const Matrix& points);

// Corner-anchored grid on [0,1]^2 including both endpoints, first axis
// fastest.
Matrix grid_2d(int nx, int ny);

struct BenchmarkConfig {
    std::uint64_t seed = 1;  // root seed; stage streams are split from it
    double lambda = 5.0;
    int n_iterations = 20000;
    double burn_in_fraction = 0.25;
    int thinning = 10;
    int grid_per_axis = 100;
    int lhs_restarts = 5;
    int n_candidates = 2000;  // boundary candidate set size
    int n_new_points = 5;     // points added per sampler
    double epsilon = 0.05;    // for the paired variant via the CLI
    bool deterministic = true;
    bool pin_single_region = false;  // diagnostic: skip the chain, keep k = 1
    FitConfig chain_fit;             // optimiser budget inside the chain
    FitConfig full_fit;              // final refits
};

struct BenchmarkReport {
    std::string scenario;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    int n_s = 0;
    int n_data = 0;
    double mse_proposed = 0.0;
    double mse_single_gp = 0.0;
    std::map<int, double> region_count_posterior;
    double runtime_seconds = 0.0;
    std::map<std::string, double> literature_values;
    double move_acceptance = 0.0;
};

// Heavy intermediates, reusable by the adaptive stage and by tests.
struct BenchmarkArtifacts {
    TrainingSet data;
    Chain chain;
    Matrix grid;
    Vector truth;
    PredictionGrid surface;
};

// Generate the design, run the chain, evaluate the integrated surface on
// the grid, and compare against the single-region baseline.
// Scenarios: "diamond" (80 points), "curved" (70), "synthetic6d" (105,
// scored on a Sobol test set instead of a grid).
BenchmarkReport run_benchmark(const std::string& name, const BenchmarkConfig& cfg,
                              BenchmarkArtifacts* artifacts = nullptr);

struct AdaptiveReport {
    std::uint64_t seed = 0;
    double lambda = 0.0;
    int n_s = 0;
    double mse_base = 0.0;
    double mse_boundary = 0.0;
    double mse_sobol = 0.0;
    double mse_maxvar = 0.0;
    std::map<int, double> region_posterior_before;
    std::map<int, double> region_posterior_after;  // boundary sampler
    Matrix boundary_points;
    Matrix sobol_added;
    Matrix maxvar_points;
    double runtime_seconds = 0.0;
    std::map<std::string, double> literature_values;
};

// Augment the diamond design with n_new_points chosen by the boundary
// sampler and by the Sobol / largest-variance comparators, re-run the chain
// for each augmented design, and report the resulting errors.
AdaptiveReport run_adaptive_benchmark(const BenchmarkConfig& cfg,
                                      const BenchmarkArtifacts* base = nullptr);

// Per-point posterior means of a single fitted model over grid rows.
Vector model_mean_surface(const FittedModel& model, const Matrix& grid);

}  // namespace vorgp
