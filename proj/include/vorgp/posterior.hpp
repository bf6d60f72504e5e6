#pragma once

#include "vorgp/gp.hpp"
#include "vorgp/tessellation.hpp"
#include "vorgp/types.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace vorgp {

struct PriorConfig {
    double lambda = 5.0;  // Poisson-process intensity over [0,1]^d
    // The printed prior carries a discrete-uniform factor 1/k on the region
    // count even though the partition already determines it; kept on by
    // default, switchable for sensitivity checks.
    bool include_region_count_factor = true;
};

// log pi(t) up to terms constant in k:
//   k log(lambda) - log(k!) - log(k) - log(b_k)
// Centre locations are uniform on the unit cube (density 1) and e^-lambda
// is dropped; only ratios across models matter.
double log_prior(const Tessellation& tess, const PriorConfig& prior);

// Additive constant linking the profile likelihood maximised during fitting
// to a region's contribution to the integrated likelihood:
//   Gamma((n-q)/2) term plus the (2/(n-q-2))^((n-q)/2) scale factor.
double integrated_term_constant(int n_region);

// Per-region contribution with beta and the GP scale marginalised under the
// weak prior:  -1/2 log|h'A^-1 h| - 1/2 log|A| + log Gamma((n-q)/2)
//              + (n-q)/2 log(2 / ((n-q-2) sigma2)).
double integrated_term(const GpFit& fit);

// Sum of per-region integrated contributions.  Returns nullopt when the
// tessellation is invalid for the data (some region has fewer than q + 3
// points, or no points at all).  Throws ArgumentError when fits do not line
// up with the tessellation's regions.
std::optional<double> log_integrated_likelihood(const TrainingSet& data,
                                                const Tessellation& tess,
                                                const std::vector<GpFit>& fits);

// A tessellation with independent per-region fits and its posterior score.
struct FittedModel {
    Tessellation tess;
    std::vector<GpFit> region_fits;
    std::vector<std::vector<int>> region_points;  // data indices per region
    std::vector<TrainingSet> region_data;
    double log_prior_value = 0.0;
    double log_integrated_lik = 0.0;
    double log_posterior = 0.0;
};

// Partition the data, maximise each region's likelihood, and assemble the
// posterior score.  nullopt signals an invalid tessellation (empty region or
// a region below the four-point minimum); a region whose covariance cannot
// be factorised is treated the same way.
std::optional<FittedModel> evaluate_model(const TrainingSet& data, const Tessellation& tess,
                                          const PriorConfig& prior, bool deterministic,
                                          const FitConfig& fit_cfg = {});

// Caching evaluator for chain use.  Region fits are memoised keyed by the
// set of data indices in the region, so proposals that leave a region's
// membership unchanged skip refitting.  Cache misses within one evaluation
// are fitted in parallel; results do not depend on thread count.
class ModelEvaluator {
public:
    ModelEvaluator(const TrainingSet& data, PriorConfig prior, bool deterministic,
                   FitConfig fit_cfg);

    struct Evaluation {
        double log_prior = 0.0;
        double log_integrated_lik = 0.0;
        double log_posterior = 0.0;
        std::vector<GpHyperparams> region_hypers;  // in block order
        std::vector<int> region_sizes;
    };

    // nullopt = invalid tessellation (auto-reject)
    std::optional<Evaluation> evaluate(const Tessellation& tess);

    // Cache-bypassing full refit, used for the posterior-mode model.
    std::optional<FittedModel> full_model(const Tessellation& tess,
                                          const FitConfig& cfg = {}) const;

    const TrainingSet& data() const { return data_; }
    const PriorConfig& prior() const { return prior_; }
    bool deterministic() const { return deterministic_; }

    std::size_t cache_size() const { return cache_.size(); }
    long cache_hits() const { return hits_; }
    long cache_misses() const { return misses_; }

private:
    struct RegionFitRecord {
        GpHyperparams hyper;
        double log_lik = 0.0;
        int n = 0;
    };

    TrainingSet data_;
    PriorConfig prior_;
    bool deterministic_;
    FitConfig fit_cfg_;
    std::unordered_map<std::string, RegionFitRecord> cache_;
    long hits_ = 0;
    long misses_ = 0;
};

}  // namespace vorgp
