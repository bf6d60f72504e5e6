#pragma once

#include "vorgp/posterior.hpp"
#include "vorgp/rng.hpp"
#include "vorgp/tessellation.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace vorgp {

enum class MoveType { birth = 0, death = 1, move = 2, change = 3 };

// A dimension-changing proposal plus the factors entering its acceptance
// probability.  `adjustment` is the move-probability edge correction: 1/2
// for a birth proposed from k = 1, 2 for a death proposed from k = 2, and 1
// otherwise.  `log_partition_factor` is the Hastings correction for the
// region-assignment choice (birth picks one of r + 1 slots, death removes
// one of k centres); without it the sampler's stationary distribution is
// measurably wrong, see tests.
struct JumpProposal {
    Tessellation tess;
    double adjustment = 1.0;
    double log_partition_factor = 0.0;
};

// New centre uniform on the cube, joined to one of the r existing regions
// or opening a new singleton region, all r + 1 choices equally likely.
JumpProposal propose_birth(const Tessellation& tess, RngStream& rng);

// Uniformly chosen centre removed; a block emptied by the removal is
// deleted.  Requires k >= 2.
JumpProposal propose_death(const Tessellation& tess, RngStream& rng);

// One centre displaced by a Gaussian step with the given per-dimension
// standard deviations.  nullopt when the displaced centre leaves [0,1]^d;
// such proposals are rejected outright.
std::optional<Tessellation> propose_move(const Tessellation& tess, RngStream& rng,
                                         const Vector& step_sd);

// One centre reassigned uniformly among the other regions plus (when its
// block has company) a fresh singleton region.  Requires k >= 2.
Tessellation propose_change(const Tessellation& tess, RngStream& rng);

struct McmcConfig {
    int n_iterations = 20000;
    double burn_in_fraction = 0.25;
    int thinning = 10;
    Vector move_step_sd;  // empty -> 0.05 per dimension
    std::uint64_t seed = 0;
    PriorConfig prior;
    bool deterministic = true;
    FitConfig fit;  // per-region optimiser settings used inside the chain
};

struct ChainSample {
    Tessellation tess;
    double log_posterior = 0.0;
    std::vector<GpHyperparams> region_hypers;  // in block order
    int iteration = 0;
};

struct MoveTally {
    long proposed = 0;
    long accepted = 0;
};

struct Chain {
    std::vector<ChainSample> samples;  // post burn-in, thinned
    std::array<MoveTally, 4> tallies{};
    int map_index = -1;  // argmax of stored log_posterior
    int n_iterations = 0;
    McmcConfig config;

    const ChainSample& map_sample() const {
        if (map_index < 0) {
            throw ArgumentError("Chain: no stored samples");
        }
        return samples[map_index];
    }
};

using EvalFn = std::function<std::optional<ModelEvaluator::Evaluation>(const Tessellation&)>;

// Chain with an injected model evaluator (used to stub the likelihood).
Chain run_chain_with(const TrainingSet& data, const McmcConfig& cfg, const EvalFn& eval);

Chain run_chain(const TrainingSet& data, const McmcConfig& cfg);

// The stored sample with the largest posterior score, refitted fully
// (cache-bypassing) for downstream use.
FittedModel map_model(const Chain& chain, const TrainingSet& data,
                      const FitConfig& full_fit = {});

// Empirical distribution of the region count across stored samples.
std::map<int, double> region_count_posterior(const Chain& chain);

// Scale the move step by pilot runs until move acceptance lands in
// [0.20, 0.40]; returns the tuned per-dimension step.
Vector tune_move_step(const TrainingSet& data, McmcConfig cfg, int pilot_iterations = 1000,
                      int max_rounds = 5);

}  // namespace vorgp
