#include "vorgp/rjmcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace vorgp {

namespace {

Vector default_step(int dim) {
    return Vector::Constant(dim, 0.05);
}

}  // namespace

JumpProposal propose_birth(const Tessellation& tess, RngStream& rng) {
    const int k = tess.k();
    const int d = tess.dim();
    const int r = tess.r();

    Matrix centres(k + 1, d);
    centres.topRows(k) = tess.centres();
    for (int j = 0; j < d; ++j) {
        centres(k, j) = rng.uniform01();
    }

    auto blocks = tess.blocks();
    const int slot = rng.uniform_int(r + 1);
    if (slot < r) {
        blocks[slot].push_back(k);
    } else {
        blocks.push_back({k});
    }

    JumpProposal out{Tessellation(std::move(centres), std::move(blocks)),
                     k == 1 ? 0.5 : 1.0, std::log(static_cast<double>(r + 1))};
    return out;
}

JumpProposal propose_death(const Tessellation& tess, RngStream& rng) {
    const int k = tess.k();
    if (k < 2) {
        throw ArgumentError("propose_death: requires k >= 2");
    }
    const int victim = rng.uniform_int(k);

    Matrix centres(k - 1, tess.dim());
    for (int i = 0, row = 0; i < k; ++i) {
        if (i != victim) {
            centres.row(row++) = tess.centres().row(i);
        }
    }
    std::vector<std::vector<int>> blocks;
    blocks.reserve(tess.blocks().size());
    for (const auto& b : tess.blocks()) {
        std::vector<int> nb;
        nb.reserve(b.size());
        for (int cell : b) {
            if (cell != victim) {
                nb.push_back(cell > victim ? cell - 1 : cell);
            }
        }
        if (!nb.empty()) {
            blocks.push_back(std::move(nb));
        }
    }

    Tessellation prop(std::move(centres), std::move(blocks));
    const double log_pf = -std::log(static_cast<double>(prop.r() + 1));
    return JumpProposal{std::move(prop), k == 2 ? 2.0 : 1.0, log_pf};
}

std::optional<Tessellation> propose_move(const Tessellation& tess, RngStream& rng,
                                         const Vector& step_sd) {
    const int d = tess.dim();
    if (step_sd.size() != d) {
        throw ArgumentError("propose_move: step size must match dimension");
    }
    const int mover = rng.uniform_int(tess.k());
    Vector pos = tess.centres().row(mover).transpose();
    for (int j = 0; j < d; ++j) {
        pos[j] += step_sd[j] * rng.normal();
    }
    for (int j = 0; j < d; ++j) {
        if (pos[j] < 0.0 || pos[j] > 1.0) {
            return std::nullopt;
        }
    }
    Matrix centres = tess.centres();
    centres.row(mover) = pos.transpose();
    return Tessellation(std::move(centres), tess.blocks());
}

Tessellation propose_change(const Tessellation& tess, RngStream& rng) {
    const int k = tess.k();
    if (k < 2) {
        throw ArgumentError("propose_change: requires k >= 2");
    }
    const int mover = rng.uniform_int(k);
    const int own = tess.region_of_centre(mover);
    const bool singleton = tess.blocks()[own].size() == 1;
    const int r = tess.r();

    // options: every other region, plus a fresh singleton when the mover
    // currently has block-mates (otherwise that option is a no-op)
    const int n_options = singleton ? r - 1 : r;
    const int pick = rng.uniform_int(n_options);

    auto blocks = tess.blocks();
    auto& old_block = blocks[own];
    old_block.erase(std::find(old_block.begin(), old_block.end(), mover));
    if (old_block.empty()) {
        blocks.erase(blocks.begin() + own);
    }

    // map pick onto regions skipping the mover's own
    int target = -1;
    int seen = 0;
    for (int b = 0; b < r; ++b) {
        if (b == own) {
            continue;
        }
        if (seen++ == pick) {
            target = b;
            break;
        }
    }
    if (target == -1) {
        // new singleton (only reachable when !singleton)
        blocks.push_back({mover});
    } else {
        // index shift if the emptied block was removed before `target`
        int adj_target = target;
        if (singleton && target > own) {
            adj_target = target - 1;
        }
        blocks[adj_target].push_back(mover);
    }
    return Tessellation(tess.centres(), std::move(blocks));
}

Chain run_chain_with(const TrainingSet& data, const McmcConfig& cfg, const EvalFn& eval) {
    const int d = data.dim();
    McmcConfig config = cfg;
    if (config.move_step_sd.size() == 0) {
        config.move_step_sd = default_step(d);
    } else if (config.move_step_sd.size() != d) {
        throw ArgumentError("run_chain: move_step_sd must match data dimension");
    }

    Tessellation current = Tessellation::single_cell(d);
    auto cur_eval = eval(current);
    if (!cur_eval) {
        throw InsufficientDataError("run_chain: initial single-cell model is invalid");
    }

    Chain chain;
    chain.config = config;
    chain.n_iterations = config.n_iterations;
    const int burn_in = static_cast<int>(config.n_iterations * config.burn_in_fraction);
    RngStream rng(config.seed);

    double best_log_post = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= config.n_iterations; ++iter) {
        MoveType mv;
        if (current.k() == 1) {
            mv = rng.uniform_int(2) == 0 ? MoveType::birth : MoveType::move;
        } else {
            mv = static_cast<MoveType>(rng.uniform_int(4));
        }
        MoveTally& tally = chain.tallies[static_cast<int>(mv)];
        ++tally.proposed;

        std::optional<Tessellation> proposal;
        double log_adjust = 0.0;
        double log_pf = 0.0;
        switch (mv) {
            case MoveType::birth: {
                JumpProposal p = propose_birth(current, rng);
                log_adjust = std::log(p.adjustment);
                log_pf = p.log_partition_factor;
                proposal = std::move(p.tess);
                break;
            }
            case MoveType::death: {
                JumpProposal p = propose_death(current, rng);
                log_adjust = std::log(p.adjustment);
                log_pf = p.log_partition_factor;
                proposal = std::move(p.tess);
                break;
            }
            case MoveType::move:
                proposal = propose_move(current, rng, config.move_step_sd);
                break;
            case MoveType::change:
                proposal = propose_change(current, rng);
                break;
        }

        if (proposal) {
            auto prop_eval = eval(*proposal);
            if (prop_eval) {
                const double log_alpha =
                    prop_eval->log_posterior - cur_eval->log_posterior + log_adjust + log_pf;
                const bool accept =
                    log_alpha >= 0.0 || std::log(rng.uniform01()) < log_alpha;
                if (accept) {
                    current = std::move(*proposal);
                    cur_eval = std::move(prop_eval);
                    ++tally.accepted;
                }
            }
        }

        if (iter > burn_in && iter % config.thinning == 0) {
            chain.samples.push_back(
                {current, cur_eval->log_posterior, cur_eval->region_hypers, iter});
            if (cur_eval->log_posterior > best_log_post) {
                best_log_post = cur_eval->log_posterior;
                chain.map_index = static_cast<int>(chain.samples.size()) - 1;
            }
        }
    }
    return chain;
}

Chain run_chain(const TrainingSet& data, const McmcConfig& cfg) {
    ModelEvaluator evaluator(data, cfg.prior, cfg.deterministic, cfg.fit);
    return run_chain_with(data, cfg,
                          [&](const Tessellation& t) { return evaluator.evaluate(t); });
}

FittedModel map_model(const Chain& chain, const TrainingSet& data, const FitConfig& full_fit) {
    const ChainSample& best = chain.map_sample();
    auto model = evaluate_model(data, best.tess, chain.config.prior,
                                chain.config.deterministic, full_fit);
    if (!model) {
        throw ConditioningError("map_model: stored sample no longer evaluates as valid");
    }
    return std::move(*model);
}

std::map<int, double> region_count_posterior(const Chain& chain) {
    if (chain.samples.empty()) {
        throw ArgumentError("region_count_posterior: empty chain");
    }
    std::map<int, double> hist;
    for (const auto& s : chain.samples) {
        hist[s.tess.r()] += 1.0;
    }
    for (auto& [r, p] : hist) {
        p /= static_cast<double>(chain.samples.size());
    }
    return hist;
}

Vector tune_move_step(const TrainingSet& data, McmcConfig cfg, int pilot_iterations,
                      int max_rounds) {
    if (cfg.move_step_sd.size() == 0) {
        cfg.move_step_sd = default_step(data.dim());
    }
    cfg.n_iterations = pilot_iterations;
    cfg.burn_in_fraction = 0.0;
    for (int round = 0; round < max_rounds; ++round) {
        const Chain pilot = run_chain(data, cfg);
        const MoveTally& moves = pilot.tallies[static_cast<int>(MoveType::move)];
        if (moves.proposed == 0) {
            break;
        }
        const double acc = static_cast<double>(moves.accepted) / moves.proposed;
        if (acc < 0.20) {
            cfg.move_step_sd *= 0.5;
        } else if (acc > 0.40) {
            cfg.move_step_sd *= 2.0;
        } else {
            break;
        }
    }
    return cfg.move_step_sd;
}

}  // namespace vorgp
