#include "vorgp/adaptive.hpp"
#include "vorgp/io.hpp"
#include "vorgp/predict.hpp"
#include "vorgp/rjmcmc.hpp"
#include "vorgp/testbed.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace vorgp;

constexpr int kExitBadInput = 2;
constexpr int kExitInsufficientData = 3;
constexpr int kExitOutOfRange = 4;
constexpr int kExitNoBoundary = 5;

struct FitOptions {
    std::string data_path;
    std::string chain_path;
    double lambda = 5.0;
    int iterations = 20000;
    std::uint64_t seed = 0;
    double burn_in = 0.25;
    int thinning = 10;
    double move_step = 0.05;
    bool deterministic = false;
    bool pilot = false;
};

struct PredictOptions {
    std::string chain_path;
    std::string data_path;
    std::string out_path;
    std::string grid_spec;
    std::string points_path;
};

struct DesignOptions {
    std::string chain_path;
    std::string data_path;
    std::string out_path;
    std::string sampler = "boundary";
    int n_points = 5;
    int candidates = 2000;
    double epsilon = 0.05;
    std::uint64_t seed = 0;
};

struct BenchmarkOptions {
    std::string scenario = "diamond";
    std::string out_path;
    std::string grid_out;
    std::uint64_t seed = 1;
    double lambda = 5.0;
    int iterations = 20000;
    bool strict = false;
    bool pin_single_region = false;
};

std::vector<int> parse_grid_spec(const std::string& spec, int dim) {
    std::vector<int> counts;
    std::string token;
    std::stringstream ss(spec);
    while (std::getline(ss, token, 'x')) {
        try {
            counts.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw IoError("bad grid spec '" + spec + "'");
        }
    }
    if (counts.size() == 1) {
        counts.assign(dim, counts[0]);
    }
    if (static_cast<int>(counts.size()) != dim) {
        throw IoError("grid spec '" + spec + "' does not match input dimension " +
                      std::to_string(dim));
    }
    for (int c : counts) {
        if (c < 2) {
            throw IoError("grid spec '" + spec + "' needs at least 2 points per axis");
        }
    }
    return counts;
}

Matrix cartesian_grid(const std::vector<int>& counts) {
    const int d = static_cast<int>(counts.size());
    long total = 1;
    for (int c : counts) {
        total *= c;
    }
    Matrix out(total, d);
    for (long row = 0; row < total; ++row) {
        long rem = row;
        for (int j = 0; j < d; ++j) {
            const int ix = static_cast<int>(rem % counts[j]);
            rem /= counts[j];
            out(row, j) = static_cast<double>(ix) / (counts[j] - 1);
        }
    }
    return out;
}

TrainingSet rescaled_training(const Dataset& ds, const Rescaler& stored) {
    return TrainingSet(stored.scale_rows(ds.raw.inputs), ds.raw.outputs);
}

int cmd_fit(const FitOptions& opt) {
    Dataset ds = read_training_csv(opt.data_path);
    if (ds.scaled.n() < 4) {
        std::cerr << "fit: need at least 4 data rows, got " << ds.scaled.n() << "\n";
        return kExitInsufficientData;
    }
    McmcConfig cfg;
    cfg.n_iterations = opt.iterations;
    cfg.burn_in_fraction = opt.burn_in;
    cfg.thinning = opt.thinning;
    cfg.seed = derive_seed(opt.seed, Stream::chain);
    cfg.prior.lambda = opt.lambda;
    cfg.deterministic = opt.deterministic;
    cfg.move_step_sd = Vector::Constant(ds.scaled.dim(), opt.move_step);
    if (opt.pilot) {
        cfg.move_step_sd = tune_move_step(ds.scaled, cfg);
    }
    const Chain chain = run_chain(ds.scaled, cfg);
    save_chain(opt.chain_path, chain, ds);
    std::cout << "fit: stored " << chain.samples.size() << " samples to " << opt.chain_path
              << "\n";
    return 0;
}

int cmd_predict(const PredictOptions& opt) {
    const LoadedChain loaded = load_chain(opt.chain_path);
    const Dataset ds = read_training_csv(opt.data_path);
    const TrainingSet data = rescaled_training(ds, loaded.rescaler);

    Matrix query_unit;
    Matrix query_raw;
    if (!opt.points_path.empty()) {
        query_raw = read_points_csv(opt.points_path);
        if (query_raw.cols() != data.dim()) {
            throw IoError("query points have " + std::to_string(query_raw.cols()) +
                          " columns, expected " + std::to_string(data.dim()));
        }
        query_unit = loaded.rescaler.scale_rows(query_raw);
        for (int i = 0; i < query_unit.rows(); ++i) {
            for (int j = 0; j < query_unit.cols(); ++j) {
                if (query_unit(i, j) < 0.0 || query_unit(i, j) > 1.0) {
                    std::cerr << "predict: query point " << i + 1
                              << " lies outside the trained input range\n";
                    return kExitOutOfRange;
                }
            }
        }
    } else {
        const std::string spec = opt.grid_spec.empty() ? "100" : opt.grid_spec;
        query_unit = cartesian_grid(parse_grid_spec(spec, data.dim()));
        query_raw = loaded.rescaler.unscale_rows(query_unit);
    }

    const PredictionGrid grid = integrated_surface(loaded.chain, data, query_unit);
    write_grid_csv(opt.out_path, loaded.input_names, query_raw, grid.integrated_mean, nullptr);
    std::cout << "predict: wrote " << query_raw.rows() << " rows to " << opt.out_path << "\n";
    return 0;
}

int cmd_design(const DesignOptions& opt) {
    const LoadedChain loaded = load_chain(opt.chain_path);
    const Dataset ds = read_training_csv(opt.data_path);
    const TrainingSet data = rescaled_training(ds, loaded.rescaler);
    const int d = data.dim();
    const std::uint64_t sampler_seed = derive_seed(opt.seed, Stream::sampler);

    Matrix new_unit;
    if (opt.sampler == "sobol") {
        new_unit = sobol_points(opt.n_points, d);
    } else if (opt.sampler == "maxvar") {
        RngStream pool_rng(derive_seed(sampler_seed, 0x706f6f6cULL));
        Matrix pool(opt.candidates, d);
        for (int i = 0; i < pool.rows(); ++i) {
            for (int j = 0; j < d; ++j) {
                pool(i, j) = pool_rng.uniform01();
            }
        }
        new_unit = max_variance_points(loaded.chain, data, pool, opt.n_points);
    } else if (opt.sampler == "boundary" || opt.sampler == "boundary-eps") {
        const FittedModel map = map_model(loaded.chain, data);
        if (map.tess.r() < 2) {
            std::cerr << "design: no boundary in MAP model\n";
            return kExitNoBoundary;
        }
        int target = 0;
        for (int r = 1; r < map.tess.r(); ++r) {
            if (map.region_points[r].size() < map.region_points[target].size()) {
                target = r;
            }
        }
        const CandidateSet cands =
            boundary_candidates(map, target, opt.candidates, sampler_seed);
        const Matrix selected =
            greedy_maximin_select(cands.points, data.inputs, opt.n_points);
        if (opt.sampler == "boundary") {
            new_unit = selected;
        } else {
            const EpsilonPairs pairs = epsilon_pairs(selected, map, opt.epsilon);
            new_unit.resize(2 * static_cast<int>(pairs.pairs.size()), d);
            for (int i = 0; i < static_cast<int>(pairs.pairs.size()); ++i) {
                new_unit.row(2 * i) = pairs.pairs[i].first.transpose();
                new_unit.row(2 * i + 1) = pairs.pairs[i].second.transpose();
            }
        }
    } else {
        std::cerr << "design: unknown sampler '" << opt.sampler << "'\n";
        return kExitBadInput;
    }

    write_points_csv(opt.out_path, loaded.input_names, loaded.rescaler.unscale_rows(new_unit));
    std::cout << "design: wrote " << new_unit.rows() << " points to " << opt.out_path << "\n";
    return 0;
}

int cmd_benchmark(const BenchmarkOptions& opt) {
    BenchmarkConfig cfg;
    cfg.seed = opt.seed;
    cfg.lambda = opt.lambda;
    cfg.n_iterations = opt.iterations;
    cfg.pin_single_region = opt.pin_single_region;

    if (opt.scenario == "diamond-adaptive") {
        const AdaptiveReport rep = run_adaptive_benchmark(cfg);
        if (!opt.out_path.empty()) {
            write_adaptive_report(opt.out_path, rep);
        }
        std::cout << "benchmark diamond-adaptive: boundary " << rep.mse_boundary << ", sobol "
                  << rep.mse_sobol << ", maxvar " << rep.mse_maxvar << "\n";
        if (opt.strict &&
            (rep.mse_boundary > rep.mse_sobol || rep.mse_boundary > rep.mse_maxvar)) {
            std::cerr << "benchmark: strict check failed (boundary sampler not best)\n";
            return 1;
        }
        return 0;
    }

    BenchmarkArtifacts artifacts;
    const BenchmarkReport rep = run_benchmark(opt.scenario, cfg, &artifacts);
    if (!opt.out_path.empty()) {
        write_benchmark_report(opt.out_path, rep);
    }
    if (!opt.grid_out.empty()) {
        std::vector<std::string> names(static_cast<size_t>(artifacts.grid.cols()));
        for (size_t j = 0; j < names.size(); ++j) {
            names[j] = "x" + std::to_string(j + 1);
        }
        write_grid_csv(opt.grid_out, names, artifacts.grid,
                       artifacts.surface.integrated_mean, &artifacts.truth);
    }
    std::cout << "benchmark " << opt.scenario << ": mse_proposed " << rep.mse_proposed
              << ", mse_single_gp " << rep.mse_single_gp << " (runtime "
              << rep.runtime_seconds << " s)\n";
    if (opt.strict && !(rep.mse_proposed < rep.mse_single_gp)) {
        std::cerr << "benchmark: strict check failed (proposed >= single GP)\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise Gaussian-process emulation over joined Voronoi tessellations"};
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "run the tessellation sampler on training data");
    fit_cmd->add_option("--data", fit.data_path, "training CSV (header, output last)")
        ->required();
    fit_cmd->add_option("--chain", fit.chain_path, "output chain JSONL path")->required();
    fit_cmd->add_option("--lambda", fit.lambda, "centre-process intensity");
    fit_cmd->add_option("--iterations", fit.iterations, "sampler iterations");
    fit_cmd->add_option("--seed", fit.seed, "root seed");
    fit_cmd->add_option("--burn-in", fit.burn_in, "burn-in fraction");
    fit_cmd->add_option("--thinning", fit.thinning, "keep every t-th sample");
    fit_cmd->add_option("--move-step", fit.move_step, "centre move step (unit cube)");
    fit_cmd->add_flag("--deterministic", fit.deterministic, "pin the nugget to zero");
    fit_cmd->add_flag("--pilot", fit.pilot, "tune the move step with pilot runs");

    PredictOptions pred;
    auto* pred_cmd = app.add_subcommand("predict", "integrated mean surface from a chain");
    pred_cmd->add_option("--chain", pred.chain_path, "chain JSONL from fit")->required();
    pred_cmd->add_option("--data", pred.data_path, "training CSV used for the fit")->required();
    pred_cmd->add_option("--out", pred.out_path, "output CSV")->required();
    pred_cmd->add_option("--grid", pred.grid_spec, "per-axis grid counts, e.g. 100x100");
    pred_cmd->add_option("--points", pred.points_path, "explicit query points CSV");

    DesignOptions des;
    auto* des_cmd = app.add_subcommand("design", "select new design points");
    des_cmd->add_option("--chain", des.chain_path, "chain JSONL from fit")->required();
    des_cmd->add_option("--data", des.data_path, "training CSV used for the fit")->required();
    des_cmd->add_option("--out", des.out_path, "output CSV")->required();
    des_cmd->add_option("--sampler", des.sampler, "boundary | boundary-eps | sobol | maxvar");
    des_cmd->add_option("--n-points", des.n_points, "points to select");
    des_cmd->add_option("--candidates", des.candidates, "boundary candidate / pool size");
    des_cmd->add_option("--epsilon", des.epsilon, "paired-variant displacement fraction");
    des_cmd->add_option("--seed", des.seed, "root seed");

    BenchmarkOptions bench;
    auto* bench_cmd = app.add_subcommand("benchmark", "run a bundled test-function study");
    bench_cmd
        ->add_option("--scenario", bench.scenario,
                     "diamond | curved | diamond-adaptive | synthetic6d")
        ->required();
    bench_cmd->add_option("--out", bench.out_path, "report JSON path");
    bench_cmd->add_option("--grid-out", bench.grid_out, "surface CSV path");
    bench_cmd->add_option("--seed", bench.seed, "root seed");
    bench_cmd->add_option("--lambda", bench.lambda, "centre-process intensity");
    bench_cmd->add_option("--iterations", bench.iterations, "sampler iterations");
    bench_cmd->add_flag("--strict", bench.strict, "nonzero exit when orderings fail");
    bench_cmd->add_flag("--pin-single-region", bench.pin_single_region,
                        "diagnostic: skip the sampler, keep one region");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit_cmd->parsed()) {
            return cmd_fit(fit);
        }
        if (pred_cmd->parsed()) {
            return cmd_predict(pred);
        }
        if (des_cmd->parsed()) {
            return cmd_design(des);
        }
        if (bench_cmd->parsed()) {
            return cmd_benchmark(bench);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const NoBoundaryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoBoundary;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
