#pragma once

#include "vorgp/rjmcmc.hpp"
#include "vorgp/testbed.hpp"
#include "vorgp/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace vorgp {

// {"centres": k x d array, "relationship": list of integer lists}
nlohmann::ordered_json tessellation_to_json(const Tessellation& tess);
Tessellation tessellation_from_json(const nlohmann::json& j);

// Affine map between original input coordinates and the unit cube.
struct Rescaler {
    Vector lo;
    Vector hi;

    static Rescaler from_data(const Matrix& inputs);
    static Rescaler identity(int d);

    Vector scale(const Vector& x) const;
    Vector unscale(const Vector& u) const;
    Matrix scale_rows(const Matrix& x) const;
    Matrix unscale_rows(const Matrix& u) const;
};

struct Dataset {
    TrainingSet raw;     // as read
    TrainingSet scaled;  // inputs mapped to [0,1]^d
    Rescaler rescaler;
    std::vector<std::string> input_names;
    std::string output_name;
};

// Training CSV: header row, comma-separated, the last column is the output.
// Malformed cells raise IoError carrying the 1-based row and column.
Dataset read_training_csv(const std::string& path);

// Points-only CSV (header row, d columns).
Matrix read_points_csv(const std::string& path);

void write_points_csv(const std::string& path, const std::vector<std::string>& header,
                      const Matrix& rows);

// Grid output: coordinates, integrated mean, and (when truth is known) the
// truth and squared error columns.
void write_grid_csv(const std::string& path, const std::vector<std::string>& input_names,
                    const Matrix& points, const Vector& mean, const Vector* truth);

// Chain persistence: one JSON document per stored sample
//   {"iteration": ..., "log_posterior": ..., "tessellation": {...},
//    "region_hyperparams": [...]}
// plus a side-car metadata document at <path>.meta.json holding the run
// configuration, rescaling bounds, and acceptance tallies.
void save_chain(const std::string& path, const Chain& chain, const Dataset& dataset);

struct LoadedChain {
    Chain chain;  // tallies are not restored; map_index is recomputed
    Rescaler rescaler;
    std::vector<std::string> input_names;
    std::string output_name;
};

LoadedChain load_chain(const std::string& path);

void write_benchmark_report(const std::string& path, const BenchmarkReport& report);
void write_adaptive_report(const std::string& path, const AdaptiveReport& report);

// 17-significant-digit formatting used for all CSV output; round-trips
// doubles exactly.
std::string format_double(double v);

}  // namespace vorgp
