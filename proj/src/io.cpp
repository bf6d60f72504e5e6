#include "vorgp/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vorgp {

using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) {
        return "";
    }
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, int row, int col) {
    const std::string s = strip(raw);
    if (s.empty()) {
        throw IoError("empty cell at row " + std::to_string(row) + ", column " +
                          std::to_string(col),
                      row, col);
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        throw IoError("non-numeric cell '" + s + "' at row " + std::to_string(row) +
                          ", column " + std::to_string(col),
                      row, col);
    }
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("'" + path + "' is empty", 1, 0);
    }
    CsvTable table;
    for (const auto& h : split_csv_line(line)) {
        table.header.push_back(strip(h));
    }
    const int n_cols = static_cast<int>(table.header.size());
    if (n_cols < 1) {
        throw IoError("'" + path + "' has no columns", 1, 0);
    }

    std::vector<std::vector<double>> rows;
    int row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (strip(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != n_cols) {
            throw IoError("row " + std::to_string(row_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(n_cols),
                          row_no, 0);
        }
        std::vector<double> vals(n_cols);
        for (int c = 0; c < n_cols; ++c) {
            vals[c] = parse_cell(cells[c], row_no, c + 1);
        }
        rows.push_back(std::move(vals));
    }
    table.values.resize(static_cast<int>(rows.size()), n_cols);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        for (int c = 0; c < n_cols; ++c) {
            table.values(i, c) = rows[i][c];
        }
    }
    return table;
}

ordered_json hypers_to_json(const std::vector<GpHyperparams>& hypers) {
    ordered_json arr = ordered_json::array();
    for (const auto& h : hypers) {
        ordered_json rough = ordered_json::array();
        for (int j = 0; j < h.roughness.size(); ++j) {
            rough.push_back(h.roughness[j]);
        }
        arr.push_back(ordered_json{{"roughness", std::move(rough)}, {"nugget", h.nugget}});
    }
    return arr;
}

std::vector<GpHyperparams> hypers_from_json(const nlohmann::json& arr) {
    std::vector<GpHyperparams> out;
    for (const auto& h : arr) {
        GpHyperparams hp;
        const auto rough = h.at("roughness").get<std::vector<double>>();
        hp.roughness = Eigen::Map<const Vector>(rough.data(), static_cast<long>(rough.size()));
        hp.nugget = h.at("nugget").get<double>();
        out.push_back(std::move(hp));
    }
    return out;
}

ordered_json histogram_to_json(const std::map<int, double>& hist) {
    ordered_json out = ordered_json::object();
    for (const auto& [r, p] : hist) {
        out[std::to_string(r)] = p;
    }
    return out;
}

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::ordered_json tessellation_to_json(const Tessellation& tess) {
    ordered_json centres = ordered_json::array();
    for (int i = 0; i < tess.k(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < tess.dim(); ++j) {
            row.push_back(tess.centres()(i, j));
        }
        centres.push_back(std::move(row));
    }
    ordered_json rel = ordered_json::array();
    for (const auto& block : tess.blocks()) {
        rel.push_back(block);
    }
    return ordered_json{{"centres", std::move(centres)}, {"relationship", std::move(rel)}};
}

Tessellation tessellation_from_json(const nlohmann::json& j) {
    const auto& centres = j.at("centres");
    const int k = static_cast<int>(centres.size());
    if (k < 1) {
        throw IoError("tessellation with no centres");
    }
    const int d = static_cast<int>(centres[0].size());
    Matrix m(k, d);
    for (int i = 0; i < k; ++i) {
        for (int c = 0; c < d; ++c) {
            m(i, c) = centres[i][c].get<double>();
        }
    }
    std::vector<std::vector<int>> blocks;
    for (const auto& b : j.at("relationship")) {
        blocks.push_back(b.get<std::vector<int>>());
    }
    return Tessellation(std::move(m), std::move(blocks));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Rescaler Rescaler::from_data(const Matrix& inputs) {
    Rescaler r;
    r.lo = inputs.colwise().minCoeff().transpose();
    r.hi = inputs.colwise().maxCoeff().transpose();
    return r;
}

Rescaler Rescaler::identity(int d) {
    Rescaler r;
    r.lo = Vector::Zero(d);
    r.hi = Vector::Ones(d);
    return r;
}

Vector Rescaler::scale(const Vector& x) const {
    Vector u(x.size());
    for (int j = 0; j < x.size(); ++j) {
        const double span = hi[j] - lo[j];
        u[j] = span > 0.0 ? (x[j] - lo[j]) / span : 0.0;
    }
    return u;
}

Vector Rescaler::unscale(const Vector& u) const {
    Vector x(u.size());
    for (int j = 0; j < u.size(); ++j) {
        const double span = hi[j] - lo[j];
        x[j] = span > 0.0 ? lo[j] + u[j] * span : lo[j];
    }
    return x;
}

Matrix Rescaler::scale_rows(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i) {
        out.row(i) = scale(x.row(i).transpose()).transpose();
    }
    return out;
}

Matrix Rescaler::unscale_rows(const Matrix& u) const {
    Matrix out(u.rows(), u.cols());
    for (int i = 0; i < u.rows(); ++i) {
        out.row(i) = unscale(u.row(i).transpose()).transpose();
    }
    return out;
}

Dataset read_training_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    const int n_cols = static_cast<int>(table.header.size());
    if (n_cols < 2) {
        throw IoError("'" + path + "' needs at least one input column and one output column",
                      1, 0);
    }
    if (table.values.rows() < 1) {
        throw IoError("'" + path + "' has no data rows", 1, 0);
    }
    Dataset ds;
    ds.input_names.assign(table.header.begin(), table.header.end() - 1);
    ds.output_name = table.header.back();
    Matrix inputs = table.values.leftCols(n_cols - 1);
    Vector outputs = table.values.rightCols(1);
    ds.rescaler = Rescaler::from_data(inputs);
    ds.scaled = TrainingSet(ds.rescaler.scale_rows(inputs), outputs);
    ds.raw = TrainingSet(std::move(inputs), std::move(outputs));
    return ds;
}

Matrix read_points_csv(const std::string& path) {
    return read_csv(path).values;
}

void write_points_csv(const std::string& path, const std::vector<std::string>& header,
                      const Matrix& rows) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    for (size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (int i = 0; i < rows.rows(); ++i) {
        for (int j = 0; j < rows.cols(); ++j) {
            out << (j ? "," : "") << format_double(rows(i, j));
        }
        out << "\n";
    }
}

void write_grid_csv(const std::string& path, const std::vector<std::string>& input_names,
                    const Matrix& points, const Vector& mean, const Vector* truth) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    for (size_t i = 0; i < input_names.size(); ++i) {
        out << (i ? "," : "") << input_names[i];
    }
    out << ",mean";
    if (truth) {
        out << ",truth,squared_error";
    }
    out << "\n";
    for (int i = 0; i < points.rows(); ++i) {
        for (int j = 0; j < points.cols(); ++j) {
            out << (j ? "," : "") << format_double(points(i, j));
        }
        out << "," << format_double(mean[i]);
        if (truth) {
            const double err = mean[i] - (*truth)[i];
            out << "," << format_double((*truth)[i]) << "," << format_double(err * err);
        }
        out << "\n";
    }
}

void save_chain(const std::string& path, const Chain& chain, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    for (const auto& s : chain.samples) {
        ordered_json line{{"iteration", s.iteration},
                          {"log_posterior", s.log_posterior},
                          {"tessellation", tessellation_to_json(s.tess)},
                          {"region_hyperparams", hypers_to_json(s.region_hypers)}};
        out << line.dump() << "\n";
    }

    ordered_json lo = ordered_json::array(), hi = ordered_json::array();
    for (int j = 0; j < dataset.rescaler.lo.size(); ++j) {
        lo.push_back(dataset.rescaler.lo[j]);
        hi.push_back(dataset.rescaler.hi[j]);
    }
    const char* move_names[4] = {"birth", "death", "move", "change"};
    ordered_json tallies = ordered_json::object();
    for (int m = 0; m < 4; ++m) {
        tallies[move_names[m]] = ordered_json{
            {"proposed", chain.tallies[m].proposed}, {"accepted", chain.tallies[m].accepted}};
    }
    ordered_json meta{{"seed", chain.config.seed},
                      {"lambda", chain.config.prior.lambda},
                      {"n_iterations", chain.config.n_iterations},
                      {"burn_in_fraction", chain.config.burn_in_fraction},
                      {"thinning", chain.config.thinning},
                      {"deterministic", chain.config.deterministic},
                      {"n_data", dataset.scaled.n()},
                      {"bounds", ordered_json{{"lo", lo}, {"hi", hi}}},
                      {"columns", ordered_json{{"inputs", dataset.input_names},
                                               {"output", dataset.output_name}}},
                      {"acceptance", std::move(tallies)}};
    std::ofstream meta_out(path + ".meta.json");
    if (!meta_out) {
        throw IoError("cannot write '" + path + ".meta.json'");
    }
    meta_out << meta.dump(2) << "\n";
}

LoadedChain load_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    LoadedChain out;
    std::string line;
    int line_no = 0;
    double best = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError("bad JSONL at line " + std::to_string(line_no) + ": " + e.what(),
                          line_no, 0);
        }
        ChainSample s{tessellation_from_json(j.at("tessellation")),
                      j.at("log_posterior").get<double>(),
                      hypers_from_json(j.at("region_hyperparams")),
                      j.at("iteration").get<int>()};
        if (s.log_posterior > best) {
            best = s.log_posterior;
            out.chain.map_index = static_cast<int>(out.chain.samples.size());
        }
        out.chain.samples.push_back(std::move(s));
    }
    if (out.chain.samples.empty()) {
        throw IoError("'" + path + "' holds no samples");
    }

    std::ifstream meta_in(path + ".meta.json");
    if (!meta_in) {
        throw IoError("cannot open '" + path + ".meta.json'");
    }
    nlohmann::json meta;
    meta_in >> meta;
    out.chain.config.seed = meta.at("seed").get<std::uint64_t>();
    out.chain.config.prior.lambda = meta.at("lambda").get<double>();
    out.chain.config.n_iterations = meta.at("n_iterations").get<int>();
    out.chain.config.burn_in_fraction = meta.at("burn_in_fraction").get<double>();
    out.chain.config.thinning = meta.at("thinning").get<int>();
    out.chain.config.deterministic = meta.at("deterministic").get<bool>();
    out.chain.n_iterations = out.chain.config.n_iterations;
    const auto lo = meta.at("bounds").at("lo").get<std::vector<double>>();
    const auto hi = meta.at("bounds").at("hi").get<std::vector<double>>();
    out.rescaler.lo = Eigen::Map<const Vector>(lo.data(), static_cast<long>(lo.size()));
    out.rescaler.hi = Eigen::Map<const Vector>(hi.data(), static_cast<long>(hi.size()));
    out.input_names = meta.at("columns").at("inputs").get<std::vector<std::string>>();
    out.output_name = meta.at("columns").at("output").get<std::string>();
    return out;
}

void write_benchmark_report(const std::string& path, const BenchmarkReport& report) {
    ordered_json j{{"scenario", report.scenario},
                   {"seed", report.seed},
                   {"lambda", report.lambda},
                   {"n_s", report.n_s},
                   {"n_data", report.n_data},
                   {"mse_proposed", report.mse_proposed},
                   {"mse_single_gp", report.mse_single_gp},
                   {"region_count_posterior", histogram_to_json(report.region_count_posterior)},
                   {"runtime_seconds", report.runtime_seconds},
                   {"move_acceptance", report.move_acceptance},
                   {"literature_values", report.literature_values}};
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

void write_adaptive_report(const std::string& path, const AdaptiveReport& report) {
    ordered_json j{{"scenario", "diamond_adaptive"},
                   {"seed", report.seed},
                   {"lambda", report.lambda},
                   {"n_s", report.n_s},
                   {"mse_base", report.mse_base},
                   {"mse_boundary", report.mse_boundary},
                   {"mse_sobol", report.mse_sobol},
                   {"mse_max_variance", report.mse_maxvar},
                   {"region_posterior_before", histogram_to_json(report.region_posterior_before)},
                   {"region_posterior_after", histogram_to_json(report.region_posterior_after)},
                   {"boundary_points", matrix_to_json(report.boundary_points)},
                   {"sobol_points", matrix_to_json(report.sobol_added)},
                   {"max_variance_points", matrix_to_json(report.maxvar_points)},
                   {"runtime_seconds", report.runtime_seconds},
                   {"literature_values", report.literature_values}};
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

}  // namespace vorgp
