#include "vorgp/predict.hpp"

#include <cmath>
#include <exception>
#include <unordered_map>

namespace vorgp {

PredictiveT predict_sample(const FittedModel& model, const TrainingSet& data, const Vector& x) {
    if (x.size() != model.tess.dim() || data.dim() != model.tess.dim()) {
        throw ArgumentError("predict_sample: dimension mismatch");
    }
    const int region = assign_region(x, model.tess);
    return gp_predict(model.region_fits[region], model.region_data[region], x);
}

SamplePredictor::SamplePredictor(const ChainSample& sample, const TrainingSet& data)
    : tess_(sample.tess) {
    if (static_cast<int>(sample.region_hypers.size()) != tess_.r()) {
        throw ArgumentError("SamplePredictor: hyperparameters do not match regions");
    }
    const RegionAssignment assign = partition_data(data, tess_);
    std::vector<std::vector<int>> groups(tess_.r());
    for (int i = 0; i < data.n(); ++i) {
        groups[assign.region_of_point[i]].push_back(i);
    }
    fits_.reserve(tess_.r());
    region_data_.reserve(tess_.r());
    for (int r = 0; r < tess_.r(); ++r) {
        TrainingSet sub = data.subset(groups[r]);
        fits_.push_back(fit_gp(sub, sample.region_hypers[r]));
        region_data_.push_back(std::move(sub));
    }
}

double SamplePredictor::mean(const Vector& x) const {
    const int region = assign_region(x, tess_);
    return gp_mean(fits_[region], region_data_[region], x);
}

PredictiveT SamplePredictor::predict(const Vector& x) const {
    const int region = assign_region(x, tess_);
    return gp_predict(fits_[region], region_data_[region], x);
}

ChainPredictor::ChainPredictor(const Chain& chain, const TrainingSet& data) {
    if (chain.samples.empty()) {
        throw ArgumentError("ChainPredictor: empty chain");
    }
    std::unordered_map<std::string, int> seen;
    for (const auto& s : chain.samples) {
        const std::string sig = s.tess.signature();
        auto it = seen.find(sig);
        if (it == seen.end()) {
            seen.emplace(sig, static_cast<int>(predictors_.size()));
            predictors_.emplace_back(s, data);
            weights_.push_back(1.0);
        } else {
            weights_[it->second] += 1.0;
        }
        total_weight_ += 1.0;
    }
}

double ChainPredictor::integrated_mean(const Vector& x) const {
    double acc = 0.0;
    for (int u = 0; u < n_unique(); ++u) {
        acc += weights_[u] * predictors_[u].mean(x);
    }
    return acc / total_weight_;
}

double ChainPredictor::mixture_variance(const Vector& x) const {
    double mean_acc = 0.0;
    double sq_acc = 0.0;
    double scale_acc = 0.0;
    for (int u = 0; u < n_unique(); ++u) {
        const PredictiveT p = predictors_[u].predict(x);
        mean_acc += weights_[u] * p.mean;
        sq_acc += weights_[u] * p.mean * p.mean;
        scale_acc += weights_[u] * p.scale * p.scale;
    }
    mean_acc /= total_weight_;
    sq_acc /= total_weight_;
    scale_acc /= total_weight_;
    const double var_means = std::max(0.0, sq_acc - mean_acc * mean_acc);
    return var_means + scale_acc;
}

namespace {

PredictionGrid surface_impl(const Chain& chain, const TrainingSet& data,
                            const Matrix& grid_points, bool parallel) {
    const ChainPredictor pred(chain, data);
    PredictionGrid out;
    out.points = grid_points;
    out.integrated_mean.resize(grid_points.rows());

    std::exception_ptr error;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < grid_points.rows(); ++i) {
            try {
                out.integrated_mean[i] = pred.integrated_mean(grid_points.row(i).transpose());
            } catch (...) {
#pragma omp critical
                error = std::current_exception();
            }
        }
        if (error) {
            std::rethrow_exception(error);
        }
    } else {
        for (int i = 0; i < grid_points.rows(); ++i) {
            out.integrated_mean[i] = pred.integrated_mean(grid_points.row(i).transpose());
        }
    }
    return out;
}

}  // namespace

PredictionGrid integrated_surface(const Chain& chain, const TrainingSet& data,
                                  const Matrix& grid_points) {
    return surface_impl(chain, data, grid_points, true);
}

PredictionGrid integrated_surface_serial(const Chain& chain, const TrainingSet& data,
                                         const Matrix& grid_points) {
    return surface_impl(chain, data, grid_points, false);
}

double mse(const Vector& predictions, const Vector& truth) {
    if (predictions.size() != truth.size()) {
        throw ArgumentError("mse: length mismatch");
    }
    if (predictions.size() < 1) {
        throw ArgumentError("mse: need at least one value");
    }
    return (predictions - truth).squaredNorm() / static_cast<double>(predictions.size());
}

}  // namespace vorgp
