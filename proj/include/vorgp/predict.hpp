#pragma once

#include "vorgp/posterior.hpp"
#include "vorgp/rjmcmc.hpp"

#include <optional>
#include <vector>

namespace vorgp {

// Route x to its region and predict with that region's fit and data only.
PredictiveT predict_sample(const FittedModel& model, const TrainingSet& data, const Vector& x);

// One stored chain sample materialised for repeated prediction: the region
// fits are rebuilt from the stored hyperparameters (no optimisation).
class SamplePredictor {
public:
    SamplePredictor(const ChainSample& sample, const TrainingSet& data);

    double mean(const Vector& x) const;
    PredictiveT predict(const Vector& x) const;

    const Tessellation& tess() const { return tess_; }

private:
    Tessellation tess_;
    std::vector<GpFit> fits_;
    std::vector<TrainingSet> region_data_;
};

// Stored samples deduplicated by tessellation (rejected iterations replicate
// the previous sample, so chains carry many repeats); weights restore the
// equally-weighted average over all stored samples.
class ChainPredictor {
public:
    ChainPredictor(const Chain& chain, const TrainingSet& data);

    int n_unique() const { return static_cast<int>(predictors_.size()); }
    double weight(int u) const { return weights_[u]; }
    const SamplePredictor& predictor(int u) const { return predictors_[u]; }

    // pointwise mean of the per-sample mean surfaces
    double integrated_mean(const Vector& x) const;

    // across-sample predictive variance proxy:
    // Var_w(per-sample means) + E_w[per-sample scale^2]
    double mixture_variance(const Vector& x) const;

private:
    std::vector<SamplePredictor> predictors_;
    std::vector<double> weights_;
    double total_weight_ = 0.0;
};

struct PredictionGrid {
    Matrix points;
    Vector integrated_mean;
    std::optional<Vector> truth;
};

// Monte-Carlo integrated mean surface over the posterior sample, evaluated
// at each grid row.  The parallel version distributes grid points across
// threads; per-point arithmetic is identical to the serial reference.
PredictionGrid integrated_surface(const Chain& chain, const TrainingSet& data,
                                  const Matrix& grid_points);
PredictionGrid integrated_surface_serial(const Chain& chain, const TrainingSet& data,
                                         const Matrix& grid_points);

double mse(const Vector& predictions, const Vector& truth);

}  // namespace vorgp
