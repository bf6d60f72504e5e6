#include "vorgp/posterior.hpp"

#include <cmath>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vorgp {

namespace {

constexpr int kMinRegionPoints = GpFit::basis_dim + 3;  // weak prior needs n > q + 2

std::vector<std::vector<int>> group_points(const RegionAssignment& assign, int r) {
    std::vector<std::vector<int>> groups(r);
    for (int i = 0; i < static_cast<int>(assign.region_of_point.size()); ++i) {
        groups[assign.region_of_point[i]].push_back(i);
    }
    return groups;
}

bool counts_valid(const RegionAssignment& assign) {
    for (int c : assign.counts) {
        if (c < kMinRegionPoints) {
            return false;
        }
    }
    return true;
}

std::string index_key(const std::vector<int>& idx) {
    return std::string(reinterpret_cast<const char*>(idx.data()), idx.size() * sizeof(int));
}

}  // namespace

double log_prior(const Tessellation& tess, const PriorConfig& prior) {
    const int k = tess.k();
    double lp = k * std::log(prior.lambda) - std::lgamma(k + 1.0) - log_bell_number(k);
    if (prior.include_region_count_factor) {
        lp -= std::log(static_cast<double>(k));
    }
    return lp;
}

double integrated_term_constant(int n_region) {
    const int q = GpFit::basis_dim;
    const double half_df = 0.5 * (n_region - q);
    return std::lgamma(half_df) + half_df * std::log(2.0 / (n_region - q - 2.0));
}

double integrated_term(const GpFit& fit) {
    return log_marginal_likelihood(fit) + integrated_term_constant(fit.n);
}

std::optional<double> log_integrated_likelihood(const TrainingSet& data,
                                                const Tessellation& tess,
                                                const std::vector<GpFit>& fits) {
    if (static_cast<int>(fits.size()) != tess.r()) {
        throw ArgumentError("log_integrated_likelihood: one fit per region required");
    }
    const RegionAssignment assign = partition_data(data, tess);
    if (!counts_valid(assign)) {
        return std::nullopt;
    }
    double total = 0.0;
    for (int r = 0; r < tess.r(); ++r) {
        if (fits[r].n != assign.counts[r]) {
            throw ArgumentError("log_integrated_likelihood: fit/region size mismatch");
        }
        total += integrated_term(fits[r]);
    }
    return total;
}

std::optional<FittedModel> evaluate_model(const TrainingSet& data, const Tessellation& tess,
                                          const PriorConfig& prior, bool deterministic,
                                          const FitConfig& fit_cfg) {
    const RegionAssignment assign = partition_data(data, tess);
    if (!counts_valid(assign)) {
        return std::nullopt;
    }
    auto groups = group_points(assign, tess.r());

    FittedModel model{tess, {}, {}, {}, 0.0, 0.0, 0.0};
    model.region_fits.resize(tess.r());
    model.region_data.reserve(tess.r());
    try {
        for (int r = 0; r < tess.r(); ++r) {
            TrainingSet sub = data.subset(groups[r]);
            const FitResult res = fit_hyperparams(sub, deterministic, fit_cfg);
            model.region_fits[r] = fit_gp(sub, res.hyper);
            model.region_data.push_back(std::move(sub));
        }
    } catch (const ConditioningError&) {
        return std::nullopt;
    }
    model.region_points = std::move(groups);
    model.log_prior_value = log_prior(tess, prior);
    model.log_integrated_lik = 0.0;
    for (const auto& fit : model.region_fits) {
        model.log_integrated_lik += integrated_term(fit);
    }
    model.log_posterior = model.log_prior_value + model.log_integrated_lik;
    return model;
}

ModelEvaluator::ModelEvaluator(const TrainingSet& data, PriorConfig prior, bool deterministic,
                               FitConfig fit_cfg)
    : data_(data), prior_(prior), deterministic_(deterministic), fit_cfg_(fit_cfg) {}

std::optional<ModelEvaluator::Evaluation> ModelEvaluator::evaluate(const Tessellation& tess) {
    const RegionAssignment assign = partition_data(data_, tess);
    if (!counts_valid(assign)) {
        return std::nullopt;
    }
    auto groups = group_points(assign, tess.r());

    std::vector<std::string> keys(groups.size());
    std::vector<int> miss_regions;
    for (int r = 0; r < static_cast<int>(groups.size()); ++r) {
        keys[r] = index_key(groups[r]);
        if (cache_.find(keys[r]) == cache_.end()) {
            miss_regions.push_back(r);
        } else {
            ++hits_;
        }
    }
    misses_ += static_cast<long>(miss_regions.size());

    if (!miss_regions.empty()) {
        std::vector<std::optional<RegionFitRecord>> fitted(miss_regions.size());
        bool conditioning_failure = false;
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < static_cast<int>(miss_regions.size()); ++t) {
            try {
                const int r = miss_regions[t];
                const TrainingSet sub = data_.subset(groups[r]);
                const FitResult res = fit_hyperparams(sub, deterministic_, fit_cfg_);
                fitted[t] = RegionFitRecord{res.hyper, res.log_lik, sub.n()};
            } catch (const ConditioningError&) {
#pragma omp critical
                conditioning_failure = true;
            } catch (...) {
#pragma omp critical
                error = std::current_exception();
            }
        }
        if (error) {
            std::rethrow_exception(error);
        }
        if (conditioning_failure) {
            return std::nullopt;
        }
        for (int t = 0; t < static_cast<int>(miss_regions.size()); ++t) {
            cache_.emplace(keys[miss_regions[t]], std::move(*fitted[t]));
        }
    }

    Evaluation ev;
    ev.log_prior = log_prior(tess, prior_);
    ev.region_hypers.reserve(groups.size());
    ev.region_sizes = assign.counts;
    for (int r = 0; r < static_cast<int>(groups.size()); ++r) {
        const RegionFitRecord& rec = cache_.at(keys[r]);
        ev.log_integrated_lik += rec.log_lik + integrated_term_constant(rec.n);
        ev.region_hypers.push_back(rec.hyper);
    }
    ev.log_posterior = ev.log_prior + ev.log_integrated_lik;
    return ev;
}

std::optional<FittedModel> ModelEvaluator::full_model(const Tessellation& tess,
                                                      const FitConfig& cfg) const {
    return evaluate_model(data_, tess, prior_, deterministic_, cfg);
}

}  // namespace vorgp
