#include "vorgp/adaptive.hpp"

#include "vorgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vorgp {

namespace {

struct BracketResult {
    bool found = false;
    Vector point;
    Vector inner;
    Vector outer;
};

BracketResult find_boundary_point(const Tessellation& tess, int target, RngStream& rng,
                                  int budget, double tol) {
    const int d = tess.dim();
    BracketResult out;
    for (int attempt = 0; attempt < budget; ++attempt) {
        Vector p(d), q(d);
        for (int j = 0; j < d; ++j) {
            p[j] = rng.uniform01();
        }
        for (int j = 0; j < d; ++j) {
            q[j] = rng.uniform01();
        }
        const bool p_in = assign_region(p, tess) == target;
        const bool q_in = assign_region(q, tess) == target;
        if (p_in == q_in) {
            continue;
        }
        Vector a = p_in ? p : q;  // target side
        Vector b = p_in ? q : p;
        while ((a - b).norm() > tol) {
            const Vector mid = 0.5 * (a + b);
            if (assign_region(mid, tess) == target) {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.found = true;
        out.point = 0.5 * (a + b);
        out.inner = a;
        out.outer = b;
        return out;
    }
    return out;
}

CandidateSet candidates_impl(const FittedModel& model, int region_id, int n_star,
                             std::uint64_t seed, int budget, double tol, bool parallel) {
    if (model.tess.r() < 2) {
        throw NoBoundaryError("boundary_candidates: model has a single region");
    }
    if (region_id < 0 || region_id >= model.tess.r()) {
        throw ArgumentError("boundary_candidates: region id out of range");
    }
    if (n_star < 1) {
        throw ArgumentError("boundary_candidates: n_star must be >= 1");
    }

    std::vector<BracketResult> results(n_star);
    const Tessellation& tess = model.tess;
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int i = 0; i < n_star; ++i) {
            RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            results[i] = find_boundary_point(tess, region_id, rng, budget, tol);
        }
    } else {
        for (int i = 0; i < n_star; ++i) {
            RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            results[i] = find_boundary_point(tess, region_id, rng, budget, tol);
        }
    }

    int n_found = 0;
    for (const auto& r : results) {
        n_found += r.found ? 1 : 0;
    }
    CandidateSet out;
    out.region_id = region_id;
    out.tolerance = tol;
    out.complete = n_found == n_star;
    out.points.resize(n_found, tess.dim());
    out.inner_points.resize(n_found, tess.dim());
    out.outer_points.resize(n_found, tess.dim());
    int row = 0;
    for (const auto& r : results) {
        if (r.found) {
            out.points.row(row) = r.point.transpose();
            out.inner_points.row(row) = r.inner.transpose();
            out.outer_points.row(row) = r.outer.transpose();
            ++row;
        }
    }
    return out;
}

}  // namespace

CandidateSet boundary_candidates(const FittedModel& model, int region_id, int n_star,
                                 std::uint64_t seed, int budget_per_candidate,
                                 double tolerance) {
    return candidates_impl(model, region_id, n_star, seed, budget_per_candidate, tolerance,
                           true);
}

CandidateSet boundary_candidates_serial(const FittedModel& model, int region_id, int n_star,
                                        std::uint64_t seed, int budget_per_candidate,
                                        double tolerance) {
    return candidates_impl(model, region_id, n_star, seed, budget_per_candidate, tolerance,
                           false);
}

Matrix greedy_maximin_select(const Matrix& candidates, const Matrix& existing, int n_p) {
    const int n_star = static_cast<int>(candidates.rows());
    if (n_p < 1 || n_p > n_star) {
        throw ArgumentError("greedy_maximin_select: need 1 <= n_p <= n_star");
    }
    if (existing.rows() > 0 && existing.cols() != candidates.cols()) {
        throw ArgumentError("greedy_maximin_select: dimension mismatch");
    }

    std::vector<double> min_d2(n_star, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n_star; ++i) {
        for (int j = 0; j < existing.rows(); ++j) {
            min_d2[i] = std::min(min_d2[i], (candidates.row(i) - existing.row(j)).squaredNorm());
        }
    }
    std::vector<bool> taken(n_star, false);
    Matrix selected(n_p, candidates.cols());
    for (int s = 0; s < n_p; ++s) {
        int best = -1;
        double best_d2 = -1.0;
        for (int i = 0; i < n_star; ++i) {
            if (!taken[i] && min_d2[i] > best_d2) {
                best_d2 = min_d2[i];
                best = i;
            }
        }
        taken[best] = true;
        selected.row(s) = candidates.row(best);
        for (int i = 0; i < n_star; ++i) {
            if (!taken[i]) {
                min_d2[i] =
                    std::min(min_d2[i], (candidates.row(i) - selected.row(s)).squaredNorm());
            }
        }
    }
    return selected;
}

EpsilonPairs epsilon_pairs(const Matrix& selected, const FittedModel& model, double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) {
        throw ArgumentError("epsilon_pairs: epsilon must lie in (0, 1)");
    }
    EpsilonPairs out;
    for (int i = 0; i < selected.rows(); ++i) {
        const Vector x = selected.row(i).transpose();
        const int cell = assign_cell(x, model.tess.centres());
        const Vector centre = model.tess.centres().row(cell).transpose();
        const Vector offset = x - centre;
        if (offset.norm() < 1e-15) {
            ++out.skipped;
            continue;
        }
        Vector toward = x - epsilon * offset;
        Vector away = x + epsilon * offset;
        for (int j = 0; j < x.size(); ++j) {
            toward[j] = std::clamp(toward[j], 0.0, 1.0);
            away[j] = std::clamp(away[j], 0.0, 1.0);
        }
        out.pairs.emplace_back(std::move(toward), std::move(away));
    }
    return out;
}

std::vector<int> rank_by_mixture_variance(const Chain& chain, const TrainingSet& data,
                                          const Matrix& pool) {
    const ChainPredictor pred(chain, data);
    std::vector<double> var(pool.rows());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < pool.rows(); ++i) {
        var[i] = pred.mixture_variance(pool.row(i).transpose());
    }
    std::vector<int> order(pool.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return var[a] > var[b]; });
    return order;
}

Matrix max_variance_points(const Chain& chain, const TrainingSet& data, const Matrix& pool,
                           int n_p) {
    if (n_p < 1 || n_p > pool.rows()) {
        throw ArgumentError("max_variance_points: need 1 <= n_p <= pool size");
    }
    const std::vector<int> order = rank_by_mixture_variance(chain, data, pool);
    Matrix out(n_p, pool.cols());
    for (int i = 0; i < n_p; ++i) {
        out.row(i) = pool.row(order[i]);
    }
    return out;
}

}  // namespace vorgp
