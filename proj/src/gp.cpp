#include "vorgp/gp.hpp"

#include "vorgp/sobol.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace vorgp {

namespace {

constexpr double kSigmaFloor = 1e-12;

std::pair<int, int> closest_pair(const Matrix& inputs) {
    int bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inputs.rows(); ++i) {
        for (int j = i + 1; j < inputs.rows(); ++j) {
            const double d2 = (inputs.row(i) - inputs.row(j)).squaredNorm();
            if (d2 < best) {
                best = d2;
                bi = i;
                bj = j;
            }
        }
    }
    return {bi, bj};
}

// ---------------------------------------------------------------------------
// Profile-likelihood kernel for one fixed data set.  Per-dimension squared
// difference matrices are precomputed once so that each hyperparameter
// evaluation costs one elementwise exp and one Cholesky.
// ---------------------------------------------------------------------------
class LikelihoodKernel {
public:
    explicit LikelihoodKernel(const TrainingSet& data)
        : n_(data.n()), d_(data.dim()), y_(data.outputs) {
        sqdiff_.reserve(d_);
        for (int j = 0; j < d_; ++j) {
            Matrix m(n_, n_);
            for (int a = 0; a < n_; ++a) {
                for (int b = 0; b < n_; ++b) {
                    const double diff = data.inputs(a, j) - data.inputs(b, j);
                    m(a, b) = diff * diff;
                }
            }
            sqdiff_.push_back(std::move(m));
        }
        a_.resize(n_, n_);
        llt_ = Eigen::LLT<Matrix>(n_);
    }

    struct Terms {
        bool ok = false;
        double log_det_a = 0.0;
        double ht_ainv_h = 0.0;
        double beta = 0.0;
        double sigma2 = 0.0;   // floored
        bool degenerate = false;
        double log_lik = -std::numeric_limits<double>::infinity();
    };

    Terms evaluate(const Vector& roughness, double nugget) {
        Terms t;
        a_.noalias() = -roughness[0] * sqdiff_[0];
        for (int j = 1; j < d_; ++j) {
            a_.noalias() -= roughness[j] * sqdiff_[j];
        }
        a_ = a_.array().exp();
        const double diag_add = nugget > 0.0 ? nugget : kZeroNuggetJitter;
        a_.diagonal().array() += diag_add;

        llt_.compute(a_);
        if (llt_.info() != Eigen::Success) {
            return t;
        }
        const auto& l = llt_.matrixLLT();
        double log_det = 0.0;
        for (int i = 0; i < n_; ++i) {
            log_det += std::log(l(i, i));
        }
        log_det *= 2.0;

        Vector ly = y_;
        llt_.matrixL().solveInPlace(ly);
        Vector lh = Vector::Ones(n_);
        llt_.matrixL().solveInPlace(lh);
        const double g = lh.squaredNorm();
        if (!(g > 0.0) || !std::isfinite(g)) {
            return t;
        }
        const double hy = lh.dot(ly);
        const double beta = hy / g;
        double s = ly.squaredNorm() - hy * hy / g;
        if (s < 0.0) {
            s = 0.0;
        }
        const int q = GpFit::basis_dim;
        double sigma2 = s / (n_ - q - 2);
        t.degenerate = sigma2 < kSigmaFloor;
        if (t.degenerate) {
            sigma2 = kSigmaFloor;
        }
        t.ok = true;
        t.log_det_a = log_det;
        t.ht_ainv_h = g;
        t.beta = beta;
        t.sigma2 = sigma2;
        t.log_lik = -0.5 * log_det - 0.5 * std::log(g) + 0.5 * (q - n_) * std::log(sigma2);
        return t;
    }

    int n() const { return n_; }
    int dim() const { return d_; }

private:
    int n_;
    int d_;
    Vector y_;
    std::vector<Matrix> sqdiff_;
    Matrix a_;
    Eigen::LLT<Matrix> llt_;
};

// ---------------------------------------------------------------------------
// Nelder-Mead simplex on a box, coordinates clamped to [lo, hi].
// ---------------------------------------------------------------------------
struct SimplexResult {
    Vector x;
    double f = std::numeric_limits<double>::infinity();
    bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                          const Vector& lo, const Vector& hi, int max_evals, double f_tol,
                          double x_tol) {
    const int p = static_cast<int>(x0.size());
    auto clamp = [&](Vector v) {
        for (int j = 0; j < p; ++j) {
            v[j] = std::min(hi[j], std::max(lo[j], v[j]));
        }
        return v;
    };

    std::vector<Vector> xs;
    std::vector<double> fs;
    int evals = 0;
    auto eval = [&](const Vector& v) {
        ++evals;
        return f(v);
    };

    xs.push_back(clamp(x0));
    fs.push_back(eval(xs[0]));
    for (int j = 0; j < p; ++j) {
        Vector v = xs[0];
        const double step = 0.10 * (hi[j] - lo[j]);
        v[j] += (v[j] + step <= hi[j]) ? step : -step;
        xs.push_back(clamp(v));
        fs.push_back(eval(xs.back()));
    }

    auto order = [&] {
        std::vector<int> idx(xs.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Vector> x2(xs.size());
        std::vector<double> f2(xs.size());
        for (size_t i = 0; i < idx.size(); ++i) {
            x2[i] = xs[idx[i]];
            f2[i] = fs[idx[i]];
        }
        xs = std::move(x2);
        fs = std::move(f2);
    };

    SimplexResult out;
    while (evals < max_evals) {
        order();
        const double spread = fs.back() - fs.front();
        double diam = 0.0;
        for (size_t i = 1; i < xs.size(); ++i) {
            diam = std::max(diam, (xs[i] - xs[0]).lpNorm<Eigen::Infinity>());
        }
        if (spread <= f_tol * (1.0 + std::abs(fs.front())) || diam <= x_tol) {
            out.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(p);
        for (int i = 0; i < p; ++i) {
            centroid += xs[i];
        }
        centroid /= p;

        const Vector xr = clamp(centroid + (centroid - xs.back()));
        const double fr = eval(xr);
        if (fr < fs.front()) {
            const Vector xe = clamp(centroid + 2.0 * (centroid - xs.back()));
            const double fe = eval(xe);
            if (fe < fr) {
                xs.back() = xe;
                fs.back() = fe;
            } else {
                xs.back() = xr;
                fs.back() = fr;
            }
        } else if (fr < fs[p - 1]) {
            xs.back() = xr;
            fs.back() = fr;
        } else {
            const Vector xc = clamp(centroid + 0.5 * (xs.back() - centroid));
            const double fc = eval(xc);
            if (fc < fs.back()) {
                xs.back() = xc;
                fs.back() = fc;
            } else {
                for (size_t i = 1; i < xs.size(); ++i) {
                    xs[i] = clamp(xs[0] + 0.5 * (xs[i] - xs[0]));
                    fs[i] = eval(xs[i]);
                }
            }
        }
    }
    order();
    out.x = xs.front();
    out.f = fs.front();
    return out;
}

}  // namespace

double corr_gaussian(const Vector& x, const Vector& x2, const Vector& roughness) {
    if (x.size() != x2.size() || x.size() != roughness.size()) {
        throw ArgumentError("corr_gaussian: dimension mismatch");
    }
    double s = 0.0;
    for (int j = 0; j < x.size(); ++j) {
        const double diff = x[j] - x2[j];
        s += roughness[j] * diff * diff;
    }
    return std::exp(-s);
}

Matrix build_cov(const Matrix& inputs, const GpHyperparams& hyper) {
    const int n = static_cast<int>(inputs.rows());
    if (n < 1) {
        throw ArgumentError("build_cov: need at least one point");
    }
    if (inputs.cols() != hyper.roughness.size()) {
        throw ArgumentError("build_cov: roughness length must match input dimension");
    }
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 1.0 + hyper.nugget;
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int m = 0; m < inputs.cols(); ++m) {
                const double diff = inputs(i, m) - inputs(j, m);
                s += hyper.roughness[m] * diff * diff;
            }
            a(i, j) = a(j, i) = std::exp(-s);
        }
    }
    return a;
}

GpFit fit_gp(const TrainingSet& data, const GpHyperparams& hyper) {
    const int n = data.n();
    const int q = GpFit::basis_dim;
    if (n < q + 3) {
        throw InsufficientDataError("fit_gp: need at least " + std::to_string(q + 3) +
                                    " points, got " + std::to_string(n));
    }
    if (data.dim() != hyper.roughness.size()) {
        throw ArgumentError("fit_gp: roughness length must match input dimension");
    }
    if (hyper.nugget == 0.0 && n >= 2) {
        const auto [i, j] = closest_pair(data.inputs);
        if ((data.inputs.row(i) - data.inputs.row(j)).squaredNorm() < kCoincidentDistSq) {
            throw ConditioningError("fit_gp: duplicate inputs with zero nugget (points " +
                                        std::to_string(i) + ", " + std::to_string(j) + ")",
                                    i, j);
        }
    }

    Matrix a = build_cov(data.inputs, hyper);
    if (hyper.nugget == 0.0) {
        a.diagonal().array() += kZeroNuggetJitter;
    }
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
        const auto [i, j] = closest_pair(data.inputs);
        throw ConditioningError("fit_gp: covariance factorisation failed; closest points " +
                                    std::to_string(i) + ", " + std::to_string(j),
                                i, j);
    }

    GpFit fit;
    fit.hyper = hyper;
    fit.n = n;
    fit.chol_lower = llt.matrixL();
    fit.log_det_a = 2.0 * fit.chol_lower.diagonal().array().log().sum();

    const Vector h = Vector::Ones(n);
    fit.ainv_h = llt.solve(h);
    fit.ht_ainv_h = h.dot(fit.ainv_h);
    const double hy = fit.ainv_h.dot(data.outputs);
    fit.beta_hat = hy / fit.ht_ainv_h;

    const Vector resid = data.outputs - Vector::Constant(n, fit.beta_hat);
    fit.resid_weights = llt.solve(resid);
    double s = resid.dot(fit.resid_weights);
    if (s < 0.0) {
        s = 0.0;
    }
    fit.sigma_hat_sq = s / (n - q - 2);
    if (fit.sigma_hat_sq < kSigmaFloor) {
        fit.sigma_hat_sq = kSigmaFloor;
        fit.degenerate = true;
    }
    return fit;
}

double log_marginal_likelihood(const GpFit& fit) {
    const int q = GpFit::basis_dim;
    return -0.5 * fit.log_det_a - 0.5 * std::log(fit.ht_ainv_h) +
           0.5 * (q - fit.n) * std::log(fit.sigma_hat_sq);
}

double log_marginal_likelihood(const TrainingSet& data, const GpHyperparams& hyper) {
    const GpFit fit = fit_gp(data, hyper);
    if (fit.degenerate) {
        throw DegenerateFitError(
            "log_marginal_likelihood: zero-residual data, likelihood unbounded");
    }
    return log_marginal_likelihood(fit);
}

FitResult fit_hyperparams(const TrainingSet& data, bool deterministic, const FitConfig& cfg) {
    const int q = GpFit::basis_dim;
    if (data.n() < q + 3) {
        throw InsufficientDataError("fit_hyperparams: need at least " + std::to_string(q + 3) +
                                    " points, got " + std::to_string(data.n()));
    }
    const int d = data.dim();
    const int p = deterministic ? d : d + 1;

    LikelihoodKernel kernel(data);
    auto objective = [&](const Vector& z) {
        Vector rough(d);
        for (int j = 0; j < d; ++j) {
            rough[j] = std::exp(z[j]);
        }
        const double nugget = deterministic ? 0.0 : std::exp(z[d]);
        const auto terms = kernel.evaluate(rough, nugget);
        if (!terms.ok) {
            return std::numeric_limits<double>::infinity();
        }
        return -terms.log_lik;
    };

    Vector lo(p), hi(p);
    for (int j = 0; j < d; ++j) {
        lo[j] = std::log(cfg.rough_lo);
        hi[j] = std::log(cfg.rough_hi);
    }
    if (!deterministic) {
        lo[d] = std::log(cfg.nugget_lo);
        hi[d] = std::log(cfg.nugget_hi);
    }

    const Matrix starts = sobol_points(cfg.n_restarts, p);
    SimplexResult best;
    bool have = false;
    for (int r = 0; r < cfg.n_restarts; ++r) {
        Vector z0(p);
        for (int j = 0; j < p; ++j) {
            z0[j] = lo[j] + starts(r, j) * (hi[j] - lo[j]);
        }
        SimplexResult res =
            nelder_mead(objective, z0, lo, hi, cfg.max_evals, cfg.f_tol, cfg.x_tol);
        if (!have || res.f < best.f) {
            best = res;
            have = true;
        }
    }

    FitResult out;
    out.hyper.roughness.resize(d);
    for (int j = 0; j < d; ++j) {
        out.hyper.roughness[j] = std::exp(best.x[j]);
    }
    out.hyper.nugget = deterministic ? 0.0 : std::exp(best.x[d]);
    out.log_lik = -best.f;
    out.converged = best.converged && std::isfinite(best.f);
    return out;
}

double gp_mean(const GpFit& fit, const TrainingSet& data, const Vector& x) {
    if (x.size() != data.dim()) {
        throw ArgumentError("gp_mean: query dimension mismatch");
    }
    if (data.n() != fit.n) {
        throw ArgumentError("gp_mean: fit and data disagree on n");
    }
    const bool exact = fit.hyper.nugget == 0.0;
    double m = fit.beta_hat;
    for (int i = 0; i < fit.n; ++i) {
        double d2 = 0.0;
        double s = 0.0;
        for (int j = 0; j < x.size(); ++j) {
            const double diff = x[j] - data.inputs(i, j);
            d2 += diff * diff;
            s += fit.hyper.roughness[j] * diff * diff;
        }
        if (exact && d2 < kCoincidentDistSq) {
            // zero-jitter limit: the surface interpolates this output
            return data.outputs[i];
        }
        m += std::exp(-s) * fit.resid_weights[i];
    }
    return m;
}

PredictiveT gp_predict(const GpFit& fit, const TrainingSet& data, const Vector& x) {
    if (x.size() != data.dim()) {
        throw ArgumentError("gp_predict: query dimension mismatch");
    }
    if (data.n() != fit.n) {
        throw ArgumentError("gp_predict: fit and data disagree on n");
    }
    const int n = fit.n;
    const int q = GpFit::basis_dim;
    PredictiveT out;
    out.dof = n - q;

    if (fit.hyper.nugget == 0.0) {
        // exact zero-jitter limit at a coincident training input
        for (int i = 0; i < n; ++i) {
            if ((data.inputs.row(i).transpose() - x).squaredNorm() < kCoincidentDistSq) {
                out.mean = data.outputs[i];
                out.scale = 0.0;
                return out;
            }
        }
    }

    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = corr_gaussian(x, data.inputs.row(i).transpose(), fit.hyper.roughness);
    }
    out.mean = gp_mean(fit, data, x);

    Vector lv = v;
    fit.chol_lower.triangularView<Eigen::Lower>().solveInPlace(lv);
    const double v_ainv_v = lv.squaredNorm();
    const double v_ainv_h = v.dot(fit.ainv_h);
    const double h_corr = 1.0 - v_ainv_h;
    double c_star = 1.0 - v_ainv_v + h_corr * h_corr / fit.ht_ainv_h;
    if (c_star < -1e-10) {
        throw ConditioningError("gp_predict: negative predictive variance " +
                                std::to_string(c_star));
    }
    c_star = std::max(c_star, 0.0);
    out.scale =
        std::sqrt(fit.sigma_hat_sq * (static_cast<double>(n - q - 2) / (n - q)) * c_star);
    return out;
}

}  // namespace vorgp
