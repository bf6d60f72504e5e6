#pragma once

#include "vorgp/gp.hpp"
#include "vorgp/rng.hpp"
#include "vorgp/types.hpp"

#include <Eigen/Dense>

namespace test_util {

using vorgp::Matrix;
using vorgp::Vector;

inline Matrix random_points(int n, int d, vorgp::RngStream& rng) {
    Matrix m(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = rng.uniform01();
        }
    }
    return m;
}

// Draw one sample path of a zero-nugget Gaussian process with constant mean
// at the given inputs (for parameter-recovery checks).
inline Vector sample_gp(const Matrix& inputs, const Vector& roughness, double mean,
                        double scale, vorgp::RngStream& rng) {
    vorgp::GpHyperparams hyper{roughness, 0.0};
    Matrix cov = vorgp::build_cov(inputs, hyper);
    cov.diagonal().array() += 1e-8;
    const Matrix l = Eigen::LLT<Matrix>(cov).matrixL();
    Vector z(inputs.rows());
    for (int i = 0; i < z.size(); ++i) {
        z[i] = rng.normal();
    }
    return Vector::Constant(inputs.rows(), mean) + scale * (l * z);
}

// Marginal likelihood terms computed with explicit dense inverses (no
// Cholesky), the independent route used to check the fitted path.
struct DenseOracle {
    double log_lik;
    double beta;
    double sigma2;
    double mean_at;    // m*(x) for the stored query
    double c_star_at;  // c*(x, x)
};

inline DenseOracle dense_gp_oracle(const Matrix& x, const Vector& y,
                                   const vorgp::GpHyperparams& hyper, double jitter,
                                   const Vector& query) {
    const int n = static_cast<int>(x.rows());
    const int q = 1;
    Matrix a = vorgp::build_cov(x, hyper);
    a.diagonal().array() += jitter;
    const Matrix a_inv = a.fullPivLu().inverse();
    const double log_det_a = std::log(a.fullPivLu().determinant());
    const Vector h = Vector::Ones(n);
    const double g = h.dot(a_inv * h);
    const double beta = h.dot(a_inv * y) / g;
    const Vector resid = y - Vector::Constant(n, beta);
    const double s = resid.dot(a_inv * resid);
    const double sigma2 = s / (n - q - 2);

    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = vorgp::corr_gaussian(query, x.row(i).transpose(), hyper.roughness);
    }
    const double mean = beta + v.dot(a_inv * resid);
    const double hc = 1.0 - v.dot(a_inv * h);
    const double c_star = 1.0 - v.dot(a_inv * v) + hc * hc / g;

    return {-0.5 * log_det_a - 0.5 * std::log(g) + 0.5 * (q - n) * std::log(sigma2), beta,
            sigma2, mean, c_star};
}

}  // namespace test_util
