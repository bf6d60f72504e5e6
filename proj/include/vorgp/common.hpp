#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vorgp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Argument/precondition violations (dimension mismatches, bad ranges).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Fewer data points than the weak-prior model can support (n < q + 3).
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Covariance factorisation failed or produced nonsense; carries the
// offending point pair when that is the diagnosed cause.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& msg, int i = -1, int j = -1)
        : std::runtime_error(msg), point_i(i), point_j(j) {}
    int point_i;
    int point_j;
};

// Zero-residual data: sigma-hat collapses and the likelihood is unbounded.
class DegenerateFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested a region boundary from a model that has a single region.
class NoBoundaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; row/column are 1-based, 0 when not applicable.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& msg, int row = 0, int col = 0)
        : std::runtime_error(msg), row(row), col(col) {}
    int row;
    int col;
};

}  // namespace vorgp
