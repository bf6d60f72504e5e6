#pragma once

#include "vorgp/common.hpp"

#include <cstdint>
#include <vector>

namespace vorgp {

// Sobol sequence with Joe-Kuo D6 direction numbers, Gray-code stepping.
// The all-zero leading point is skipped: the first point returned is
// (0.5, 0.5, ...).  Supports up to 16 dimensions.
class SobolSequence {
public:
    explicit SobolSequence(int dim);

    static constexpr int max_dim = 16;

    int dim() const { return dim_; }

    // next point in [0,1)^d
    Vector next();

private:
    int dim_;
    std::uint32_t count_ = 0;
    std::vector<std::uint32_t> state_;                 // per-dimension XOR state
    std::vector<std::vector<std::uint32_t>> dirs_;     // direction integers, 32 bits
};

// First n points of the d-dimensional sequence as rows.
Matrix sobol_points(int n, int d);

}  // namespace vorgp
