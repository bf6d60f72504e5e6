#pragma once

#include "vorgp/common.hpp"

#include <vector>

namespace vorgp {

// Paired inputs on the unit hypercube and scalar outputs.
struct TrainingSet {
    Matrix inputs;   // n x d, one point per row
    Vector outputs;  // n

    TrainingSet() = default;
    TrainingSet(Matrix x, Vector y) : inputs(std::move(x)), outputs(std::move(y)) {
        if (inputs.rows() != outputs.size()) {
            throw ArgumentError("TrainingSet: inputs and outputs disagree on n");
        }
        if (inputs.rows() < 1) {
            throw ArgumentError("TrainingSet: need at least one point");
        }
    }

    int n() const { return static_cast<int>(inputs.rows()); }
    int dim() const { return static_cast<int>(inputs.cols()); }

    TrainingSet subset(const std::vector<int>& idx) const {
        Matrix x(static_cast<int>(idx.size()), inputs.cols());
        Vector y(static_cast<int>(idx.size()));
        for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
            x.row(i) = inputs.row(idx[i]);
            y[i] = outputs[idx[i]];
        }
        return {std::move(x), std::move(y)};
    }
};

}  // namespace vorgp
