#pragma once

#include "vorgp/common.hpp"
#include "vorgp/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vorgp {

// A Voronoi tessellation of [0,1]^d whose cells are grouped into regions.
// The grouping is a set partition of the k centres: `blocks()[i]` lists the
// centre indices forming region i.  Values are immutable after construction;
// edits happen by building a new Tessellation.
//
// Blocks are kept in canonical order (members ascending, blocks ordered by
// smallest member) so that equal partitions compare and serialise equally.
class Tessellation {
public:
    Tessellation(Matrix centres, std::vector<std::vector<int>> blocks);

    int k() const { return static_cast<int>(centres_.rows()); }
    int r() const { return static_cast<int>(blocks_.size()); }
    int dim() const { return static_cast<int>(centres_.cols()); }

    const Matrix& centres() const { return centres_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int region_of_centre(int cell) const { return region_of_centre_[cell]; }

    // single-cell tessellation at the domain midpoint, always valid
    static Tessellation single_cell(int dim);

    bool operator==(const Tessellation& other) const;

    // stable key for deduplicating identical samples
    std::string signature() const;

private:
    Matrix centres_;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> region_of_centre_;
};

// Index of the nearest centre under Euclidean distance; ties on the
// (measure-zero) bisector go to the lowest index.
int assign_cell(const Vector& x, const Matrix& centres);

int assign_region(const Vector& x, const Tessellation& tess);

// k-th Bell number, exact; guarded to k <= 25 (the largest that fits in
// 64 bits).
std::uint64_t bell_number(int k);

// log of the k-th Bell number, valid for k up to 64.
double log_bell_number(int k);

struct RegionAssignment {
    std::vector<int> region_of_point;  // one entry per data point
    std::vector<int> counts;           // points per region, length r
};

RegionAssignment partition_data(const TrainingSet& data, const Tessellation& tess);

}  // namespace vorgp
