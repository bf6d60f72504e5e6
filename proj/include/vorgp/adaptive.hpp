#pragma once

#include "vorgp/posterior.hpp"
#include "vorgp/predict.hpp"
#include "vorgp/sobol.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace vorgp {

// Points straddling-localised on the boundary of one region: each point was
// obtained by bisecting a segment whose endpoints fall on different sides,
// so a ball of radius `tolerance` around it contains both memberships (the
// witnesses are kept in inner_points/outer_points).
struct CandidateSet {
    Matrix points;        // n x d, midpoints of the final brackets
    Matrix inner_points;  // assigned to the target region
    Matrix outer_points;  // assigned elsewhere
    int region_id = -1;
    double tolerance = 1e-6;
    bool complete = true;  // false when the draw budget ran out early
};

// Sample n_star boundary points of the given region by drawing uniform
// point pairs with opposite membership and bisecting.  Each candidate uses
// an independent sub-stream of `seed`, so the parallel and serial versions
// produce identical output.
CandidateSet boundary_candidates(const FittedModel& model, int region_id, int n_star,
                                 std::uint64_t seed, int budget_per_candidate = 200,
                                 double tolerance = 1e-6);
CandidateSet boundary_candidates_serial(const FittedModel& model, int region_id, int n_star,
                                        std::uint64_t seed, int budget_per_candidate = 200,
                                        double tolerance = 1e-6);

// Iteratively pick the candidate farthest from all existing-plus-selected
// points (maximin); ties go to the lowest candidate index.
Matrix greedy_maximin_select(const Matrix& candidates, const Matrix& existing, int n_p);

struct EpsilonPairs {
    // first = displaced toward the cell centre, second = away from it
    std::vector<std::pair<Vector, Vector>> pairs;
    int skipped = 0;  // boundary points coinciding with their centre
};

// For each boundary point x, the two points x -+ eps (x - c) on the line
// through the centre c of x's cell, clipped to the unit cube.
EpsilonPairs epsilon_pairs(const Matrix& selected, const FittedModel& model, double epsilon);

// Pool indices ordered by decreasing mixture-variance proxy (one-shot
// ranking, ties by index).
std::vector<int> rank_by_mixture_variance(const Chain& chain, const TrainingSet& data,
                                          const Matrix& pool);

// The n_p pool points with the largest proxy variance.
Matrix max_variance_points(const Chain& chain, const TrainingSet& data, const Matrix& pool,
                           int n_p);

}  // namespace vorgp
