#pragma once

#include <cstdint>

#include "qbnn/hhl.hpp"
#include "qbnn/overlap.hpp"

namespace qbnn::pipeline {

/// Seeded toy regression: a random rotation of an exactly clock-representable
/// spectrum, with a known binary solution w* and right-hand side b = A·w*.
struct ToyProblem {
    hhl::LinearSystem system;
    Eigen::VectorXi true_weights;
    int clock_qubits = 0;
};

struct ToyPipelineConfig {
    int n_weights = 4;          ///< power of two, <= 8
    std::uint64_t seed = 1;
    std::int64_t shots = 0;     ///< 0 → exact overlap statistics
    double min_fidelity = 0.99; ///< abort threshold after the solver stage
    bool widen_radius = false;  ///< admit radii {h-1, h, h+1} in the search
};

/// Trace of every stage of the hybrid loop.
struct PipelineResult {
    Eigen::VectorXi true_weights;
    Eigen::VectorXi test_mask;
    double hhl_fidelity = 0.0;
    double success_probability = 0.0;
    std::int64_t active_count_estimate = 0;   ///< N̂ from the uniform-state test
    overlap::OverlapEstimate mask_overlap;    ///< vs the uniform-over-mask state
    double euclid_sq_distance = 0.0;          ///< Ed² from the mask overlap
    int hamming_radius = 0;
    std::int64_t candidates_checked = 0;      ///< admissible vertices scored
    std::int64_t search_space = 0;            ///< 2^D for comparison
    Eigen::VectorXi recovered_weights;
    bool recovered_exact = false;
};

ToyProblem make_toy_problem(int n_weights, std::uint64_t seed);

/// Full hybrid loop: solver → overlap tests → (count, radius) constraints →
/// constrained vertex search scored by the residual ‖Av − b‖. Throws with a
/// stage diagnostic when the solver fidelity falls below the threshold.
PipelineResult run_toy_pipeline(const ToyPipelineConfig& config);

}  // namespace qbnn::pipeline
