#pragma once

namespace qbnn {

/// Numerical tolerances used across the toolkit, kept in one record so a
/// change in one place is a change everywhere.
struct Tolerances {
    double state_norm = 1e-10;                ///< |‖ψ‖₂ − 1| for a valid state
    double unitarity = 1e-8;                  ///< ‖U†U − I‖_F gate admission bound
    double hermiticity = 1e-10;               ///< max|A − A†| for linear systems
    double solve_residual = 1e-8;             ///< ‖Ax − b‖₂ for the classical solver
    double probability_sum = 1e-10;           ///< marginal distributions sum to 1
    double distribution_sum = 1e-12;          ///< generated sampling distributions
    double min_success_probability = 1e-12;   ///< HHL post-selection floor
    double state_equality = 1e-9;             ///< elementwise state comparisons
};

inline constexpr Tolerances kTol{};

}  // namespace qbnn
