#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qbnn/bnn.hpp"

namespace qbnn::experiment {

/// One paired simulation: a baseline run, the constraint emulated from its
/// solution, and a constrained rerun from the identical initialization that
/// stops as soon as it matches the baseline loss.
struct RunPair {
    int run_id = 0;
    std::uint64_t seed = 0;
    int hamming_radius = 0;
    bnn::TrainReport baseline;
    bnn::TrainReport constrained;
};

struct ExperimentConfig {
    int runs = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    bnn::TrainConfig train;
};

struct Summary {
    int runs = 0;
    double mean_baseline_iterations = 0.0;
    double mean_constrained_iterations = 0.0;
    double improvement_ratio = 0.0;       ///< 1 - mean_constrained / mean_baseline
    double frac_equal_or_better = 0.0;    ///< constrained loss <= baseline loss
    int worse_runs = 0;
    double mean_rel_mse_gap_worse = 0.0;  ///< mean (Lc-Lb)/Lb over the worse runs
};

/// Runs `config.runs` paired simulations (parallel across `jobs` threads,
/// each run seeded from (seed, run_id)), on float data for memory economy.
std::vector<RunPair> run_paired_experiment(const bnn::Matrix<float>& train_x,
                                           const bnn::Vector<float>& train_y,
                                           const bnn::Matrix<float>& val_x,
                                           const bnn::Vector<float>& val_y,
                                           const ExperimentConfig& config);

/// One paired run; exposed for tests and reused by the parallel driver.
template <class Scalar>
RunPair run_one_pair(const bnn::Matrix<Scalar>& train_x, const bnn::Vector<Scalar>& train_y,
                     const bnn::Matrix<Scalar>& val_x, const bnn::Vector<Scalar>& val_y,
                     const ExperimentConfig& config, int run_id) {
    RunPair pair;
    pair.run_id = run_id;
    pair.seed = mix_seed(config.seed, static_cast<std::uint64_t>(run_id));

    bnn::TrainConfig train_cfg = config.train;
    train_cfg.seed = pair.seed;
    pair.baseline = bnn::train(train_x, train_y, val_x, val_y, train_cfg);

    const overlap::HyperplaneConstraint constraint = bnn::emulate_quantum_constraint(
        pair.baseline.solution, mix_seed(pair.seed, 0x7e57));
    pair.hamming_radius = constraint.hamming_radius;

    // Same initialization (same seed), constrained binarization, stopping at
    // the first epoch whose validation loss matches the baseline's.
    pair.constrained = bnn::train(train_x, train_y, val_x, val_y, train_cfg, constraint,
                                  pair.baseline.final_val_loss);
    return pair;
}

Summary summarize(const std::vector<RunPair>& pairs);

/// CSV rows: run_id,constrained,iterations,final_val_loss,converged,seed,h
/// (two rows per pair; h is written on the constrained row, -1 otherwise).
void write_csv(std::ostream& out, const std::vector<RunPair>& pairs);

}  // namespace qbnn::experiment
