#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qbnn::sampling {

enum class DistributionKind { random, uniform };

std::string kind_name(DistributionKind kind);

struct DistributionSpec {
    DistributionKind kind = DistributionKind::uniform;
    int size = 2;  ///< number of outcomes, in [2, 32]
    std::uint64_t seed = 0;
};

/// One cell of the sample-complexity study: how many draws it takes, on
/// average over `trials`, until the empirical distribution reproduces the
/// target within L1 distance `epsilon`.
struct SamplingResult {
    std::string kind;
    int size = 0;
    double epsilon = 0.0;
    double mean_samples = 0.0;
    double std_samples = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// random: normalized i.i.d. standard-uniform variates (strictly positive);
/// uniform: exactly 1/size everywhere. Deterministic given the seed.
Eigen::VectorXd generate_distribution(const DistributionSpec& spec);

double l1_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Per trial, the minimal shot count S with empirical L1 error <= epsilon is
/// located by a doubling search followed by bisection, drawing a fresh sample
/// path for every candidate S. Returns mean and standard deviation over
/// independent trials. Trial t uses the seed derived from (seed, t).
SamplingResult required_samples(const Eigen::VectorXd& dist, double epsilon, int trials,
                                std::uint64_t seed);

/// Full grid over kinds x sizes x epsilons.
std::vector<SamplingResult> run_sweep(const std::vector<DistributionKind>& kinds,
                                      const std::vector<int>& sizes,
                                      const std::vector<double>& epsilons, int trials,
                                      std::uint64_t seed);

/// CSV with columns kind,size,epsilon,trials,mean_samples,std_samples,seed.
/// A leading comment notes that a k-outcome uniform row applies to any
/// noiseless distribution with k equiprobable nonzero entries.
void write_csv(std::ostream& out, const std::vector<SamplingResult>& rows);

}  // namespace qbnn::sampling
