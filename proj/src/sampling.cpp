#include "qbnn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qbnn/rng.hpp"
#include "qbnn/tolerances.hpp"

namespace qbnn::sampling {

namespace {

constexpr std::int64_t kSearchCap = std::int64_t{1} << 26;

/// L1 distance between `dist` and the empirical distribution of `shots`
/// fresh draws, without materializing the empirical vector.
double empirical_l1(const Eigen::VectorXd& dist, const Eigen::VectorXd& cdf,
                    std::int64_t shots, Rng& rng) {
    std::vector<std::int64_t> counts(dist.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform01() * cdf[cdf.size() - 1];
        const auto it = std::upper_bound(cdf.data(), cdf.data() + cdf.size(), u);
        ++counts[std::min<Eigen::Index>(it - cdf.data(), cdf.size() - 1)];
    }
    double l1 = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i)
        l1 += std::abs(static_cast<double>(counts[i]) / static_cast<double>(shots) - dist[i]);
    return l1;
}

std::int64_t minimal_samples_one_trial(const Eigen::VectorXd& dist,
                                       const Eigen::VectorXd& cdf, double epsilon,
                                       Rng& rng) {
    // Doubling until a candidate passes, then bisection; every candidate is
    // judged on its own fresh sample path.
    std::int64_t lo = 0, hi = 1;
    while (empirical_l1(dist, cdf, hi, rng) > epsilon) {
        lo = hi;
        hi *= 2;
        if (hi > kSearchCap)
            throw std::runtime_error("required_samples: search exceeded " +
                                     std::to_string(kSearchCap) + " draws");
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (empirical_l1(dist, cdf, mid, rng) <= epsilon)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

std::string kind_name(DistributionKind kind) {
    return kind == DistributionKind::random ? "random" : "uniform";
}

Eigen::VectorXd generate_distribution(const DistributionSpec& spec) {
    if (spec.size < 2 || spec.size > 32)
        throw std::invalid_argument("generate_distribution: size " +
                                    std::to_string(spec.size) + " outside [2, 32]");
    Eigen::VectorXd p(spec.size);
    if (spec.kind == DistributionKind::uniform) {
        p.setConstant(1.0 / spec.size);
        return p;
    }
    Rng rng(spec.seed);
    for (int i = 0; i < spec.size; ++i) p[i] = rng.uniform_positive();
    p /= p.sum();
    return p;
}

double l1_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("l1_distance: length mismatch (" +
                                    std::to_string(p.size()) + " vs " +
                                    std::to_string(q.size()) + ")");
    return (p - q).lpNorm<1>();
}

SamplingResult required_samples(const Eigen::VectorXd& dist, double epsilon, int trials,
                                std::uint64_t seed) {
    if (epsilon <= 0.0 || epsilon >= 2.0)
        throw std::invalid_argument("required_samples: epsilon must lie in (0, 2)");
    if (trials < 1) throw std::invalid_argument("required_samples: trials must be >= 1");
    if (std::abs(dist.sum() - 1.0) > kTol.distribution_sum * dist.size() + 1e-9)
        throw std::invalid_argument("required_samples: distribution is not normalized");

    Eigen::VectorXd cdf(dist.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) cdf[i] = (acc += dist[i]);

    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        const double s = static_cast<double>(minimal_samples_one_trial(dist, cdf, epsilon, rng));
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / trials;
    const double variance = std::max(0.0, sum_sq / trials - mean * mean);

    SamplingResult result;
    result.size = static_cast<int>(dist.size());
    result.epsilon = epsilon;
    result.mean_samples = mean;
    result.std_samples = std::sqrt(variance);
    result.trials = trials;
    result.seed = seed;
    return result;
}

std::vector<SamplingResult> run_sweep(const std::vector<DistributionKind>& kinds,
                                      const std::vector<int>& sizes,
                                      const std::vector<double>& epsilons, int trials,
                                      std::uint64_t seed) {
    if (kinds.empty() || sizes.empty() || epsilons.empty())
        throw std::invalid_argument("run_sweep: empty grid axis");
    std::vector<SamplingResult> rows;
    std::uint64_t cell = 0;
    for (const DistributionKind kind : kinds)
        for (const int size : sizes) {
            const Eigen::VectorXd dist =
                generate_distribution({kind, size, mix_seed(seed, cell)});
            for (const double epsilon : epsilons) {
                SamplingResult row =
                    required_samples(dist, epsilon, trials, mix_seed(seed, cell));
                row.kind = kind_name(kind);
                rows.push_back(std::move(row));
            }
            ++cell;
        }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SamplingResult>& rows) {
    out << "# uniform rows apply to any noiseless distribution with `size` equiprobable "
           "nonzero outcomes; zero-probability outcomes are never sampled\n";
    out << "kind,size,epsilon,trials,mean_samples,std_samples,seed\n";
    for (const SamplingResult& r : rows)
        out << r.kind << ',' << r.size << ',' << r.epsilon << ',' << r.trials << ','
            << r.mean_samples << ',' << r.std_samples << ',' << r.seed << '\n';
}

}  // namespace qbnn::sampling
