#include "qbnn/pipeline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbnn/bnn.hpp"
#include "qbnn/rng.hpp"

namespace qbnn::pipeline {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

Eigen::VectorXi random_nonzero_bits(int n, Rng& rng) {
    Eigen::VectorXi bits(n);
    for (;;) {
        int ones = 0;
        for (int i = 0; i < n; ++i) ones += bits[i] = static_cast<int>(rng.below(2));
        if (ones > 0) return bits;
    }
}

}  // namespace

ToyProblem make_toy_problem(int n_weights, std::uint64_t seed) {
    if (!is_power_of_two(n_weights) || n_weights < 2 || n_weights > 8)
        throw std::invalid_argument("toy problem: n_weights must be a power of two in [2, 8]");
    Rng rng(mix_seed(seed, 0));

    // Spectrum 1..D stays exactly clock-representable under the default
    // evolution time once the register has log2(D)+1 qubits.
    const int d = n_weights;
    Eigen::MatrixXd gaussian(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) gaussian(r, c) = rng.normal();
    const Eigen::MatrixXd basis =
        Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ();
    Eigen::VectorXd eigenvalues(d);
    for (int i = 0; i < d; ++i) eigenvalues[i] = i + 1;
    const Eigen::MatrixXd a = basis * eigenvalues.asDiagonal() * basis.transpose();

    ToyProblem toy;
    toy.true_weights = random_nonzero_bits(d, rng);
    toy.clock_qubits = log2_exact(d) + 1;
    toy.system.matrix_a = a.cast<Complex>();
    toy.system.vector_b = (a * toy.true_weights.cast<double>()).cast<Complex>();
    return toy;
}

PipelineResult run_toy_pipeline(const ToyPipelineConfig& config) {
    const ToyProblem toy = make_toy_problem(config.n_weights, config.seed);
    const int d = config.n_weights;

    hhl::HHLConfig solver_cfg;
    solver_cfg.clock_qubits = toy.clock_qubits;
    const hhl::HHLSolution solution = hhl::run_hhl(toy.system, solver_cfg);

    PipelineResult result;
    result.true_weights = toy.true_weights;
    result.success_probability = solution.success_probability;
    result.hhl_fidelity = solution.fidelity.value_or(0.0);
    if (result.hhl_fidelity < config.min_fidelity)
        throw std::runtime_error("pipeline[hhl]: solution fidelity " +
                                 std::to_string(result.hhl_fidelity) +
                                 " below threshold " + std::to_string(config.min_fidelity));

    // Stage: number of active weights, from the overlap with the full
    // uniform state.
    result.active_count_estimate = overlap::estimate_active_count(
        solution.solution_state, config.shots, mix_seed(config.seed, 1));

    // Stage: Hamming radius around a random test mask, from a second test.
    Rng rng(mix_seed(config.seed, 2));
    result.test_mask = random_nonzero_bits(d, rng);
    std::vector<int> mask(result.test_mask.data(), result.test_mask.data() + d);
    const QuantumState test_state = overlap::prepare_test_state(
        {overlap::TestStateKind::uniform_over_mask, mask, log2_exact(d)});
    result.mask_overlap = overlap::swap_test(solution.solution_state, test_state,
                                             config.shots, mix_seed(config.seed, 3));
    result.euclid_sq_distance = overlap::overlap_to_distance(result.mask_overlap);

    const int mask_ones = result.test_mask.sum();
    result.hamming_radius = overlap::hamming_radius_from_overlap(
        result.mask_overlap.overlap_sq, static_cast<int>(result.active_count_estimate),
        mask_ones);

    // Stage: classical search restricted to vertices matching both extracted
    // constraints, scored by the residual of the original system.
    result.search_space = std::int64_t{1} << d;
    double best_residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXi vertex(d);
    for (std::int64_t code = 0; code < result.search_space; ++code) {
        int ones = 0;
        for (int i = 0; i < d; ++i) ones += vertex[i] = static_cast<int>(code >> i & 1);
        if (ones != result.active_count_estimate) continue;
        const int radius = bnn::hamming_distance(vertex, result.test_mask);
        const int slack = config.widen_radius ? 1 : 0;
        if (std::abs(radius - result.hamming_radius) > slack) continue;
        ++result.candidates_checked;
        const double residual =
            (toy.system.matrix_a * vertex.cast<Complex>() - toy.system.vector_b).norm();
        if (residual < best_residual) {
            best_residual = residual;
            result.recovered_weights = vertex;
        }
    }
    if (result.candidates_checked == 0)
        throw std::runtime_error("pipeline[search]: no vertex satisfies the extracted "
                                 "constraints (count " +
                                 std::to_string(result.active_count_estimate) + ", radius " +
                                 std::to_string(result.hamming_radius) + ")");
    result.recovered_exact = result.recovered_weights == toy.true_weights;
    return result;
}

}  // namespace qbnn::pipeline
