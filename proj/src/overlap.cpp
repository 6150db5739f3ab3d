#include "qbnn/overlap.hpp"

#include <cmath>
#include <stdexcept>

namespace qbnn::overlap {

namespace {

// Ancilla statistics from either the exact marginal or sampled counts.
// `qubits` lists the measured ancillas; returns p0 of ancilla `which`.
double ancilla_p0(const QuantumState& state, const std::vector<int>& qubits, int which,
                  std::int64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        const Eigen::VectorXd probs = exact_probabilities(state, qubits);
        double p0 = 0.0;
        for (Eigen::Index m = 0; m < probs.size(); ++m)
            if (!(m >> which & 1)) p0 += probs[m];
        return p0;
    }
    const ShotHistogram hist = sample_counts(state, qubits, shots, seed);
    std::int64_t zeros = 0;
    for (const auto& [key, count] : hist.counts)
        if (key[which] == '0') zeros += count;
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

OverlapEstimate estimate_from_p0(double p0, std::int64_t shots) {
    OverlapEstimate est;
    est.p0_hat = p0;
    est.overlap_sq = std::clamp(2.0 * p0 - 1.0, 0.0, 1.0);
    est.shots = shots;
    est.exact = shots == 0;
    est.std_error = shots == 0 ? 0.0 : std::sqrt(p0 * (1.0 - p0) / static_cast<double>(shots));
    return est;
}

void require_same_width(const QuantumState& a, const QuantumState& b, const char* what) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument(std::string(what) + ": register width mismatch (" +
                                    std::to_string(a.n_qubits) + " vs " +
                                    std::to_string(b.n_qubits) + " qubits)");
}

}  // namespace

QuantumState prepare_test_state(const TestStateSpec& spec) {
    if (spec.n_qubits < 1)
        throw std::invalid_argument("prepare_test_state: n_qubits must be positive");
    const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits;
    if (spec.kind == TestStateKind::full_uniform) {
        QuantumState s{spec.n_qubits, ComplexVector::Constant(dim, 1.0 / std::sqrt(dim))};
        return s;
    }
    if (static_cast<Eigen::Index>(spec.mask.size()) != dim)
        throw std::invalid_argument("prepare_test_state: mask length " +
                                    std::to_string(spec.mask.size()) +
                                    " does not match dimension " + std::to_string(dim));
    Eigen::Index ones = 0;
    for (int m : spec.mask) ones += m != 0;
    if (ones == 0) throw std::invalid_argument("prepare_test_state: all-zero mask");
    QuantumState s{spec.n_qubits, ComplexVector::Zero(dim)};
    const double amp = 1.0 / std::sqrt(static_cast<double>(ones));
    for (Eigen::Index i = 0; i < dim; ++i)
        if (spec.mask[i]) s.amplitudes[i] = amp;
    return s;
}

OverlapEstimate swap_test(const QuantumState& a, const QuantumState& b,
                          std::int64_t shots, std::uint64_t seed) {
    require_same_width(a, b, "swap_test");
    if (shots < 0) throw std::invalid_argument("swap_test: shots must be >= 0");
    const int n = a.n_qubits;
    const int ancilla = 2 * n;

    QuantumState joint = tensor(basis_state(1, 0), tensor(b, a));
    apply_in_place(joint, {hadamard_matrix(), {ancilla}, {}});
    for (int i = 0; i < n; ++i)
        apply_in_place(joint, {swap_matrix(), {i, n + i}, {ancilla}});
    apply_in_place(joint, {hadamard_matrix(), {ancilla}, {}});

    return estimate_from_p0(ancilla_p0(joint, {ancilla}, 0, shots, seed), shots);
}

std::vector<OverlapEstimate> chained_swap_test(const QuantumState& a,
                                               const std::array<QuantumState, 2>& refs,
                                               ChainVariant variant,
                                               std::int64_t shots, std::uint64_t seed) {
    require_same_width(a, refs[0], "chained_swap_test");
    require_same_width(a, refs[1], "chained_swap_test");
    if (shots < 0) throw std::invalid_argument("chained_swap_test: shots must be >= 0");
    const int n = a.n_qubits;
    const int anc1 = 3 * n, anc2 = 3 * n + 1;

    QuantumState joint = tensor(basis_state(2, 0), tensor(refs[1], tensor(refs[0], a)));
    apply_in_place(joint, {hadamard_matrix(), {anc1}, {}});
    apply_in_place(joint, {hadamard_matrix(), {anc2}, {}});
    for (int i = 0; i < n; ++i)
        apply_in_place(joint, {swap_matrix(), {i, n + i}, {anc1}});
    for (int i = 0; i < n; ++i) {
        if (variant == ChainVariant::fanout)
            apply_in_place(joint, {swap_matrix(), {i, 2 * n + i}, {anc2}});
        else
            apply_in_place(joint, {swap_matrix(), {n + i, 2 * n + i}, {anc2}});
    }
    apply_in_place(joint, {hadamard_matrix(), {anc1}, {}});
    apply_in_place(joint, {hadamard_matrix(), {anc2}, {}});

    // One set of shots measures both ancillas; the estimates are the two
    // single-ancilla marginals.
    std::vector<OverlapEstimate> out;
    if (shots == 0) {
        out.push_back(estimate_from_p0(ancilla_p0(joint, {anc1, anc2}, 0, 0, seed), 0));
        out.push_back(estimate_from_p0(ancilla_p0(joint, {anc1, anc2}, 1, 0, seed), 0));
    } else {
        const ShotHistogram hist = sample_counts(joint, {anc1, anc2}, shots, seed);
        for (int which = 0; which < 2; ++which) {
            std::int64_t zeros = 0;
            for (const auto& [key, count] : hist.counts)
                if (key[which] == '0') zeros += count;
            out.push_back(
                estimate_from_p0(static_cast<double>(zeros) / static_cast<double>(shots), shots));
        }
    }
    return out;
}

double overlap_to_distance(const OverlapEstimate& est) {
    return 2.0 - 2.0 * std::sqrt(est.overlap_sq);
}

std::int64_t estimate_active_count(const QuantumState& w, std::int64_t shots,
                                   std::uint64_t seed) {
    TestStateSpec uniform{TestStateKind::full_uniform, {}, w.n_qubits};
    const OverlapEstimate est = swap_test(w, prepare_test_state(uniform), shots, seed);
    const double dim = static_cast<double>(Eigen::Index{1} << w.n_qubits);
    return std::llround(est.overlap_sq * dim);
}

int hamming_radius_from_overlap(double overlap_sq, int n_ones_w, int n_ones_test) {
    if (n_ones_w < 1 || n_ones_test < 1)
        throw std::invalid_argument("hamming_radius_from_overlap: counts must be >= 1");
    if (overlap_sq < 0.0 || overlap_sq > 1.0)
        throw std::invalid_argument("hamming_radius_from_overlap: overlap_sq outside [0, 1]");
    const double k_raw = std::sqrt(overlap_sq * n_ones_w * n_ones_test);
    const int k_max = std::min(n_ones_w, n_ones_test);
    if (k_raw > k_max + 0.5)
        throw std::invalid_argument(
            "hamming_radius_from_overlap: inconsistent inputs (implied intersection " +
            std::to_string(k_raw) + " exceeds min(" + std::to_string(n_ones_w) + ", " +
            std::to_string(n_ones_test) + "))");
    const int k = std::min<int>(static_cast<int>(std::llround(k_raw)), k_max);
    return n_ones_w + n_ones_test - 2 * k;
}

HyperplaneConstraint build_constraint(Eigen::VectorXi center, int h) {
    if (h < 0 || h > center.size())
        throw std::invalid_argument("build_constraint: radius " + std::to_string(h) +
                                    " out of range for dimension " +
                                    std::to_string(center.size()));
    return HyperplaneConstraint{std::move(center), h, 4.0 * h};
}

}  // namespace qbnn::overlap
