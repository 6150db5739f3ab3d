#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qbnn/statevector.hpp"

namespace qbnn::overlap {

enum class TestStateKind { full_uniform, uniform_over_mask };

/// Recipe for a reference ("test") state. full_uniform is the Hadamard-only
/// preparation with amplitude 2^{-n/2} everywhere; uniform_over_mask puts
/// amplitude 1/sqrt(M) on the M basis positions where mask = 1.
struct TestStateSpec {
    TestStateKind kind = TestStateKind::full_uniform;
    std::vector<int> mask;  ///< over the 2^n_qubits basis positions
    int n_qubits = 1;
};

/// Ancilla statistics of one SWAP test and the derived squared overlap.
struct OverlapEstimate {
    double p0_hat = 0.0;      ///< ancilla-0 frequency (exact probability in exact mode)
    double overlap_sq = 0.0;  ///< clamp(2*p0_hat - 1, 0, 1)
    std::int64_t shots = 0;   ///< 0 in exact mode
    double std_error = 0.0;   ///< binomial standard error of p0_hat (0 in exact mode)
    bool exact = false;
};

/// Binary search-space restriction: vertices at Hamming distance exactly
/// `hamming_radius` from `center`. euclid_sq is the equivalent squared
/// Euclidean radius in the ±1 vertex geometry (4 per disagreeing coordinate).
struct HyperplaneConstraint {
    Eigen::VectorXi center;
    int hamming_radius = 0;
    double euclid_sq = 0.0;
};

/// Wiring of the two-reference chained test: fanout swaps the probe register
/// with each reference directly; chain swaps probe<->refs[0], then
/// refs[0]<->refs[1]. Both produce identical ancilla statistics.
enum class ChainVariant { fanout, chain };

QuantumState prepare_test_state(const TestStateSpec& spec);

/// Single SWAP test between equal-width registers: ancilla H, one
/// controlled-SWAP per qubit pair, H, ancilla measurement. shots = 0 reads
/// the exact ancilla distribution instead of sampling, in which case
/// p0 = 1/2 + |⟨a|b⟩|²/2 holds exactly.
OverlapEstimate swap_test(const QuantumState& a, const QuantumState& b,
                          std::int64_t shots, std::uint64_t seed);

/// Two chained SWAP tests of `a` against refs[0] and refs[1] sharing one
/// circuit. Element i of the result holds ancilla-i statistics. With exact
/// statistics the second ancilla obeys
/// p0 = (2 + |⟨a|refs[1]⟩|² + |⟨refs[0]|refs[1]⟩|²) / 4,
/// which cannot exceed 3/4 when the references are orthogonal.
std::vector<OverlapEstimate> chained_swap_test(const QuantumState& a,
                                               const std::array<QuantumState, 2>& refs,
                                               ChainVariant variant,
                                               std::int64_t shots, std::uint64_t seed);

/// Squared Euclidean distance Ed² = 2 − 2·sqrt(overlap_sq) between the two
/// normalized vectors. Valid when both states are known to have nonnegative
/// real amplitudes (the BNN regime), where the sign of the overlap is fixed.
double overlap_to_distance(const OverlapEstimate& est);

/// Number of nonzero entries of a uniform-support state, estimated by a
/// SWAP test against the full uniform state: N̂ = round(overlap_sq · 2^n).
std::int64_t estimate_active_count(const QuantumState& w, std::int64_t shots,
                                   std::uint64_t seed);

/// Hamming distance between two binary vectors recovered from the squared
/// overlap of their uniform-support encodings: the intersection size is
/// k = round(sqrt(overlap_sq · N · M)), giving h = N + M − 2k. Throws when
/// the implied k exceeds min(N, M) beyond rounding slack.
int hamming_radius_from_overlap(double overlap_sq, int n_ones_w, int n_ones_test);

HyperplaneConstraint build_constraint(Eigen::VectorXi center, int h);

}  // namespace qbnn::overlap
