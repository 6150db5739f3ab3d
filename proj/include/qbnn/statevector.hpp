#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qbnn/tolerances.hpp"

namespace qbnn {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense statevector over n qubits.
///
/// Qubit 0 is the least-significant bit of the basis-state index, so the
/// two-qubit ket |q1 q0⟩ = |10⟩ lives at amplitude index 2. The amplitude
/// vector always has length exactly 2^n_qubits and unit 2-norm (within
/// kTol.state_norm).
struct QuantumState {
    int n_qubits = 0;
    ComplexVector amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
};

/// A k-qubit unitary embedded on `targets`, optionally conditioned on
/// `controls` (a control participates only when it reads 1). targets[0]
/// addresses the least-significant bit of the gate-local index, matching
/// the global qubit-0-is-LSB convention.
struct GateOp {
    ComplexMatrix matrix;
    std::vector<int> targets;
    std::vector<int> controls;
};

/// Counts of measured bitstrings. Key character i is the outcome of the
/// i-th qubit in the measured subset (in the order the caller listed them).
struct ShotHistogram {
    std::map<std::string, std::int64_t> counts;
    std::int64_t total_shots = 0;
    std::uint64_t seed = 0;
};

struct MeasureResult {
    int outcome = 0;
    QuantumState state;        ///< collapsed and renormalized
    double probability = 0.0;  ///< pre-measurement Born probability of `outcome`
};

// -- state construction -----------------------------------------------------

QuantumState basis_state(int n_qubits, std::int64_t index);

/// Encodes a real vector as amplitudes, normalizing by its 2-norm. The
/// length must be a power of two (at least 2) and the vector nonzero.
QuantumState from_real_vector(const Eigen::VectorXd& v);

/// Wraps an amplitude vector (length a power of two), normalizing it.
QuantumState state_from_amplitudes(ComplexVector amps);

/// Tensor product; `low` occupies the low qubit indices of the result.
QuantumState tensor(const QuantumState& high, const QuantumState& low);

// -- gates ------------------------------------------------------------------

ComplexMatrix hadamard_matrix();
ComplexMatrix pauli_x_matrix();
ComplexMatrix ry_matrix(double theta);
ComplexMatrix swap_matrix();
/// Discrete Fourier transform on m qubits: F|x⟩ = 2^{-m/2} Σ_k ω^{xk} |k⟩.
ComplexMatrix qft_matrix(int m);

QuantumState apply(const QuantumState& state, const GateOp& gate);
void apply_in_place(QuantumState& state, const GateOp& gate);

// -- measurement ------------------------------------------------------------

Complex inner_product(const QuantumState& a, const QuantumState& b);

MeasureResult measure_qubit(const QuantumState& state, int qubit, std::uint64_t rng_seed);

/// Exact marginal Born distribution over `qubits`; entry j corresponds to
/// the outcome with qubits[i] contributing bit i of j.
Eigen::VectorXd exact_probabilities(const QuantumState& state, const std::vector<int>& qubits);

/// `shots` i.i.d. draws from the marginal Born distribution on `qubits`,
/// deterministic given the seed.
ShotHistogram sample_counts(const QuantumState& state, const std::vector<int>& qubits,
                            std::int64_t shots, std::uint64_t rng_seed);

}  // namespace qbnn
