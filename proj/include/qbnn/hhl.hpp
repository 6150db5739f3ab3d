#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbnn/statevector.hpp"

namespace qbnn::hhl {

/// Hermitian system A|x⟩ = |b⟩ of dimension 2^k.
struct LinearSystem {
    ComplexMatrix matrix_a;
    ComplexVector vector_b;
};

struct HHLConfig {
    int clock_qubits = 3;           ///< phase-estimation register width m
    double evolution_time = 0.0;    ///< t; 0 → auto (largest eigenvalue → clock 2^{m-1})
    double rotation_constant = 0.0; ///< C in clock units; 0 → smallest representable (1)
    std::int64_t shots = 0;         ///< >0 additionally samples the ancilla
    std::uint64_t seed = 0;         ///< for the sampled ancilla statistics
};

/// The assembled circuit plus its register map. Qubits [0, n_b) hold |b⟩,
/// [n_b, n_b + clock_qubits) the clock, and `ancilla` is the rotation qubit
/// whose measurement post-selects the solution branch.
struct HhlCircuit {
    std::vector<GateOp> gates;
    int n_qubits = 0;
    int n_b_qubits = 0;
    int clock_qubits = 0;
    int ancilla = 0;
    double evolution_time = 0.0;
    double rotation_constant = 0.0;
};

struct HHLSolution {
    QuantumState solution_state;         ///< b-register after post-selecting ancilla = 1
    double success_probability = 0.0;    ///< exact Born probability of ancilla = 1
    std::optional<double> fidelity;      ///< vs classical_solve, when it succeeds
    std::optional<double> sampled_success_frequency;  ///< when config.shots > 0
    double clock_zero_probability = 0.0; ///< clock back at |0...0⟩, given ancilla = 1
    double condition_number = 0.0;       ///< |λ|max/|λ|min diagnostic
};

/// Reference solver (dense LU). Throws on singular systems; the returned x
/// satisfies ‖Ax − b‖ < kTol.solve_residual.
ComplexVector classical_solve(const LinearSystem& system);

/// Returns the system unchanged when `a` is already Hermitian; otherwise the
/// doubled system [[0, A], [A†, 0]] with right-hand side [b, 0], whose
/// solution carries x = A⁻¹b in the second half.
LinearSystem hermitian_embed(const ComplexMatrix& a, const ComplexVector& b);

/// Assembles the full gate sequence: |b⟩ preparation, phase estimation with
/// controlled exp(iAt·2^j) (exact matrix exponentials), multi-controlled
/// eigenvalue-inversion rotations keyed on each clock value, and the inverse
/// phase estimation. Rejects spectra that map onto clock value 0.
HhlCircuit build_hhl_circuit(const LinearSystem& system, const HHLConfig& config);

HHLSolution run_hhl(const LinearSystem& system, const HHLConfig& config);

/// |⟨solution | reference/‖reference‖⟩|².
double solution_fidelity(const HHLSolution& solution, const ComplexVector& reference);

/// Parses a system file: n rows of n whitespace-separated reals (the matrix),
/// then the right-hand side on a final row. '#' starts a comment. Shape
/// errors raise parse_error with line-numbered diagnostics.
LinearSystem read_system_file(const std::string& path);

}  // namespace qbnn::hhl
