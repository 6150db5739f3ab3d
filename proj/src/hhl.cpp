#include "qbnn/hhl.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qbnn/errors.hpp"

namespace qbnn::hhl {

namespace {

bool is_power_of_two(Eigen::Index n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(Eigen::Index n) {
    int k = 0;
    while ((Eigen::Index{1} << k) < n) ++k;
    return k;
}

void validate_system(const LinearSystem& system, bool require_hermitian) {
    const auto& a = system.matrix_a;
    if (a.rows() != a.cols())
        throw std::invalid_argument("linear system: matrix is not square");
    if (system.vector_b.size() != a.rows())
        throw std::invalid_argument("linear system: right-hand side has length " +
                                    std::to_string(system.vector_b.size()) + ", expected " +
                                    std::to_string(a.rows()));
    if (system.vector_b.norm() == 0.0)
        throw std::invalid_argument("linear system: right-hand side is zero");
    if (require_hermitian) {
        const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
        if (defect > kTol.hermiticity)
            throw std::invalid_argument("linear system: matrix is not Hermitian (defect " +
                                        std::to_string(defect) + ")");
    }
}

/// Unitary whose first column is the normalized b, via Householder-QR
/// completion of an orthonormal basis.
ComplexMatrix state_prep_unitary(const ComplexVector& b) {
    const ComplexVector bhat = b / b.norm();
    Eigen::HouseholderQR<ComplexMatrix> qr(bhat);
    ComplexMatrix u = qr.householderQ();
    const Complex gamma = bhat.dot(u.col(0));  // unimodular misalignment factor
    u.col(0) *= std::conj(gamma);
    if ((u.col(0) - bhat).norm() > 1e-10)
        throw std::runtime_error("state preparation: unitary completion failed");
    return u;
}

struct Spectrum {
    Eigen::VectorXd eigenvalues;
    ComplexMatrix eigenvectors;
};

Spectrum decompose(const ComplexMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hhl: eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix evolution_unitary(const Spectrum& spec, double t) {
    const Eigen::Index n = spec.eigenvalues.size();
    ComplexVector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double angle = spec.eigenvalues[i] * t;
        phases[i] = Complex(std::cos(angle), std::sin(angle));
    }
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

}  // namespace

ComplexVector classical_solve(const LinearSystem& system) {
    validate_system(system, false);
    Eigen::FullPivLU<ComplexMatrix> lu(system.matrix_a);
    if (!lu.isInvertible())
        throw std::runtime_error("classical_solve: matrix is singular");
    const ComplexVector x = lu.solve(system.vector_b);
    const double residual = (system.matrix_a * x - system.vector_b).norm();
    if (residual > kTol.solve_residual)
        throw std::runtime_error("classical_solve: residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    return x;
}

LinearSystem hermitian_embed(const ComplexMatrix& a, const ComplexVector& b) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("hermitian_embed: matrix is not square");
    if (b.size() != a.rows())
        throw std::invalid_argument("hermitian_embed: right-hand side length mismatch");
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= kTol.hermiticity) return {a, b};

    const Eigen::Index n = a.rows();
    ComplexMatrix big = ComplexMatrix::Zero(2 * n, 2 * n);
    big.topRightCorner(n, n) = a;
    big.bottomLeftCorner(n, n) = a.adjoint();
    ComplexVector rhs = ComplexVector::Zero(2 * n);
    rhs.head(n) = b;
    return {big, rhs};
}

HhlCircuit build_hhl_circuit(const LinearSystem& system, const HHLConfig& config) {
    validate_system(system, true);
    if (!is_power_of_two(system.matrix_a.rows()) || system.matrix_a.rows() < 2)
        throw std::invalid_argument("hhl: system dimension " +
                                    std::to_string(system.matrix_a.rows()) +
                                    " is not a power of two (>= 2)");
    const int m = config.clock_qubits;
    if (m < 1) throw std::invalid_argument("hhl: clock_qubits must be >= 1");

    const Spectrum spec = decompose(system.matrix_a);
    const double lambda_max = spec.eigenvalues.maxCoeff();
    const double lambda_min = spec.eigenvalues.minCoeff();
    if (lambda_min <= 0.0)
        throw std::invalid_argument(
            "hhl: eigenvalue " + std::to_string(lambda_min) +
            " is not positive; the unsigned clock inversion requires a positive spectrum");

    const double clock_states = static_cast<double>(Eigen::Index{1} << m);
    // Default t parks the largest eigenvalue at clock value 2^{m-1}: full use
    // of the register without wraparound.
    const double t =
        config.evolution_time > 0.0 ? config.evolution_time : M_PI / lambda_max;

    double min_clock = clock_states;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
        const double clock = spec.eigenvalues[i] * t * clock_states / (2.0 * M_PI);
        if (clock >= clock_states - 0.5)
            throw std::invalid_argument("hhl: eigenvalue " +
                                        std::to_string(spec.eigenvalues[i]) +
                                        " wraps around the clock register; reduce t");
        if (std::llround(clock) == 0)
            throw std::invalid_argument("hhl: eigenvalue " +
                                        std::to_string(spec.eigenvalues[i]) +
                                        " maps to clock value 0 (division by zero in the "
                                        "inversion stage); increase t or clock_qubits");
        min_clock = std::min(min_clock, static_cast<double>(std::llround(clock)));
    }

    const double c = config.rotation_constant > 0.0 ? config.rotation_constant : 1.0;
    if (c > min_clock)
        throw std::invalid_argument("hhl: rotation constant " + std::to_string(c) +
                                    " exceeds the smallest targeted clock value " +
                                    std::to_string(min_clock));

    const int nb = log2_exact(system.matrix_a.rows());
    HhlCircuit circuit;
    circuit.n_b_qubits = nb;
    circuit.clock_qubits = m;
    circuit.n_qubits = nb + m + 1;
    circuit.ancilla = nb + m;
    circuit.evolution_time = t;
    circuit.rotation_constant = c;

    std::vector<int> b_targets(nb), clock_targets(m);
    for (int i = 0; i < nb; ++i) b_targets[i] = i;
    for (int j = 0; j < m; ++j) clock_targets[j] = nb + j;

    // Stage 1: load |b>.
    circuit.gates.push_back({state_prep_unitary(system.vector_b), b_targets, {}});

    // Stage 2: phase estimation.
    for (int j = 0; j < m; ++j)
        circuit.gates.push_back({hadamard_matrix(), {nb + j}, {}});
    for (int j = 0; j < m; ++j)
        circuit.gates.push_back(
            {evolution_unitary(spec, t * static_cast<double>(Eigen::Index{1} << j)),
             b_targets,
             {nb + j}});
    circuit.gates.push_back({qft_matrix(m).adjoint(), clock_targets, {}});

    // Stage 3: eigenvalue inversion, one multi-controlled rotation per
    // representable clock value v, with angle 2*asin(C/v).
    for (Eigen::Index v = 1; v < Eigen::Index{1} << m; ++v) {
        if (c > static_cast<double>(v)) continue;  // below C: not a targeted value
        std::vector<int> wrap;
        for (int j = 0; j < m; ++j)
            if (!(v >> j & 1)) wrap.push_back(nb + j);
        for (int q : wrap) circuit.gates.push_back({pauli_x_matrix(), {q}, {}});
        const double angle = 2.0 * std::asin(c / static_cast<double>(v));
        circuit.gates.push_back({ry_matrix(angle), {circuit.ancilla}, clock_targets});
        for (int q : wrap) circuit.gates.push_back({pauli_x_matrix(), {q}, {}});
    }

    // Stage 4: inverse phase estimation.
    circuit.gates.push_back({qft_matrix(m), clock_targets, {}});
    for (int j = m - 1; j >= 0; --j)
        circuit.gates.push_back(
            {evolution_unitary(spec, -t * static_cast<double>(Eigen::Index{1} << j)),
             b_targets,
             {nb + j}});
    for (int j = 0; j < m; ++j)
        circuit.gates.push_back({hadamard_matrix(), {nb + j}, {}});

    return circuit;
}

HHLSolution run_hhl(const LinearSystem& system, const HHLConfig& config) {
    const HhlCircuit circuit = build_hhl_circuit(system, config);
    QuantumState state = basis_state(circuit.n_qubits, 0);
    for (const GateOp& gate : circuit.gates) apply_in_place(state, gate);

    HHLSolution sol;
    sol.success_probability = exact_probabilities(state, {circuit.ancilla})[1];
    if (sol.success_probability < kTol.min_success_probability)
        throw std::runtime_error("run_hhl: ancilla success probability " +
                                 std::to_string(sol.success_probability) +
                                 " is degenerate");
    if (config.shots > 0) {
        const ShotHistogram hist =
            sample_counts(state, {circuit.ancilla}, config.shots, config.seed);
        const auto it = hist.counts.find("1");
        sol.sampled_success_frequency =
            static_cast<double>(it == hist.counts.end() ? 0 : it->second) /
            static_cast<double>(config.shots);
    }

    // Project onto ancilla = 1.
    const std::uint64_t anc_bit = std::uint64_t{1} << circuit.ancilla;
    for (Eigen::Index i = 0; i < state.dim(); ++i)
        if (!(static_cast<std::uint64_t>(i) & anc_bit)) state.amplitudes[i] = 0.0;
    state.amplitudes /= state.amplitudes.norm();

    const Eigen::Index b_dim = Eigen::Index{1} << circuit.n_b_qubits;
    ComplexVector clock_zero_slice = state.amplitudes.segment(anc_bit, b_dim);
    const double slice_weight = clock_zero_slice.squaredNorm();
    sol.clock_zero_probability = slice_weight;
    if (slice_weight < kTol.min_success_probability)
        throw std::runtime_error("run_hhl: no amplitude with the clock register at zero");
    sol.solution_state =
        QuantumState{circuit.n_b_qubits, clock_zero_slice / std::sqrt(slice_weight)};

    const Spectrum spec = decompose(system.matrix_a);
    const double abs_max = spec.eigenvalues.cwiseAbs().maxCoeff();
    const double abs_min = spec.eigenvalues.cwiseAbs().minCoeff();
    sol.condition_number = abs_min > 0.0 ? abs_max / abs_min
                                         : std::numeric_limits<double>::infinity();
    try {
        sol.fidelity = solution_fidelity(sol, classical_solve(system));
    } catch (const std::exception&) {
        sol.fidelity = std::nullopt;
    }
    return sol;
}

double solution_fidelity(const HHLSolution& solution, const ComplexVector& reference) {
    if (reference.size() != solution.solution_state.dim())
        throw std::invalid_argument("solution_fidelity: dimension mismatch");
    const double norm = reference.norm();
    if (norm == 0.0) throw std::invalid_argument("solution_fidelity: zero reference");
    const Complex overlap = solution.solution_state.amplitudes.dot(reference / norm);
    return std::norm(overlap);
}

LinearSystem read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");

    std::vector<std::vector<double>> rows;
    std::vector<int> row_lines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::vector<double> values;
        std::string token;
        while (ss >> token) {
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size() || !std::isfinite(v))
                    throw std::invalid_argument(token);
                values.push_back(v);
            } catch (const std::exception&) {
                throw parse_error(path + ":" + std::to_string(line_no) +
                                  ": expected a finite real number, got '" + token + "'");
            }
        }
        if (!values.empty()) {
            rows.push_back(std::move(values));
            row_lines.push_back(line_no);
        }
    }

    if (rows.size() < 2)
        throw parse_error(path + ": expected an n x n matrix followed by a length-n "
                          "right-hand-side row");
    const std::size_t n = rows.size() - 1;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != n)
            throw parse_error(path + ":" + std::to_string(row_lines[r]) + ": expected " +
                              std::to_string(n) + " values on this row, got " +
                              std::to_string(rows[r].size()) +
                              " (matrix rows plus one right-hand-side row)");

    LinearSystem system;
    system.matrix_a.resize(n, n);
    system.vector_b.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) system.matrix_a(r, c) = rows[r][c];
    for (std::size_t c = 0; c < n; ++c) system.vector_b(c) = rows[n][c];
    return system;
}

}  // namespace qbnn::hhl
