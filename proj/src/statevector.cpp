#include "qbnn/statevector.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "qbnn/rng.hpp"

namespace qbnn {

namespace {

bool is_power_of_two(Eigen::Index n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(Eigen::Index n) {
    int k = 0;
    while ((Eigen::Index{1} << k) < n) ++k;
    return k;
}

void check_qubit_list(const QuantumState& state, const std::vector<int>& qubits,
                      const char* what) {
    std::unordered_set<int> seen;
    for (int q : qubits) {
        if (q < 0 || q >= state.n_qubits)
            throw std::invalid_argument(std::string(what) + ": qubit index " +
                                        std::to_string(q) + " out of range for " +
                                        std::to_string(state.n_qubits) + " qubits");
        if (!seen.insert(q).second)
            throw std::invalid_argument(std::string(what) + ": duplicate qubit index " +
                                        std::to_string(q));
    }
}

}  // namespace

QuantumState basis_state(int n_qubits, std::int64_t index) {
    if (n_qubits < 1) throw std::invalid_argument("basis_state: n_qubits must be positive");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (index < 0 || index >= dim)
        throw std::invalid_argument("basis_state: index " + std::to_string(index) +
                                    " out of range for dimension " + std::to_string(dim));
    QuantumState s{n_qubits, ComplexVector::Zero(dim)};
    s.amplitudes[index] = 1.0;
    return s;
}

QuantumState from_real_vector(const Eigen::VectorXd& v) {
    if (!is_power_of_two(v.size()) || v.size() < 2)
        throw std::invalid_argument("from_real_vector: length " + std::to_string(v.size()) +
                                    " is not a power of two (>= 2)");
    const double norm = v.norm();
    if (norm == 0.0) throw std::invalid_argument("from_real_vector: zero vector");
    QuantumState s{log2_exact(v.size()), (v / norm).cast<Complex>()};
    return s;
}

QuantumState state_from_amplitudes(ComplexVector amps) {
    if (!is_power_of_two(amps.size()) || amps.size() < 2)
        throw std::invalid_argument("state_from_amplitudes: length is not a power of two (>= 2)");
    const double norm = amps.norm();
    if (norm == 0.0) throw std::invalid_argument("state_from_amplitudes: zero vector");
    amps /= norm;
    return QuantumState{log2_exact(amps.size()), std::move(amps)};
}

QuantumState tensor(const QuantumState& high, const QuantumState& low) {
    QuantumState out{high.n_qubits + low.n_qubits,
                     ComplexVector(high.dim() * low.dim())};
    for (Eigen::Index h = 0; h < high.dim(); ++h)
        out.amplitudes.segment(h * low.dim(), low.dim()) = high.amplitudes[h] * low.amplitudes;
    return out;
}

ComplexMatrix hadamard_matrix() {
    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

ComplexMatrix pauli_x_matrix() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

ComplexMatrix ry_matrix(double theta) {
    ComplexMatrix r(2, 2);
    r << std::cos(theta / 2), -std::sin(theta / 2),
         std::sin(theta / 2),  std::cos(theta / 2);
    return r;
}

ComplexMatrix swap_matrix() {
    ComplexMatrix s = ComplexMatrix::Identity(4, 4);
    s(1, 1) = s(2, 2) = 0;
    s(1, 2) = s(2, 1) = 1;
    return s;
}

ComplexMatrix qft_matrix(int m) {
    const Eigen::Index dim = Eigen::Index{1} << m;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    ComplexMatrix f(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        for (Eigen::Index x = 0; x < dim; ++x) {
            const double angle = 2.0 * M_PI * static_cast<double>(k * x) / static_cast<double>(dim);
            f(k, x) = scale * Complex(std::cos(angle), std::sin(angle));
        }
    return f;
}

void apply_in_place(QuantumState& state, const GateOp& gate) {
    const int k = static_cast<int>(gate.targets.size());
    if (k == 0) throw std::invalid_argument("apply: gate has no target qubits");
    check_qubit_list(state, gate.targets, "apply targets");
    check_qubit_list(state, gate.controls, "apply controls");
    for (int c : gate.controls)
        if (std::find(gate.targets.begin(), gate.targets.end(), c) != gate.targets.end())
            throw std::invalid_argument("apply: control qubit " + std::to_string(c) +
                                        " is also a target");

    const Eigen::Index gdim = Eigen::Index{1} << k;
    if (gate.matrix.rows() != gdim || gate.matrix.cols() != gdim)
        throw std::invalid_argument("apply: matrix is " + std::to_string(gate.matrix.rows()) +
                                    "x" + std::to_string(gate.matrix.cols()) + " but " +
                                    std::to_string(k) + " targets require dimension " +
                                    std::to_string(gdim));
    const double defect =
        (gate.matrix.adjoint() * gate.matrix - ComplexMatrix::Identity(gdim, gdim)).norm();
    if (defect > kTol.unitarity)
        throw std::invalid_argument("apply: matrix is not unitary (defect " +
                                    std::to_string(defect) + ")");

    std::uint64_t target_mask = 0, control_mask = 0;
    for (int t : gate.targets) target_mask |= std::uint64_t{1} << t;
    for (int c : gate.controls) control_mask |= std::uint64_t{1} << c;

    // Offsets of each gate-local basis pattern within the full index space.
    std::vector<std::uint64_t> offset(gdim, 0);
    for (Eigen::Index g = 0; g < gdim; ++g)
        for (int j = 0; j < k; ++j)
            if (g >> j & 1) offset[g] |= std::uint64_t{1} << gate.targets[j];

    ComplexVector in(gdim), out(gdim);
    const std::uint64_t dim = static_cast<std::uint64_t>(state.dim());
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & target_mask) continue;                       // not a base index
        if ((base & control_mask) != control_mask) continue;    // controls unsatisfied
        for (Eigen::Index g = 0; g < gdim; ++g) in[g] = state.amplitudes[base | offset[g]];
        out.noalias() = gate.matrix * in;
        for (Eigen::Index g = 0; g < gdim; ++g) state.amplitudes[base | offset[g]] = out[g];
    }
}

QuantumState apply(const QuantumState& state, const GateOp& gate) {
    QuantumState result = state;
    apply_in_place(result, gate);
    return result;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
    if (a.n_qubits != b.n_qubits)
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(a.n_qubits) + " vs " +
                                    std::to_string(b.n_qubits) + " qubits)");
    return a.amplitudes.dot(b.amplitudes);  // Eigen::dot conjugates the left factor
}

MeasureResult measure_qubit(const QuantumState& state, int qubit, std::uint64_t rng_seed) {
    check_qubit_list(state, {qubit}, "measure_qubit");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double p1 = 0.0;
    for (Eigen::Index i = 0; i < state.dim(); ++i)
        if (static_cast<std::uint64_t>(i) & bit) p1 += std::norm(state.amplitudes[i]);

    Rng rng(rng_seed);
    const int outcome = rng.uniform01() < p1 ? 1 : 0;
    const double prob = outcome ? p1 : 1.0 - p1;

    MeasureResult r;
    r.outcome = outcome;
    r.probability = prob;
    r.state = state;
    for (Eigen::Index i = 0; i < state.dim(); ++i)
        if (((static_cast<std::uint64_t>(i) & bit) != 0) != (outcome == 1))
            r.state.amplitudes[i] = 0.0;
    r.state.amplitudes /= r.state.amplitudes.norm();
    return r;
}

Eigen::VectorXd exact_probabilities(const QuantumState& state, const std::vector<int>& qubits) {
    if (qubits.empty()) throw std::invalid_argument("exact_probabilities: empty qubit list");
    check_qubit_list(state, qubits, "exact_probabilities");
    const int k = static_cast<int>(qubits.size());
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(Eigen::Index{1} << k);
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        Eigen::Index m = 0;
        for (int j = 0; j < k; ++j)
            if (static_cast<std::uint64_t>(i) >> qubits[j] & 1) m |= Eigen::Index{1} << j;
        probs[m] += std::norm(state.amplitudes[i]);
    }
    return probs;
}

ShotHistogram sample_counts(const QuantumState& state, const std::vector<int>& qubits,
                            std::int64_t shots, std::uint64_t rng_seed) {
    if (qubits.empty()) throw std::invalid_argument("sample_counts: empty qubit list");
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    const Eigen::VectorXd probs = exact_probabilities(state, qubits);

    Eigen::VectorXd cdf(probs.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);

    const int k = static_cast<int>(qubits.size());
    std::vector<std::int64_t> tally(probs.size(), 0);
    Rng rng(rng_seed);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform01() * acc;
        const auto it = std::upper_bound(cdf.data(), cdf.data() + cdf.size(), u);
        const Eigen::Index m = std::min<Eigen::Index>(it - cdf.data(), cdf.size() - 1);
        ++tally[m];
    }

    ShotHistogram hist;
    hist.total_shots = shots;
    hist.seed = rng_seed;
    for (Eigen::Index m = 0; m < probs.size(); ++m) {
        if (tally[m] == 0) continue;
        std::string key(k, '0');
        for (int j = 0; j < k; ++j)
            if (m >> j & 1) key[j] = '1';
        hist.counts[key] = tally[m];
    }
    return hist;
}

}  // namespace qbnn
