#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbnn/overlap.hpp"
#include "qbnn/rng.hpp"

namespace qbnn::bnn {

// Row-major so dataset rows (samples) pass through without relayout.
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Single-layer model: full-precision shadow weights in [0,1]^D with the bias
/// as the last coordinate; the forward pass always sees binarized weights.
template <class Scalar>
struct BnnModel {
    Vector<Scalar> weights_fp;
    int d_inputs = 0;  ///< D = d_inputs + 1
};

struct TrainConfig {
    double learning_rate = 0.5;
    int max_iterations = 500;
    int patience = 3;      ///< validation checks without improvement before convergence
    std::uint64_t seed = 0;
    double output_scale = 0.0;  ///< forward normalization factor; 0 → 1/D
};

struct TrainReport {
    int iterations = 0;          ///< epoch of the best validation loss (or target hit)
    double final_val_loss = 0.0;
    Eigen::VectorXi solution;    ///< binarized weights at that epoch
    bool converged = false;
    bool constrained = false;
    bool reached_target = false; ///< stop_at_loss was given and achieved
};

/// Elementwise threshold at 0.5; ties round up to 1.
template <class Scalar>
Eigen::VectorXi quantize(const Vector<Scalar>& weights_fp) {
    Eigen::VectorXi q(weights_fp.size());
    for (Eigen::Index i = 0; i < weights_fp.size(); ++i)
        q[i] = weights_fp[i] >= Scalar(0.5) ? 1 : 0;
    return q;
}

/// Closest binary vector to weights_fp at Hamming distance exactly h from the
/// constraint center. The cost of disagreeing with c at coordinate i over
/// agreeing is (1-2w_i)(1-2c_i); flipping the h coordinates with the smallest
/// such deltas (ties to the lowest index) is exactly optimal.
template <class Scalar>
Eigen::VectorXi project_to_constraint(const Vector<Scalar>& weights_fp,
                                      const overlap::HyperplaneConstraint& constraint) {
    const Eigen::Index d = weights_fp.size();
    if (constraint.center.size() != d)
        throw std::invalid_argument("project_to_constraint: dimension mismatch");
    const int h = constraint.hamming_radius;
    if (h < 0 || h > d)
        throw std::invalid_argument("project_to_constraint: radius out of range");

    std::vector<Eigen::Index> order(d);
    std::iota(order.begin(), order.end(), 0);
    Vector<Scalar> delta(d);
    for (Eigen::Index i = 0; i < d; ++i)
        delta[i] = (Scalar(1) - Scalar(2) * weights_fp[i]) *
                   Scalar(1 - 2 * constraint.center[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return delta[a] < delta[b]; });

    Eigen::VectorXi w = constraint.center;
    for (int j = 0; j < h; ++j) w[order[j]] = 1 - w[order[j]];
    return w;
}

template <class Scalar>
Eigen::VectorXi binarize(const BnnModel<Scalar>& model,
                         const std::optional<overlap::HyperplaneConstraint>& constraint) {
    return constraint ? project_to_constraint(model.weights_fp, *constraint)
                      : quantize(model.weights_fp);
}

inline double resolve_output_scale(const TrainConfig& config, Eigen::Index d) {
    return config.output_scale > 0.0 ? config.output_scale : 1.0 / static_cast<double>(d);
}

/// ŷ = scale * (q(w) · [x; 1]) for one sample.
template <class Scalar>
Scalar forward(const BnnModel<Scalar>& model, const Vector<Scalar>& x,
               const TrainConfig& config = {}) {
    if (x.size() != model.d_inputs)
        throw std::invalid_argument("forward: sample has " + std::to_string(x.size()) +
                                    " features, model expects " +
                                    std::to_string(model.d_inputs));
    const Eigen::VectorXi q = quantize(model.weights_fp);
    Scalar acc = static_cast<Scalar>(q[model.d_inputs]);  // bias weight
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (q[i]) acc += x[i];
    return static_cast<Scalar>(resolve_output_scale(config, model.weights_fp.size())) * acc;
}

/// Batch predictions for binarized weights `q` against rows of X.
template <class Scalar>
Vector<Scalar> predict(const Matrix<Scalar>& x, const Eigen::VectorXi& q, double scale) {
    if (x.cols() + 1 != q.size())
        throw std::invalid_argument("predict: weight length must be feature count + 1");
    Vector<Scalar> qw(q.size() - 1);
    for (Eigen::Index i = 0; i + 1 < q.size(); ++i) qw[i] = static_cast<Scalar>(q[i]);
    Vector<Scalar> out = x * qw;
    out.array() += static_cast<Scalar>(q[q.size() - 1]);
    return out * static_cast<Scalar>(scale);
}

template <class Scalar>
double mse_loss(const Vector<Scalar>& predictions, const Vector<Scalar>& targets) {
    if (predictions.size() != targets.size() || predictions.size() == 0)
        throw std::invalid_argument("mse_loss: inputs must be nonempty and equal length");
    return (predictions - targets).squaredNorm() / static_cast<double>(predictions.size());
}

/// One full-batch gradient step. The forward pass uses binarized weights;
/// the backward pass passes the gradient straight through the binarization
/// (∂q/∂w ≈ 1) and clamps the shadow weights back into [0, 1].
template <class Scalar>
void grad_step(BnnModel<Scalar>& model, const Matrix<Scalar>& batch_x,
               const Vector<Scalar>& batch_y, const TrainConfig& config,
               const std::optional<overlap::HyperplaneConstraint>& constraint = {}) {
    if (batch_x.rows() == 0) throw std::invalid_argument("grad_step: empty batch");
    if (batch_x.rows() != batch_y.size())
        throw std::invalid_argument("grad_step: batch size mismatch");

    const double scale = resolve_output_scale(config, model.weights_fp.size());
    const Eigen::VectorXi q = binarize(model, constraint);
    const Vector<Scalar> residual = predict(batch_x, q, scale) - batch_y;

    const Scalar coeff =
        static_cast<Scalar>(2.0 * scale / static_cast<double>(batch_x.rows()));
    Vector<Scalar> grad(model.weights_fp.size());
    grad.head(batch_x.cols()).noalias() = coeff * (batch_x.transpose() * residual);
    grad[model.weights_fp.size() - 1] = coeff * residual.sum();  // bias column of ones

    model.weights_fp -= static_cast<Scalar>(config.learning_rate) * grad;
    model.weights_fp = model.weights_fp.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

template <class Scalar>
BnnModel<Scalar> init_model(int d_inputs, std::uint64_t seed) {
    BnnModel<Scalar> model;
    model.d_inputs = d_inputs;
    model.weights_fp.resize(d_inputs + 1);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < model.weights_fp.size(); ++i)
        model.weights_fp[i] = static_cast<Scalar>(rng.uniform01());
    return model;
}

/// Quantization-aware training loop. Convergence is declared when the
/// validation MSE fails to improve for `patience` consecutive epochs; the
/// report carries the best-validation epoch. When `stop_at_loss` is given,
/// training additionally stops at the first epoch whose validation loss
/// reaches it (the paired-experiment arm).
template <class Scalar>
TrainReport train(const Matrix<Scalar>& train_x, const Vector<Scalar>& train_y,
                  const Matrix<Scalar>& val_x, const Vector<Scalar>& val_y,
                  const TrainConfig& config,
                  const std::optional<overlap::HyperplaneConstraint>& constraint = {},
                  std::optional<double> stop_at_loss = {}) {
    if (train_x.rows() == 0 || val_x.rows() == 0)
        throw std::invalid_argument("train: empty split");
    if (config.max_iterations < 1 || config.patience < 1)
        throw std::invalid_argument("train: max_iterations and patience must be >= 1");
    const Eigen::Index d = train_x.cols() + 1;
    if (constraint && constraint->center.size() != d)
        throw std::invalid_argument("train: constraint dimension mismatch");

    const double scale = resolve_output_scale(config, d);
    BnnModel<Scalar> model = init_model<Scalar>(static_cast<int>(train_x.cols()), config.seed);

    TrainReport report;
    report.constrained = constraint.has_value();
    double best_loss = std::numeric_limits<double>::infinity();
    int best_epoch = 0, stale = 0;
    Eigen::VectorXi best_solution;

    for (int epoch = 1; epoch <= config.max_iterations; ++epoch) {
        grad_step(model, train_x, train_y, config, constraint);
        const Eigen::VectorXi q = binarize(model, constraint);
        const double val_loss = mse_loss<Scalar>(predict(val_x, q, scale), val_y);

        if (val_loss < best_loss) {
            best_loss = val_loss;
            best_epoch = epoch;
            best_solution = q;
            stale = 0;
        } else {
            ++stale;
        }
        if (stop_at_loss && val_loss <= *stop_at_loss) {
            report.iterations = epoch;
            report.final_val_loss = val_loss;
            report.solution = q;
            report.converged = true;
            report.reached_target = true;
            return report;
        }
        if (stale >= config.patience) {
            report.converged = true;
            break;
        }
    }

    report.iterations = best_epoch;
    report.final_val_loss = best_loss;
    report.solution = best_solution;
    return report;
}

/// Classical stand-in for the quantum extraction: a random binary center and
/// its exact Hamming distance to the known solution.
overlap::HyperplaneConstraint emulate_quantum_constraint(const Eigen::VectorXi& w_star,
                                                         std::uint64_t center_seed);

int hamming_distance(const Eigen::VectorXi& a, const Eigen::VectorXi& b);

}  // namespace qbnn::bnn
