#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qbnn/bnn.hpp"
#include "qbnn/overlap.hpp"

using namespace qbnn;
using namespace qbnn::bnn;

namespace {

using Vec = Vector<double>;
using Mat = Matrix<double>;

// Relaxed predictor (quantization frozen to identity) for the gradient oracle.
double relaxed_loss(const Mat& x, const Vec& y, const Vec& u, double scale) {
    const Vec pred = scale * (x * u.head(u.size() - 1) + Vec::Ones(x.rows()) * u[u.size() - 1]);
    return (pred - y).squaredNorm() / static_cast<double>(x.rows());
}

// Exhaustive minimum-distance vertex on the Hamming-h shell around c.
Eigen::VectorXi brute_force_projection(const Vec& w, const Eigen::VectorXi& c, int h) {
    const int d = static_cast<int>(w.size());
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXi best_v;
    for (std::int64_t code = 0; code < (std::int64_t{1} << d); ++code) {
        Eigen::VectorXi v(d);
        int dist = 0;
        for (int i = 0; i < d; ++i) {
            v[i] = static_cast<int>(code >> i & 1);
            dist += v[i] != c[i];
        }
        if (dist != h) continue;
        const double cost = (v.cast<double>() - w).squaredNorm();
        if (cost < best - 1e-15) {
            best = cost;
            best_v = v;
        }
    }
    return best_v;
}

Mat toy_inputs() {
    Mat x(4, 2);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    return x;
}

}  // namespace

TEST_CASE("quantize thresholds at one half, ties up") {
    Vec w(2);
    w << 0.2, 0.8;
    Eigen::VectorXi q = quantize(w);
    CHECK(q[0] == 0);
    CHECK(q[1] == 1);

    Vec tie(1);
    tie << 0.5;
    CHECK(quantize(tie)[0] == 1);

    Vec zeros = Vec::Zero(3);
    CHECK(quantize(zeros).sum() == 0);
}

TEST_CASE("forward applies binarized weights to the augmented input") {
    TrainConfig unit_scale;
    unit_scale.output_scale = 1.0;

    BnnModel<double> model;
    model.d_inputs = 3;
    model.weights_fp = Vec::Zero(4);
    Vec x(3);
    x << 0.5, 0.25, 0.9;
    CHECK(forward(model, x, unit_scale) == doctest::Approx(0.0));

    model.weights_fp << 0, 0, 0, 1;  // only the bias active
    TrainConfig scaled;
    scaled.output_scale = 0.7;
    CHECK(forward(model, x, scaled) == doctest::Approx(0.7));

    model.weights_fp << 1, 1, 0, 0;
    CHECK(forward(model, x, unit_scale) == doctest::Approx(0.75));

    Vec wrong(2);
    CHECK_THROWS_AS(forward(model, wrong, unit_scale), std::invalid_argument);
}

TEST_CASE("mse_loss") {
    Vec a(2), b(2);
    a << 1, 0;
    b << 1, 0;
    CHECK(mse_loss(a, b) == doctest::Approx(0.0));
    b << 0, 1;
    CHECK(mse_loss(a, b) == doctest::Approx(1.0));

    Vec half(1), zero(1);
    half << 0.5;
    zero << 0;
    CHECK(mse_loss(half, zero) == doctest::Approx(0.25));

    Vec empty;
    CHECK_THROWS_AS(mse_loss(empty, empty), std::invalid_argument);
}

TEST_CASE("grad_step leaves a perfect fit untouched") {
    TrainConfig config;
    config.output_scale = 1.0;
    config.learning_rate = 0.3;

    BnnModel<double> model;
    model.d_inputs = 2;
    model.weights_fp.resize(3);
    model.weights_fp << 1, 0, 0;  // predicts y = x1 exactly

    const Mat x = toy_inputs();
    const Vec y = x.col(0);
    const Vec before = model.weights_fp;
    grad_step(model, x, y, config);
    CHECK((model.weights_fp - before).norm() == doctest::Approx(0.0));
}

TEST_CASE("the straight-through gradient matches finite differences of the relaxed loss") {
    Rng rng(23);
    TrainConfig config;
    config.output_scale = 0.5;
    config.learning_rate = 1e-3;  // small enough to read the gradient off the update

    Mat x(6, 4);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 4; ++c) x(r, c) = rng.uniform01();
    Vec y(6);
    for (int r = 0; r < 6; ++r) y[r] = rng.uniform01();

    BnnModel<double> model;
    model.d_inputs = 4;
    model.weights_fp.resize(5);
    for (int i = 0; i < 5; ++i) model.weights_fp[i] = 0.25 + 0.5 * rng.uniform01();

    const Vec before = model.weights_fp;
    BnnModel<double> stepped = model;
    grad_step(stepped, x, y, config);
    const Vec grad = (before - stepped.weights_fp) / config.learning_rate;

    // The straight-through gradient is the relaxed-loss gradient evaluated at
    // the binarized point; central differences there are the oracle.
    const Vec u = quantize(before).cast<double>();
    const double h = 1e-6;
    for (int j = 0; j < 5; ++j) {
        Vec up = u, down = u;
        up[j] += h;
        down[j] -= h;
        const double fd = (relaxed_loss(x, y, up, config.output_scale) -
                           relaxed_loss(x, y, down, config.output_scale)) /
                          (2 * h);
        CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("clamping keeps weights inside the unit box") {
    TrainConfig config;
    config.output_scale = 1.0;
    config.learning_rate = 50.0;  // force saturation

    BnnModel<double> model;
    model.d_inputs = 2;
    model.weights_fp.resize(3);
    model.weights_fp << 0.0, 1.0, 0.6;

    const Mat x = toy_inputs();
    const Vec y = Vec::Zero(4);  // all-positive residuals push weights down
    grad_step(model, x, y, config);
    CHECK(model.weights_fp.minCoeff() >= 0.0);
    CHECK(model.weights_fp.maxCoeff() <= 1.0);
    CHECK(model.weights_fp[0] == doctest::Approx(0.0));  // pinned at the floor
}

TEST_CASE("project_to_constraint matches the spec example and brute force") {
    Eigen::VectorXi c(4);
    c << 1, 1, 0, 0;

    SUBCASE("h = 0 returns the center") {
        Vec w(4);
        w << 0.9, 0.1, 0.9, 0.1;
        CHECK(project_to_constraint(w, overlap::build_constraint(c, 0)) == c);
    }

    SUBCASE("worked example: flip costs {1.82, 0.42, 0.82, 1.82}") {
        Vec w(4);
        w << 0.9, 0.2, 0.6, 0.1;
        const Eigen::VectorXi p = project_to_constraint(w, overlap::build_constraint(c, 1));
        Eigen::VectorXi expected(4);
        expected << 1, 0, 0, 0;
        CHECK(p == expected);
    }

    SUBCASE("greedy equals the exhaustive minimum for all D <= 8, all h") {
        Rng rng(29);
        for (int d = 1; d <= 8; ++d)
            for (int h = 0; h <= d; ++h)
                for (int rep = 0; rep < 20; ++rep) {
                    Vec w(d);
                    for (int i = 0; i < d; ++i) w[i] = rng.uniform01();
                    Eigen::VectorXi center(d);
                    for (int i = 0; i < d; ++i) center[i] = static_cast<int>(rng.below(2));
                    const auto constraint = overlap::build_constraint(center, h);
                    const Eigen::VectorXi greedy = project_to_constraint(w, constraint);
                    CHECK(hamming_distance(greedy, center) == h);
                    const Eigen::VectorXi brute = brute_force_projection(w, center, h);
                    CHECK((greedy.cast<double>() - w).squaredNorm() ==
                          doctest::Approx((brute.cast<double>() - w).squaredNorm())
                              .epsilon(1e-12));
                }
    }

    SUBCASE("radius out of range") {
        Vec w = Vec::Zero(4);
        overlap::HyperplaneConstraint bad{c, 5, 20.0};
        CHECK_THROWS_AS(project_to_constraint(w, bad), std::invalid_argument);
    }
}

TEST_CASE("train solves the separable toy set to the exhaustive optimum") {
    const Mat x = toy_inputs();
    const Vec y = x.col(0);  // target equals the first input

    TrainConfig config;
    config.output_scale = 1.0;
    config.learning_rate = 0.4;
    config.max_iterations = 300;
    config.seed = 7;

    // Exhaustive oracle over all 2^3 binary weight vectors.
    double best_possible = std::numeric_limits<double>::infinity();
    for (int code = 0; code < 8; ++code) {
        Eigen::VectorXi v(3);
        for (int i = 0; i < 3; ++i) v[i] = code >> i & 1;
        best_possible = std::min(best_possible, mse_loss<double>(predict(x, v, 1.0), y));
    }
    CHECK(best_possible == doctest::Approx(0.0));

    const TrainReport report = train(x, y, x, y, config);
    CHECK(report.converged);
    CHECK(report.final_val_loss <= best_possible + 1e-9);
    CHECK(report.iterations <= config.max_iterations);

    const TrainReport again = train(x, y, x, y, config);
    CHECK(report.iterations == again.iterations);
    CHECK(report.final_val_loss == again.final_val_loss);
    CHECK(report.solution == again.solution);
}

TEST_CASE("a pinned h=0 constraint at the solution converges in one iteration") {
    const Mat x = toy_inputs();
    const Vec y = x.col(0);
    Eigen::VectorXi w_star(3);
    w_star << 1, 0, 0;

    TrainConfig config;
    config.output_scale = 1.0;
    config.learning_rate = 0.4;
    config.seed = 3;

    const TrainReport report =
        train(x, y, x, y, config, overlap::build_constraint(w_star, 0));
    CHECK(report.constrained);
    CHECK(report.iterations == 1);
    CHECK(report.solution == w_star);
    CHECK(report.final_val_loss == doctest::Approx(0.0));
}

TEST_CASE("an exact-radius constraint does not slow convergence on average") {
    // Planted teacher on 10 inputs; targets are exactly realizable.
    Rng rng(41);
    const int d_in = 10, samples = 160;
    Mat x(samples, d_in);
    for (int r = 0; r < samples; ++r)
        for (int c = 0; c < d_in; ++c) x(r, c) = rng.uniform01();
    Eigen::VectorXi teacher(d_in + 1);
    for (int i = 0; i <= d_in; ++i) teacher[i] = static_cast<int>(rng.below(2));
    const double scale = 1.0 / 4.0;
    const Vec y = predict(x, teacher, scale);

    TrainConfig config;
    config.output_scale = scale;
    config.learning_rate = 1.2;
    config.max_iterations = 400;

    double baseline_iters = 0.0, constrained_iters = 0.0;
    for (int run = 0; run < 30; ++run) {
        config.seed = mix_seed(1234, run);
        const TrainReport base = train(x, y, x, y, config);
        const auto constraint =
            emulate_quantum_constraint(base.solution, mix_seed(99, run));
        const TrainReport cons =
            train(x, y, x, y, config, constraint, base.final_val_loss);
        baseline_iters += base.iterations;
        constrained_iters += cons.iterations;
    }
    CHECK(constrained_iters <= baseline_iters);
}

TEST_CASE("emulate_quantum_constraint reports the exact Hamming distance") {
    Eigen::VectorXi w_star(6);
    w_star << 1, 0, 1, 1, 0, 0;

    const auto c1 = emulate_quantum_constraint(w_star, 5);
    CHECK(c1.hamming_radius == hamming_distance(c1.center, w_star));
    CHECK(c1.euclid_sq == 4.0 * c1.hamming_radius);
    const auto c2 = emulate_quantum_constraint(w_star, 5);
    CHECK(c1.center == c2.center);  // seeded

    // Cross-module oracle: the same radius falls out of the exact SWAP-test
    // geometry on uniform-mask encodings, for any nonzero pair.
    Rng rng(71);
    for (int rep = 0; rep < 15; ++rep) {
        const int d = 8;  // basis positions of a 3-qubit register
        Eigen::VectorXi star(d);
        int n_star = 0;
        while (n_star == 0) {
            n_star = 0;
            for (int i = 0; i < d; ++i) n_star += star[i] = static_cast<int>(rng.below(2));
        }
        overlap::HyperplaneConstraint constraint =
            emulate_quantum_constraint(star, mix_seed(500, rep));
        const int n_center = constraint.center.sum();
        if (n_center == 0) continue;

        std::vector<int> mask_w(star.data(), star.data() + d);
        std::vector<int> mask_c(constraint.center.data(), constraint.center.data() + d);
        const QuantumState sw = overlap::prepare_test_state(
            {overlap::TestStateKind::uniform_over_mask, mask_w, 3});
        const QuantumState sc = overlap::prepare_test_state(
            {overlap::TestStateKind::uniform_over_mask, mask_c, 3});
        const auto est = overlap::swap_test(sw, sc, 0, 0);
        CHECK(overlap::hamming_radius_from_overlap(est.overlap_sq, n_star, n_center) ==
              constraint.hamming_radius);
    }
}
