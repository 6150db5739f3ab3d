#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qbnn/experiment.hpp"

using namespace qbnn;
using namespace qbnn::experiment;

namespace {

// Small planted-teacher task in float, the experiment's working precision.
struct Task {
    bnn::Matrix<float> x_train, x_val;
    bnn::Vector<float> y_train, y_val;
};

Task make_task(std::uint64_t seed) {
    Rng rng(seed);
    const int d_in = 12, n_train = 300, n_val = 80;
    Task t;
    t.x_train.resize(n_train, d_in);
    t.x_val.resize(n_val, d_in);
    for (int r = 0; r < n_train; ++r)
        for (int c = 0; c < d_in; ++c) t.x_train(r, c) = static_cast<float>(rng.uniform01());
    for (int r = 0; r < n_val; ++r)
        for (int c = 0; c < d_in; ++c) t.x_val(r, c) = static_cast<float>(rng.uniform01());

    Eigen::VectorXi teacher(d_in + 1);
    for (int i = 0; i <= d_in; ++i) teacher[i] = static_cast<int>(rng.below(2));
    const double scale = 0.25;
    t.y_train = bnn::predict(t.x_train, teacher, scale);
    t.y_val = bnn::predict(t.x_val, teacher, scale);
    return t;
}

ExperimentConfig make_config(int runs, int jobs) {
    ExperimentConfig cfg;
    cfg.runs = runs;
    cfg.jobs = jobs;
    cfg.seed = 77;
    cfg.train.learning_rate = 1.0;
    cfg.train.output_scale = 0.25;
    cfg.train.max_iterations = 300;
    return cfg;
}

}  // namespace

TEST_CASE("paired runs share the initialization and report a valid radius") {
    const Task t = make_task(5);
    const ExperimentConfig cfg = make_config(3, 1);
    const auto pairs = run_paired_experiment(t.x_train, t.y_train, t.x_val, t.y_val, cfg);
    REQUIRE(pairs.size() == 3);

    for (const RunPair& p : pairs) {
        CHECK_FALSE(p.baseline.constrained);
        CHECK(p.constrained.constrained);
        CHECK(p.hamming_radius >= 0);
        CHECK(p.hamming_radius <= 13);
        CHECK(p.baseline.iterations >= 1);
        CHECK(p.constrained.iterations >= 1);

        // Rebuilding the baseline arm from the pair's seed reproduces it.
        bnn::TrainConfig tc = cfg.train;
        tc.seed = p.seed;
        const bnn::TrainReport redo = bnn::train(t.x_train, t.y_train, t.x_val, t.y_val, tc);
        CHECK(redo.iterations == p.baseline.iterations);
        CHECK(redo.final_val_loss == p.baseline.final_val_loss);
        CHECK(redo.solution == p.baseline.solution);
    }
}

TEST_CASE("the parallel driver is deterministic and order-stable") {
    const Task t = make_task(9);
    const auto serial =
        run_paired_experiment(t.x_train, t.y_train, t.x_val, t.y_val, make_config(6, 1));
    const auto parallel =
        run_paired_experiment(t.x_train, t.y_train, t.x_val, t.y_val, make_config(6, 2));
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].run_id == static_cast<int>(i));
        CHECK(serial[i].seed == parallel[i].seed);
        CHECK(serial[i].baseline.iterations == parallel[i].baseline.iterations);
        CHECK(serial[i].constrained.final_val_loss == parallel[i].constrained.final_val_loss);
        CHECK(serial[i].hamming_radius == parallel[i].hamming_radius);
    }
}

TEST_CASE("summarize computes the paired statistics") {
    std::vector<RunPair> pairs(2);
    pairs[0].baseline.iterations = 30;
    pairs[0].baseline.final_val_loss = 0.10;
    pairs[0].constrained.iterations = 15;
    pairs[0].constrained.final_val_loss = 0.10;  // equal counts as equal-or-better
    pairs[1].baseline.iterations = 10;
    pairs[1].baseline.final_val_loss = 0.20;
    pairs[1].constrained.iterations = 15;
    pairs[1].constrained.final_val_loss = 0.23;  // 15% worse

    const Summary s = summarize(pairs);
    CHECK(s.runs == 2);
    CHECK(s.mean_baseline_iterations == doctest::Approx(20.0));
    CHECK(s.mean_constrained_iterations == doctest::Approx(15.0));
    CHECK(s.improvement_ratio == doctest::Approx(0.25));
    CHECK(s.frac_equal_or_better == doctest::Approx(0.5));
    CHECK(s.worse_runs == 1);
    CHECK(s.mean_rel_mse_gap_worse == doctest::Approx(0.15));
}

TEST_CASE("CSV serialization carries one row per arm") {
    const Task t = make_task(13);
    const auto pairs =
        run_paired_experiment(t.x_train, t.y_train, t.x_val, t.y_val, make_config(2, 1));
    std::ostringstream csv;
    write_csv(csv, pairs);
    const std::string text = csv.str();
    CHECK(text.find("run_id,constrained,iterations,final_val_loss,converged,seed,h") !=
          std::string::npos);

    int lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(lines == 1 + 2 * 2);
    CHECK(text.find("0,0,") != std::string::npos);
    CHECK(text.find("0,1,") != std::string::npos);
}
