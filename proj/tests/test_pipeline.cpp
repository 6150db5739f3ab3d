#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "qbnn/pipeline.hpp"

using namespace qbnn;
using namespace qbnn::pipeline;

namespace {

// Oracle: unconstrained exhaustive search over every vertex of the cube.
Eigen::VectorXi exhaustive_solution(const hhl::LinearSystem& system, int d) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXi best_v(d), v(d);
    for (std::int64_t code = 0; code < (std::int64_t{1} << d); ++code) {
        for (int i = 0; i < d; ++i) v[i] = static_cast<int>(code >> i & 1);
        const double residual =
            (system.matrix_a * v.cast<Complex>() - system.vector_b).norm();
        if (residual < best) {
            best = residual;
            best_v = v;
        }
    }
    return best_v;
}

}  // namespace

TEST_CASE("toy problems have clock-representable spectra and binary solutions") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const ToyProblem toy = make_toy_problem(4, seed);
        CHECK(toy.true_weights.sum() >= 1);
        // The planted solution solves the system exactly.
        const ComplexVector residual =
            toy.system.matrix_a * toy.true_weights.cast<Complex>() - toy.system.vector_b;
        CHECK(residual.norm() < 1e-10);
        // Spectrum is 1..4 by construction.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(toy.system.matrix_a);
        for (int i = 0; i < 4; ++i)
            CHECK(es.eigenvalues()[i] == doctest::Approx(i + 1).epsilon(1e-9));
    }
    CHECK_THROWS_AS(make_toy_problem(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_toy_problem(16, 1), std::invalid_argument);
}

TEST_CASE("the exact-mode hybrid loop recovers the planted weights") {
    int saw_zero_radius = 0, saw_disjoint = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        ToyPipelineConfig cfg;
        cfg.n_weights = 4;
        cfg.seed = seed;
        const PipelineResult r = run_toy_pipeline(cfg);

        CHECK(r.hhl_fidelity >= 0.99);
        CHECK(r.recovered_exact);
        CHECK(r.recovered_weights == r.true_weights);
        CHECK(r.active_count_estimate == r.true_weights.sum());
        CHECK(r.candidates_checked >= 1);
        CHECK(r.candidates_checked <= r.search_space);

        // The constrained search agrees with the unconstrained oracle.
        const ToyProblem toy = make_toy_problem(4, seed);
        CHECK(exhaustive_solution(toy.system, 4) == r.recovered_weights);

        const int n = r.true_weights.sum(), m = r.test_mask.sum();
        int intersection = 0;
        for (int i = 0; i < 4; ++i) intersection += r.true_weights[i] && r.test_mask[i];
        if (r.test_mask == r.true_weights) {
            ++saw_zero_radius;
            CHECK(r.hamming_radius == 0);
            CHECK(r.candidates_checked == 1);
        }
        if (intersection == 0) {
            ++saw_disjoint;
            CHECK(r.hamming_radius == n + m);
        }
        CHECK(r.euclid_sq_distance >= -1e-12);
        CHECK(r.euclid_sq_distance <= 2.0 + 1e-12);
    }
    // The 40-seed sweep must visit both geometric edge cases.
    CHECK(saw_zero_radius >= 1);
    CHECK(saw_disjoint >= 1);
}

TEST_CASE("two-weight and eight-weight toys pass end to end") {
    for (const int d : {2, 8}) {
        ToyPipelineConfig cfg;
        cfg.n_weights = d;
        cfg.seed = 5;
        const PipelineResult r = run_toy_pipeline(cfg);
        CHECK(r.recovered_exact);
    }
}

TEST_CASE("a widened radius still admits the planted solution") {
    ToyPipelineConfig cfg;
    cfg.n_weights = 4;
    cfg.seed = 11;
    cfg.widen_radius = true;
    const PipelineResult r = run_toy_pipeline(cfg);
    CHECK(r.recovered_exact);
}

TEST_CASE("sampled ancilla statistics still drive the loop at high shot counts") {
    for (std::uint64_t seed : {1, 2, 3}) {
        ToyPipelineConfig cfg;
        cfg.n_weights = 4;
        cfg.seed = seed;
        cfg.shots = 50000;
        const PipelineResult r = run_toy_pipeline(cfg);
        CHECK_FALSE(r.mask_overlap.exact);
        CHECK(r.mask_overlap.std_error > 0.0);
        CHECK(r.recovered_exact);
    }
}

TEST_CASE("an unreachable fidelity threshold aborts with a stage diagnostic") {
    ToyPipelineConfig cfg;
    cfg.n_weights = 4;
    cfg.seed = 2;
    cfg.min_fidelity = 1.1;
    CHECK_THROWS_WITH_AS(run_toy_pipeline(cfg), doctest::Contains("pipeline[hhl]"),
                         std::runtime_error);
}
