#include "qbnn/experiment.hpp"

#include <atomic>
#include <ostream>
#include <thread>

namespace qbnn::experiment {

std::vector<RunPair> run_paired_experiment(const bnn::Matrix<float>& train_x,
                                           const bnn::Vector<float>& train_y,
                                           const bnn::Matrix<float>& val_x,
                                           const bnn::Vector<float>& val_y,
                                           const ExperimentConfig& config) {
    if (config.runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
    const int jobs = std::max(1, config.jobs);

    std::vector<RunPair> pairs(config.runs);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int run = next.fetch_add(1);
            if (run >= config.runs) return;
            pairs[run] = run_one_pair(train_x, train_y, val_x, val_y, config, run);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return pairs;
}

Summary summarize(const std::vector<RunPair>& pairs) {
    Summary s;
    s.runs = static_cast<int>(pairs.size());
    if (pairs.empty()) return s;

    double base_iters = 0.0, cons_iters = 0.0, gap = 0.0;
    int equal_or_better = 0;
    for (const RunPair& p : pairs) {
        base_iters += p.baseline.iterations;
        cons_iters += p.constrained.iterations;
        if (p.constrained.final_val_loss <= p.baseline.final_val_loss) {
            ++equal_or_better;
        } else {
            ++s.worse_runs;
            gap += (p.constrained.final_val_loss - p.baseline.final_val_loss) /
                   p.baseline.final_val_loss;
        }
    }
    s.mean_baseline_iterations = base_iters / s.runs;
    s.mean_constrained_iterations = cons_iters / s.runs;
    s.improvement_ratio =
        s.mean_baseline_iterations > 0.0
            ? 1.0 - s.mean_constrained_iterations / s.mean_baseline_iterations
            : 0.0;
    s.frac_equal_or_better = static_cast<double>(equal_or_better) / s.runs;
    s.mean_rel_mse_gap_worse = s.worse_runs > 0 ? gap / s.worse_runs : 0.0;
    return s;
}

void write_csv(std::ostream& out, const std::vector<RunPair>& pairs) {
    out << "run_id,constrained,iterations,final_val_loss,converged,seed,h\n";
    for (const RunPair& p : pairs) {
        out << p.run_id << ",0," << p.baseline.iterations << ','
            << p.baseline.final_val_loss << ',' << (p.baseline.converged ? 1 : 0) << ','
            << p.seed << ",-1\n";
        out << p.run_id << ",1," << p.constrained.iterations << ','
            << p.constrained.final_val_loss << ',' << (p.constrained.converged ? 1 : 0)
            << ',' << p.seed << ',' << p.hamming_radius << '\n';
    }
}

}  // namespace qbnn::experiment
