#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qbnn/data.hpp"
#include "qbnn/errors.hpp"
#include "qbnn/experiment.hpp"
#include "qbnn/hhl.hpp"
#include "qbnn/overlap.hpp"
#include "qbnn/pipeline.hpp"
#include "qbnn/sampling.hpp"
#include "qbnn/statevector.hpp"

using nlohmann::json;
using namespace qbnn;

namespace {

constexpr int kExitParse = 2;      // malformed flags, files, or specs
constexpr int kExitNumeric = 3;    // numerical or configuration failures
constexpr int kExitThreshold = 4;  // below a requested acceptance threshold

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Expands "--config FILE" into the file's "--key=value" tokens, spliced in
// right after the subcommand name so explicit flags (which come later) win.
// The file is flat key=value text, one entry per line, '#' comments.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string tok = argv[i];
        if (tok == "--config" && i + 1 < argc)
            config_path = argv[++i];
        else if (tok.rfind("--config=", 0) == 0)
            config_path = tok.substr(9);
        else
            args.push_back(tok);
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw parse_error(config_path + ": cannot open config file");
    std::vector<std::string> injected;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trimmed(line.substr(0, eq)).empty())
            throw parse_error(config_path + ":" + std::to_string(line_no) +
                              ": expected key=value");
        injected.push_back("--" + trimmed(line.substr(0, eq)) + "=" +
                           trimmed(line.substr(eq + 1)));
    }
    args.insert(args.begin() + (args.empty() ? 0 : 1), injected.begin(), injected.end());
    return args;
}

// State specs: "uniform:<n>" | "mask:<bits>" | "basis:<n>:<index>".
QuantumState parse_state_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw parse_error("state spec '" + spec + "': expected kind:argument");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    try {
        if (kind == "uniform") {
            return overlap::prepare_test_state(
                {overlap::TestStateKind::full_uniform, {}, std::stoi(arg)});
        }
        if (kind == "mask") {
            std::vector<int> mask;
            for (const char c : arg) {
                if (c != '0' && c != '1')
                    throw parse_error("state spec '" + spec + "': mask must be 0/1 digits");
                mask.push_back(c - '0');
            }
            int n = 0;
            while ((std::size_t{1} << n) < mask.size()) ++n;
            if ((std::size_t{1} << n) != mask.size())
                throw parse_error("state spec '" + spec +
                                  "': mask length must be a power of two");
            return overlap::prepare_test_state(
                {overlap::TestStateKind::uniform_over_mask, mask, n});
        }
        if (kind == "basis") {
            const auto second = arg.find(':');
            if (second == std::string::npos)
                throw parse_error("state spec '" + spec + "': expected basis:<n>:<index>");
            return basis_state(std::stoi(arg.substr(0, second)),
                               std::stoll(arg.substr(second + 1)));
        }
    } catch (const std::invalid_argument& e) {
        throw parse_error("state spec '" + spec + "': " + e.what());
    } catch (const std::out_of_range&) {
        throw parse_error("state spec '" + spec + "': value out of range");
    }
    throw parse_error("state spec '" + spec + "': unknown kind '" + kind + "'");
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2);
    std::cout << text << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw parse_error(out_path + ": cannot open for writing");
        out << text << "\n";
    }
}

json estimate_json(const overlap::OverlapEstimate& est) {
    return {{"p0_hat", est.p0_hat},
            {"overlap_sq", est.overlap_sq},
            {"ed_sq", overlap::overlap_to_distance(est)},
            {"std_error", est.std_error},
            {"shots", est.shots},
            {"exact", est.exact}};
}

json amplitudes_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back({v[i].real(), v[i].imag()});
    return out;
}

// ---------------------------------------------------------------- hhl ------

struct HhlArgs {
    std::string system_path, out;
    int clock = 3;
    double time = 0.0, rotation = 0.0, min_fidelity = 0.99;
    std::int64_t shots = 0;
    std::uint64_t seed = 1;
};

int cmd_hhl(const HhlArgs& args) {
    const hhl::LinearSystem system = hhl::read_system_file(args.system_path);
    hhl::HHLConfig config;
    config.clock_qubits = args.clock;
    config.evolution_time = args.time;
    config.rotation_constant = args.rotation;
    config.shots = args.shots;
    config.seed = args.seed;

    const hhl::HHLSolution sol = hhl::run_hhl(system, config);
    json j{{"solution_amplitudes", amplitudes_json(sol.solution_state.amplitudes)},
           {"success_probability", sol.success_probability},
           {"clock_zero_probability", sol.clock_zero_probability},
           {"condition_number", sol.condition_number},
           {"clock_qubits", config.clock_qubits}};
    if (sol.fidelity) j["fidelity"] = *sol.fidelity;
    if (sol.sampled_success_frequency)
        j["sampled_success_frequency"] = *sol.sampled_success_frequency;
    emit(j, args.out);

    if (!sol.fidelity || *sol.fidelity < args.min_fidelity) {
        std::cerr << "fidelity below threshold " << args.min_fidelity << "\n";
        return kExitThreshold;
    }
    return 0;
}

// ---------------------------------------------------------------- swap -----

struct SwapArgs {
    std::string state_a, state_b, state_c, out;
    std::string variant = "fanout";
    bool chained = false;
    std::int64_t shots = 0;
    std::uint64_t seed = 1;
};

int cmd_swap(const SwapArgs& args) {
    const QuantumState a = parse_state_spec(args.state_a);
    const QuantumState b = parse_state_spec(args.state_b);
    if (!args.chained && args.state_c.empty()) {
        emit(estimate_json(overlap::swap_test(a, b, args.shots, args.seed)), args.out);
        return 0;
    }
    if (args.state_c.empty())
        throw parse_error("--chained requires --state-c for the second reference");
    const QuantumState c = parse_state_spec(args.state_c);
    const auto variant = args.variant == "chain" ? overlap::ChainVariant::chain
                                                 : overlap::ChainVariant::fanout;
    const auto ests = overlap::chained_swap_test(a, {b, c}, variant, args.shots, args.seed);
    emit(json{{"variant", args.variant},
              {"ancilla_estimates", {estimate_json(ests[0]), estimate_json(ests[1])}}},
         args.out);
    return 0;
}

// ------------------------------------------------------------- sampling ----

struct SamplingArgs {
    std::vector<std::string> kinds{"random", "uniform"};
    std::vector<int> sizes{2, 4, 8, 16, 32};
    std::vector<double> epsilons{0.02, 0.05};
    int trials = 20;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_sampling(const SamplingArgs& args) {
    std::vector<sampling::DistributionKind> kinds;
    for (const auto& k : args.kinds)
        kinds.push_back(k == "random" ? sampling::DistributionKind::random
                                      : sampling::DistributionKind::uniform);
    const auto rows =
        sampling::run_sweep(kinds, args.sizes, args.epsilons, args.trials, args.seed);
    if (args.out.empty()) {
        sampling::write_csv(std::cout, rows);
    } else {
        std::ofstream out(args.out);
        if (!out) throw parse_error(args.out + ": cannot open for writing");
        sampling::write_csv(out, rows);
        std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ experiment ---

struct ExperimentArgs {
    std::string images, labels, data_dir, out = "experiment.csv", summary_out;
    int runs = 100, jobs = 1, val_size = 6000, max_iters = 150, patience = 5;
    double alpha = 50.0, scale = 0.0625;
    std::uint64_t seed = 1;
};

int cmd_experiment(const ExperimentArgs& args) {
    std::string images = args.images, labels = args.labels;
    if (images.empty() || labels.empty()) {
        std::string dir = args.data_dir;
        if (dir.empty())
            if (const char* env = std::getenv("QBNN_DATA_DIR")) dir = env;
        if (dir.empty())
            throw parse_error("no dataset given: use --images/--labels, --data-dir, or "
                              "QBNN_DATA_DIR");
        images = dir + "/train-images-idx3-ubyte";
        labels = dir + "/train-labels-idx1-ubyte";
    }
    const data::Dataset full = data::load_idx(images, labels);
    const auto [train, val] = data::split(full, args.val_size, mix_seed(args.seed, 0xDA7A));

    experiment::ExperimentConfig config;
    config.runs = args.runs;
    config.jobs = args.jobs;
    config.seed = args.seed;
    config.train.learning_rate = args.alpha;
    config.train.output_scale = args.scale;
    config.train.max_iterations = args.max_iters;
    config.train.patience = args.patience;

    const auto pairs = experiment::run_paired_experiment(
        train.images, train.labels.cast<float>(), val.images, val.labels.cast<float>(),
        config);

    std::ofstream csv(args.out);
    if (!csv) throw parse_error(args.out + ": cannot open for writing");
    experiment::write_csv(csv, pairs);

    const experiment::Summary s = experiment::summarize(pairs);
    const json j{{"runs", s.runs},
                 {"mean_baseline_iterations", s.mean_baseline_iterations},
                 {"mean_constrained_iterations", s.mean_constrained_iterations},
                 {"improvement_ratio", s.improvement_ratio},
                 {"frac_equal_or_better", s.frac_equal_or_better},
                 {"worse_runs", s.worse_runs},
                 {"mean_rel_mse_gap_worse", s.mean_rel_mse_gap_worse},
                 {"seed", args.seed},
                 {"alpha", args.alpha},
                 {"output_scale", args.scale},
                 {"rows_csv", args.out}};
    emit(j, args.summary_out);
    return 0;
}

// -------------------------------------------------------------- pipeline ---

struct PipelineArgs {
    int weights = 4;
    std::uint64_t seed = 1;
    std::int64_t shots = 0;
    double min_fidelity = 0.99;
    bool widen = false;
    std::string out;
};

int cmd_pipeline(const PipelineArgs& args) {
    pipeline::ToyPipelineConfig config;
    config.n_weights = args.weights;
    config.seed = args.seed;
    config.shots = args.shots;
    config.min_fidelity = args.min_fidelity;
    config.widen_radius = args.widen;

    const pipeline::PipelineResult r = pipeline::run_toy_pipeline(config);
    auto bits = [](const Eigen::VectorXi& v) {
        json out = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
        return out;
    };
    emit(json{{"true_weights", bits(r.true_weights)},
              {"test_mask", bits(r.test_mask)},
              {"hhl_fidelity", r.hhl_fidelity},
              {"success_probability", r.success_probability},
              {"active_count_estimate", r.active_count_estimate},
              {"mask_overlap", estimate_json(r.mask_overlap)},
              {"euclid_sq_distance", r.euclid_sq_distance},
              {"hamming_radius", r.hamming_radius},
              {"candidates_checked", r.candidates_checked},
              {"search_space", r.search_space},
              {"recovered_weights", bits(r.recovered_weights)},
              {"recovered_exact", r.recovered_exact}},
         args.out);
    return r.recovered_exact ? 0 : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum-classical toolkit: statevector HHL and SWAP-test "
                 "simulation driving constrained binary-network training"};
    app.require_subcommand(1);

    HhlArgs hhl_args;
    auto* hhl_cmd = app.add_subcommand(
        "hhl", "solve a linear system on the simulated HHL circuit");
    hhl_cmd->add_option("--system", hhl_args.system_path,
                        "text file: n matrix rows then the right-hand side row")
        ->required()
        ->check(CLI::ExistingFile);
    hhl_cmd->add_option("--clock", hhl_args.clock, "phase-estimation register width");
    hhl_cmd->add_option("--time", hhl_args.time, "evolution time t (default: auto)");
    hhl_cmd->add_option("--rot-c", hhl_args.rotation, "rotation constant C (clock units)");
    hhl_cmd->add_option("--shots", hhl_args.shots, "also sample the ancilla");
    hhl_cmd->add_option("--seed", hhl_args.seed, "sampling seed");
    hhl_cmd->add_option("--min-fidelity", hhl_args.min_fidelity,
                        "exit nonzero below this fidelity");
    hhl_cmd->add_option("--out", hhl_args.out, "also write the JSON report here");

    SwapArgs swap_args;
    auto* swap_cmd = app.add_subcommand(
        "swap", "overlap and distance between prepared states via the SWAP test");
    swap_cmd->add_option("--state-a", swap_args.state_a,
                         "uniform:<n> | mask:<bits> | basis:<n>:<i>")
        ->required();
    swap_cmd->add_option("--state-b", swap_args.state_b, "second state")->required();
    swap_cmd->add_option("--state-c", swap_args.state_c,
                         "second reference; switches to two chained tests");
    swap_cmd->add_flag("--chained", swap_args.chained, "run two chained tests");
    swap_cmd->add_option("--variant", swap_args.variant, "chained wiring")
        ->check(CLI::IsMember({"fanout", "chain"}));
    swap_cmd->add_option("--shots", swap_args.shots, "0 = exact statistics");
    swap_cmd->add_option("--seed", swap_args.seed, "sampling seed");
    swap_cmd->add_option("--out", swap_args.out, "also write the JSON report here");

    SamplingArgs sampling_args;
    auto* sampling_cmd = app.add_subcommand(
        "sampling", "distribution-reconstruction sample-complexity sweep");
    sampling_cmd->add_option("--kinds", sampling_args.kinds, "random,uniform")
        ->delimiter(',')
        ->check(CLI::IsMember({"random", "uniform"}));
    sampling_cmd->add_option("--sizes", sampling_args.sizes, "outcome counts, in [2,32]")
        ->delimiter(',');
    sampling_cmd->add_option("--epsilons", sampling_args.epsilons, "L1 targets")
        ->delimiter(',');
    sampling_cmd->add_option("--trials", sampling_args.trials, "repetitions per cell");
    sampling_cmd->add_option("--seed", sampling_args.seed, "master seed");
    sampling_cmd->add_option("--out", sampling_args.out, "CSV path (default: stdout)");

    ExperimentArgs exp_args;
    auto* exp_cmd = app.add_subcommand(
        "experiment", "paired baseline vs hyperplane-constrained training runs");
    exp_cmd->add_option("--images", exp_args.images, "IDX image file");
    exp_cmd->add_option("--labels", exp_args.labels, "IDX label file");
    exp_cmd->add_option("--data-dir", exp_args.data_dir,
                        "directory with train-images-idx3-ubyte / train-labels-idx1-ubyte")
        ->envname("QBNN_DATA_DIR");
    exp_cmd->add_option("--runs", exp_args.runs, "paired simulations");
    exp_cmd->add_option("--jobs", exp_args.jobs, "worker threads");
    exp_cmd->add_option("--val-size", exp_args.val_size, "validation split size");
    exp_cmd->add_option("--alpha", exp_args.alpha, "learning rate");
    exp_cmd->add_option("--scale", exp_args.scale, "forward output scale");
    exp_cmd->add_option("--patience", exp_args.patience, "stale epochs before convergence");
    exp_cmd->add_option("--max-iters", exp_args.max_iters, "epoch cap per run");
    exp_cmd->add_option("--seed", exp_args.seed, "master seed");
    exp_cmd->add_option("--out", exp_args.out, "per-run CSV path");
    exp_cmd->add_option("--summary", exp_args.summary_out, "also write summary JSON here");

    PipelineArgs pipe_args;
    auto* pipe_cmd = app.add_subcommand(
        "pipeline", "end-to-end toy run: solver, overlap tests, constrained search");
    pipe_cmd->add_option("--weights", pipe_args.weights, "toy problem size (2, 4, or 8)");
    pipe_cmd->add_option("--seed", pipe_args.seed, "instance seed");
    pipe_cmd->add_option("--shots", pipe_args.shots, "0 = exact statistics");
    pipe_cmd->add_option("--min-fidelity", pipe_args.min_fidelity, "solver abort threshold");
    pipe_cmd->add_flag("--widen", pipe_args.widen, "admit radii {h-1, h, h+1}");
    pipe_cmd->add_option("--out", pipe_args.out, "also write the JSON trace here");

    // Every subcommand takes --config; keys are its own flag names. Later
    // occurrences of a flag win, which makes explicit flags override the file.
    std::string config_stub;
    for (CLI::App* sub : {hhl_cmd, swap_cmd, sampling_cmd, exp_cmd, pipe_cmd}) {
        sub->add_option("--config", config_stub,
                        "flat key=value config file ('#' comments); flags override it");
        for (CLI::Option* opt : sub->get_options())
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (app.got_subcommand(hhl_cmd)) return cmd_hhl(hhl_args);
        if (app.got_subcommand(swap_cmd)) return cmd_swap(swap_args);
        if (app.got_subcommand(sampling_cmd)) return cmd_sampling(sampling_args);
        if (app.got_subcommand(exp_cmd)) return cmd_experiment(exp_args);
        if (app.got_subcommand(pipe_cmd)) return cmd_pipeline(pipe_args);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
