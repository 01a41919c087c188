// Command line front end: train, eval, bench, quantize, policy inspect.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ccgym/bench.hpp"
#include "ccgym/checkpoint.hpp"
#include "ccgym/trainer.hpp"

using namespace ccgym;

namespace {

ScenarioSpec resolve_scenario(const std::string& token) {
    if (token.find(':') != std::string::npos && token.find('/') == std::string::npos &&
        token.size() < 16)
        return scenario_shorthand(token);
    return load_scenario(token);
}

TrainConfig train_config_from_file(const std::string& path) {
    KvConfig cfg = KvConfig::parse_file(path);
    TrainConfig tc;
    tc.target = cfg.real("train.target", tc.target);
    tc.lr = cfg.real("train.lr", tc.lr);
    tc.rollout_len = int(cfg.integer("train.rollout_len", tc.rollout_len));
    tc.iterations = int(cfg.integer("train.iterations", tc.iterations));
    tc.bptt_window = int(cfg.integer("train.bptt_window", tc.bptt_window));
    tc.seed = std::uint64_t(cfg.integer("train.seed", std::int64_t(tc.seed)));
    tc.init_range = cfg.real("train.init_range", tc.init_range);
    tc.max_total_steps =
        std::uint64_t(cfg.integer("train.max_total_steps", std::int64_t(tc.max_total_steps)));
    std::string mode = cfg.str("train.coeff_mode", "trajectory_mean");
    if (mode == "trajectory_mean")
        tc.coeff_mode = CoeffMode::TrajectoryMean;
    else if (mode == "per_step")
        tc.coeff_mode = CoeffMode::PerStep;
    else
        throw std::runtime_error("train.coeff_mode must be trajectory_mean or per_step");
    std::string opt = cfg.str("train.optimizer", "ascent");
    if (opt == "ascent")
        tc.optimizer = Optimizer::Ascent;
    else if (opt == "adam")
        tc.optimizer = Optimizer::Adam;
    else
        throw std::runtime_error("train.optimizer must be ascent or adam");
    tc.start_spread = cfg.real("train.start_spread", tc.start_spread);
    tc.warmup_ns = SimTime(cfg.real("train.warmup_us", double(tc.warmup_ns) / 1e3) * 1e3);
    tc.chunk_time_cap_ns =
        SimTime(cfg.real("train.chunk_cap_ms", double(tc.chunk_time_cap_ns) / 1e6) * 1e6);
    tc.features.inflation_scale = cfg.real("train.inflation_scale", 1.0);
    SimParams sim;
    apply_sim_overrides(sim, cfg);
    for (const std::string& tok : cfg.list("train.scenarios")) {
        ScenarioSpec s = resolve_scenario(tok);
        s.sim = sim;
        s.seed = tc.seed * 1000 + s.total_flows + s.hosts;
        tc.scenarios.push_back(s);
    }
    if (tc.scenarios.empty()) {
        tc.scenarios = default_train_scenarios(tc);
        for (ScenarioSpec& s : tc.scenarios) s.sim = sim;
    }
    return tc;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"congestion-control training and benchmark harness"};
    app.require_subcommand(1);

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train the learned rate controller");
    std::string train_config, train_out, train_curve;
    train_cmd->add_option("--config", train_config, "training config file");
    train_cmd->add_option("--out", train_out, "output checkpoint path")->required();
    train_cmd->add_option("--curve", train_curve, "learning-curve CSV path");

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one algorithm on one scenario");
    std::string eval_scenario, eval_algo = "adpg", eval_ckpt, eval_report, eval_params;
    std::string eval_trace;
    std::uint64_t eval_seed = 1;
    std::uint32_t eval_flows = 0;
    double eval_duration_ms = 0, eval_warmup = 0.2, eval_target = 2.0;
    eval_cmd->add_option("--scenario", eval_scenario, "scenario file or shorthand (m2o:8)")
        ->required();
    eval_cmd->add_option("--algo", eval_algo, "adpg | dcqcn | hpcc | swift | fixed");
    eval_cmd->add_option("--ckpt", eval_ckpt, "policy checkpoint (adpg)");
    eval_cmd->add_option("--report", eval_report, "write a one-row CSV report");
    eval_cmd->add_option("--params", eval_params, "algorithm parameter config file");
    eval_cmd->add_option("--trace", eval_trace, "per-event trace dump path");
    eval_cmd->add_option("--seed", eval_seed, "run seed");
    eval_cmd->add_option("--flows", eval_flows, "override flow count");
    eval_cmd->add_option("--duration-ms", eval_duration_ms, "override run duration");
    eval_cmd->add_option("--warmup", eval_warmup, "warmup fraction excluded from metrics");
    eval_cmd->add_option("--target", eval_target, "operating-point target (adpg)");

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_suite, bench_csv;
    unsigned bench_jobs = 1;
    bench_cmd->add_option("--suite", bench_suite, "suite config file")->required();
    bench_cmd->add_option("--csv", bench_csv, "write per-run CSV here");
    bench_cmd->add_option("--jobs", bench_jobs, "parallel runs");

    // --- quantize ---
    auto* quant_cmd = app.add_subcommand("quantize", "int8-quantize a float checkpoint");
    std::string quant_in, quant_out;
    quant_cmd->add_option("--ckpt", quant_in, "float checkpoint")->required();
    quant_cmd->add_option("--out", quant_out, "quantized checkpoint")->required();

    // --- policy ---
    auto* policy_cmd = app.add_subcommand("policy", "checkpoint utilities");
    auto* inspect_cmd = policy_cmd->add_subcommand("inspect", "print shapes and norms");
    std::string inspect_path;
    inspect_cmd->add_option("ckpt", inspect_path, "checkpoint path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            TrainConfig tc =
                train_config.empty() ? TrainConfig{} : train_config_from_file(train_config);
            TrainResult res = train(tc, &std::cout);
            if (res.diverged)
                std::cerr << "training diverged; kept the last good parameters\n";
            save_checkpoint_file(train_out, res.params);
            std::cout << "saved " << train_out << " after " << res.total_steps
                      << " decision steps\n";
            if (!train_curve.empty()) {
                std::ofstream os(train_curve);
                write_curve_csv(os, res.curve);
            }
        } else if (*eval_cmd) {
            ScenarioSpec spec = resolve_scenario(eval_scenario);
            if (eval_flows != 0) {
                spec.total_flows = eval_flows;
                spec.hosts = 0;
                spec.flows_per_host = 0;
            }
            if (eval_duration_ms > 0)
                spec.duration_ns = SimTime(eval_duration_ms * double(kMillisecond));
            AlgoSpec algo;
            if (!eval_params.empty()) {
                algo = algo_from_config(KvConfig::parse_file(eval_params), eval_algo);
            } else {
                algo.name = eval_algo;
            }
            algo.target = eval_target;
            if (!eval_ckpt.empty()) algo.ckpt_path = eval_ckpt;
            RunRecord rec = run_scenario(spec, algo, eval_seed, eval_warmup);
            std::vector<RunRecord> rs{rec};
            std::cout << runs_to_csv(rs, eval_warmup);
            if (!eval_report.empty())
                write_text_file(eval_report, runs_to_csv(rs, eval_warmup));
            if (!eval_trace.empty()) {
                // Rerun with tracing on; identical seed makes the runs match.
                Simulation sim(build_instance([&] {
                    ScenarioSpec s = spec;
                    s.seed = eval_seed;
                    return s;
                }()));
                std::ofstream os(eval_trace);
                sim.set_trace(&os);
                sim.set_cc(make_algorithm(algo));
                sim.set_measure_window(
                    SimTime(double(spec.duration_ns) * eval_warmup), spec.duration_ns);
                sim.run_until(spec.duration_ns);
            }
        } else if (*bench_cmd) {
            KvConfig cfg = KvConfig::parse_file(bench_suite);
            SuiteConfig sc;
            sc.warmup_frac = cfg.real("warmup_frac", sc.warmup_frac);
            sc.jobs = bench_jobs;
            SimParams sim;
            apply_sim_overrides(sim, cfg);
            double duration_ms = cfg.real("duration_ms", 0);
            for (const std::string& tok : cfg.list("scenarios")) {
                ScenarioSpec s = resolve_scenario(tok);
                s.sim = sim;
                if (duration_ms > 0) s.duration_ns = SimTime(duration_ms * double(kMillisecond));
                sc.scenarios.push_back(s);
            }
            for (const std::string& name : cfg.list("algos"))
                sc.algos.push_back(algo_from_config(cfg, name));
            sc.seeds.clear();
            for (const std::string& s : cfg.list("seeds"))
                sc.seeds.push_back(std::stoull(s));
            if (sc.seeds.empty()) sc.seeds = {1};
            SuiteResult res = run_benchmark(sc);
            std::cout << res.table;
            if (!bench_csv.empty()) write_text_file(bench_csv, res.csv);
        } else if (*quant_cmd) {
            PolicyParams<float> p = load_checkpoint_file(quant_in);
            save_quantized_file(quant_out, quantize(p));
            std::cout << "saved " << quant_out << "\n";
        } else if (*policy_cmd) {
            std::cout << inspect_checkpoint_file(inspect_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
