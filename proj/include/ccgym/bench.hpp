#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ccgym/adpg.hpp"
#include "ccgym/baselines.hpp"
#include "ccgym/checkpoint.hpp"
#include "ccgym/metrics.hpp"
#include "ccgym/scenarios.hpp"
#include "ccgym/simulation.hpp"

namespace ccgym {

struct AlgoSpec {
    std::string name = "adpg";  // adpg | dcqcn | hpcc | swift | fixed
    std::string ckpt_path;      // adpg: float or quantized checkpoint
    double target = 2.0;
    FeatureConfig features;
    DcqcnParams dcqcn;
    HpccParams hpcc;
    SwiftParams swift;
    // Preloaded policies take precedence over ckpt_path.
    std::shared_ptr<const PolicyParams<float>> policy;
    std::shared_ptr<const QuantizedPolicy> qpolicy;
};

inline std::shared_ptr<CcAlgorithm> make_algorithm(const AlgoSpec& spec) {
    if (spec.name == "dcqcn") return std::make_shared<DcqcnCc>(spec.dcqcn);
    if (spec.name == "hpcc") return std::make_shared<HpccCc>(spec.hpcc);
    if (spec.name == "swift") return std::make_shared<SwiftCc>(spec.swift);
    if (spec.name == "fixed") return std::make_shared<FixedRateCc>();
    if (spec.name != "adpg") throw std::runtime_error("unknown algorithm: " + spec.name);
    if (spec.policy)
        return std::make_shared<AdpgAgent>(spec.policy, spec.target, spec.features);
    if (spec.qpolicy)
        return std::make_shared<QuantizedAdpgAgent>(spec.qpolicy, spec.features);
    if (spec.ckpt_path.empty())
        throw std::runtime_error("adpg needs a checkpoint (--ckpt or <algo>.ckpt)");
    if (checkpoint_kind_of_file(spec.ckpt_path) == CheckpointKind::Float32) {
        auto p = std::make_shared<PolicyParams<float>>(load_checkpoint_file(spec.ckpt_path));
        return std::make_shared<AdpgAgent>(p, spec.target, spec.features);
    }
    auto q = std::make_shared<QuantizedPolicy>(load_quantized_file(spec.ckpt_path));
    return std::make_shared<QuantizedAdpgAgent>(q, spec.features);
}

struct RunRecord {
    std::string scenario;
    std::string algo;
    std::uint64_t seed = 0;
    MetricsReport metrics;
    double wall_s = 0;
    std::string error;  // non-empty when the run itself failed to execute
};

// Builds, runs and scores one (scenario, algorithm, seed) combination.
// The first warmup fraction of the run is excluded from the metrics.
inline RunRecord run_scenario(ScenarioSpec spec, const AlgoSpec& algo, std::uint64_t seed,
                              double warmup_frac = 0.2) {
    auto t0 = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.scenario = spec.name;
    rec.algo = algo.name;
    rec.seed = seed;
    spec.seed = seed;
    Simulation sim(build_instance(spec));
    sim.set_cc(make_algorithm(algo));
    SimTime warmup = SimTime(double(spec.duration_ns) * warmup_frac);
    sim.set_measure_window(warmup, spec.duration_ns);

    std::int64_t long_flow = -1;
    SimTime shorts_start = 0;
    if (spec.kind == ScenarioKind::LongShort) {
        long_flow = 0;
        sim.track_flow_rate(0);
        for (const FlowState& f : sim.flows())
            if (f.size_bytes != 0 && (shorts_start == 0 || f.start_ns < shorts_start))
                shorts_start = f.start_ns;
    }

    sim.run_until(spec.duration_ns);
    rec.metrics = compute_metrics(sim, long_flow, shorts_start);
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

struct SuiteConfig {
    std::vector<ScenarioSpec> scenarios;
    std::vector<AlgoSpec> algos;
    std::vector<std::uint64_t> seeds = {1};
    double warmup_frac = 0.2;
    unsigned jobs = 1;
};

// warmup_frac < 0 omits the measurement-convention header comment.
inline std::string runs_to_csv(const std::vector<RunRecord>& records,
                               double warmup_frac = -1.0) {
    std::ostringstream os;
    if (warmup_frac >= 0) {
        char head[128];
        std::snprintf(head, sizeof head,
                      "# metrics window: warmup_frac=%.2f of each run excluded\n",
                      warmup_frac);
        os << head;
    }
    os << "scenario,algo,seed,su,fr,ql_us,dr_gbps,recovery_s,failed\n";
    char buf[256];
    for (const RunRecord& r : records) {
        std::string recovery;
        if (r.metrics.has_recovery()) {
            if (r.metrics.recovery_s < 0) {
                recovery = "inf";
            } else {
                std::snprintf(buf, sizeof buf, "%.6g", r.metrics.recovery_s);
                recovery = buf;
            }
        }
        std::snprintf(buf, sizeof buf, "%s,%s,%llu,%.3f,%.3f,%.3f,%.3f,%s,%d\n",
                      r.scenario.c_str(), r.algo.c_str(),
                      (unsigned long long)r.seed, r.metrics.su_percent, r.metrics.fr,
                      r.metrics.ql_us, r.metrics.dr_gbps, recovery.c_str(),
                      r.metrics.failed || !r.error.empty() ? 1 : 0);
        os << buf;
    }
    return os.str();
}

// Mean report per (scenario, algo) across seeds.
inline MetricsReport mean_report(const std::vector<const MetricsReport*>& rs) {
    MetricsReport m;
    double n = double(rs.size());
    double rec = 0;
    bool any_rec = false, rec_failed = false;
    for (const MetricsReport* r : rs) {
        m.su_percent += r->su_percent / n;
        m.fr += r->fr / n;
        m.ql_us += r->ql_us / n;
        m.dr_gbps += r->dr_gbps / n;
        m.failed = m.failed || r->failed;
        if (r->has_recovery()) {
            any_rec = true;
            if (r->recovery_s < 0)
                rec_failed = true;
            else
                rec += r->recovery_s / n;
        }
    }
    if (any_rec) m.recovery_s = rec_failed ? -1.0 : rec;
    return m;
}

// Aligned text table, one block per scenario; entries not Pareto-dominated
// by any peer on the same scenario are marked with '*'.
inline std::string summary_table(const std::vector<RunRecord>& records,
                                 double band = 5.0) {
    std::map<std::string, std::map<std::string, std::vector<const MetricsReport*>>> by;
    std::vector<std::string> scenario_order;
    for (const RunRecord& r : records) {
        if (!r.error.empty()) continue;
        if (by.find(r.scenario) == by.end()) scenario_order.push_back(r.scenario);
        by[r.scenario][r.algo].push_back(&r.metrics);
    }
    std::ostringstream os;
    char buf[256];
    for (const std::string& sc : scenario_order) {
        os << sc << "\n";
        std::snprintf(buf, sizeof buf, "  %-10s %8s %8s %10s %10s %12s %7s\n", "algo",
                      "su", "fr", "ql_us", "dr_gbps", "recovery_s", "failed");
        os << buf;
        std::vector<std::pair<std::string, MetricsReport>> rows;
        for (const auto& [algo, reports] : by[sc]) rows.emplace_back(algo, mean_report(reports));
        for (const auto& [algo, m] : rows) {
            bool dominated = false;
            for (const auto& [other, om] : rows) {
                if (other == algo) continue;
                if (pareto_compare(om, m, band) == Pareto::ADominatesB) dominated = true;
            }
            std::string recovery = "-";
            if (m.has_recovery()) {
                if (m.recovery_s < 0) {
                    recovery = "inf";
                } else {
                    std::snprintf(buf, sizeof buf, "%.6g", m.recovery_s);
                    recovery = buf;
                }
            }
            std::snprintf(buf, sizeof buf, " %c%-10s %8.2f %8.2f %10.3f %10.3f %12s %7s\n",
                          dominated ? ' ' : '*', algo.c_str(), m.su_percent, m.fr, m.ql_us,
                          m.dr_gbps, recovery.c_str(), m.failed ? "yes" : "no");
            os << buf;
        }
    }
    os << "* = not Pareto-dominated within this scenario\n";
    return os.str();
}

struct SuiteResult {
    std::vector<RunRecord> records;
    std::string csv;
    std::string table;
};

// Runs every (scenario x algo x seed) combination; failures of individual
// runs are recorded and the suite continues.
inline SuiteResult run_benchmark(const SuiteConfig& cfg) {
    struct Job {
        const ScenarioSpec* scenario;
        const AlgoSpec* algo;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const ScenarioSpec& sc : cfg.scenarios)
        for (const AlgoSpec& al : cfg.algos)
            for (std::uint64_t seed : cfg.seeds) jobs.push_back({&sc, &al, seed});

    SuiteResult out;
    out.records.resize(jobs.size());
    auto run_one = [&](std::size_t i) {
        const Job& j = jobs[i];
        try {
            out.records[i] = run_scenario(*j.scenario, *j.algo, j.seed, cfg.warmup_frac);
        } catch (const std::exception& e) {
            RunRecord rec;
            rec.scenario = j.scenario->name;
            rec.algo = j.algo->name;
            rec.seed = j.seed;
            rec.error = e.what();
            out.records[i] = rec;
        }
    };
    unsigned workers = cfg.jobs == 0 ? 1 : cfg.jobs;
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++) run_one(i);
            }));
        }
        for (auto& f : pool) f.get();
    }
    out.csv = runs_to_csv(out.records, cfg.warmup_frac);
    out.table = summary_table(out.records);
    return out;
}

inline AlgoSpec algo_from_config(const KvConfig& cfg, const std::string& name) {
    AlgoSpec a;
    a.name = name;
    a.ckpt_path = cfg.str(name + ".ckpt", "");
    a.target = cfg.real(name + ".target", a.target);
    a.features.inflation_scale = cfg.real(name + ".inflation_scale", 1.0);
    a.dcqcn.alpha_gain = cfg.real("dcqcn.alpha_gain", a.dcqcn.alpha_gain);
    a.dcqcn.increase_timer_ns =
        SimTime(cfg.integer("dcqcn.increase_timer_ns", std::int64_t(a.dcqcn.increase_timer_ns)));
    a.dcqcn.fast_recovery_stages =
        std::uint32_t(cfg.integer("dcqcn.fast_recovery_stages", a.dcqcn.fast_recovery_stages));
    a.dcqcn.additive_increase_bps =
        cfg.real("dcqcn.additive_increase_gbps", a.dcqcn.additive_increase_bps / 1e9) * 1e9;
    a.dcqcn.cut_min_gap_ns =
        SimTime(cfg.integer("dcqcn.cut_min_gap_ns", std::int64_t(a.dcqcn.cut_min_gap_ns)));
    a.hpcc.eta = cfg.real("hpcc.eta", a.hpcc.eta);
    a.hpcc.additive_increase_bps =
        cfg.real("hpcc.additive_increase_gbps", a.hpcc.additive_increase_bps / 1e9) * 1e9;
    a.hpcc.max_stage = std::uint32_t(cfg.integer("hpcc.max_stage", a.hpcc.max_stage));
    a.swift.target_delay_base_rtts =
        cfg.real("swift.target_delay_base_rtts", a.swift.target_delay_base_rtts);
    a.swift.additive_increase_bps =
        cfg.real("swift.additive_increase_gbps", a.swift.additive_increase_bps / 1e9) * 1e9;
    a.swift.md_factor = cfg.real("swift.md_factor", a.swift.md_factor);
    return a;
}

}  // namespace ccgym
