// Acceptance suite: one pass/fail line per criterion, exit code 0 only if
// every selected criterion passes. Criteria 5 and 7 consume the checkpoint
// written by criterion 4 (run it first, or use --all).

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccgym/bench.hpp"
#include "ccgym/checkpoint.hpp"
#include "ccgym/trainer.hpp"
#include "../support.hpp"

using namespace ccgym;
using namespace ccgym::testing;

namespace {

std::string g_out_dir = "acceptance_out";

std::string ckpt_path() { return g_out_dir + "/standard_mix.ckpt"; }

struct Reporter {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        detail << "    " << (cond ? "ok  " : "FAIL") << "  " << what << "\n";
        ok = ok && cond;
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

char numbuf[256];
std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    std::snprintf(numbuf, sizeof numbuf, f, a, b, c, d);
    return numbuf;
}

// ---------------------------------------------------------------------------

bool criterion_1(Reporter& r) {
    std::mt19937_64 rng(1001);
    bool nonpos = true, locus = true;
    for (int i = 0; i < 10'000; ++i) {
        RewardTerms t;
        t.target = 0.5 + 25.0 * u01(rng);
        t.rtt_inflation = 1.0 + 80.0 * u01(rng);
        t.rate_norm = 1e-4 + (1.0 - 1e-4) * u01(rng);
        double rew = reward(t);
        if (!(rew <= 0.0)) nonpos = false;
        double x = t.rtt_inflation * std::sqrt(t.rate_norm);
        if (std::abs(x - t.target) > 1e-9 && !(rew < 0.0)) locus = false;
        RewardTerms on = t;
        on.target = x;
        if (reward(on) != 0.0) locus = false;
    }
    r.require(nonpos, "reward nonpositive on the 10^4 randomized grid");
    r.require(locus, "reward vanishes exactly on the operating locus");

    double C = 12.5e9;
    std::vector<double> fair(4, C / 4.0), inf(4, 2.0 / std::sqrt(0.25));
    r.require(fixed_point_check(fair, inf, 2.0, C),
              "four flows at 12.5/4 Gbit/s with equal inflations on target");
    std::vector<double> one{C}, low{1.01};
    r.require(fixed_point_check(one, low, 2.0, C),
              "single flow at full line rate below target");
    std::vector<double> uneven{0.9 * C, 0.1 * C}, eq{3.0, 3.0};
    r.require(!fixed_point_check(uneven, eq, 2.0, C),
              "unequal rates under equal inflations rejected");
    return r.ok;
}

bool criterion_2(Reporter& r) {
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        int steps = 1 + i % 4;
        worst = std::max(worst, policy_fd_worst_error<double>(3000 + i, steps, 16));
    }
    r.require(worst <= 1e-3,
              fmt("backward vs central differences, 20 instances, worst rel err %.2e",
                  worst));

    std::mt19937_64 rng(2024);
    int agree = 0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        ToyEnv env;
        env.beta = 1.0 + 6.0 * u01(rng);
        env.target = 0.8 + 2.5 * u01(rng);
        auto p = PolicyParams<float>::init(4, rng(), 0.3);
        double rn = 0.05 + 0.6 * u01(rng);
        const int T = 24;
        PolicyState<float> st;
        std::vector<StepTape<float>> tapes;
        std::vector<double> coeffs, dxda;
        double rate = rn;
        for (int t = 0; t < T; ++t) {
            double x = env.x_of(rate);
            Eigen::VectorXf obs(4);
            obs << float(rate), float(x / std::max(1e-6, std::sqrt(rate))), 0.0f, 0.0f;
            auto fwd = policy_forward(p, st, obs);
            tapes.push_back(fwd.tape);
            coeffs.push_back(env.target - x);
            dxda.push_back(env.dx_da(rate));
            rate = std::min(1.0, std::max(1e-4, double(action_map(fwd.raw)) * rate));
        }
        auto accumulate = [&](auto weight_of) {
            auto grads = PolicyParams<float>::zeros(4);
            for (int t = 0; t < T; ++t) {
                BackCarry<float> carry;
                for (int k = t; k >= std::max(0, t - 15); --k)
                    policy_backward_step(p, tapes[std::size_t(k)],
                                         k == t ? weight_of(t) : 0.0f, carry, grads);
            }
            return grads;
        };
        auto exact = accumulate([&](int t) {
            return float(2.0 * coeffs[std::size_t(t)] * dxda[std::size_t(t)]);
        });
        double mean_c = 0;
        for (double c : coeffs) mean_c += c;
        mean_c /= T;
        auto approx = accumulate([&](int) { return float(mean_c); });
        double num = exact.w1.cwiseProduct(approx.w1).sum() + exact.b1.cwiseProduct(approx.b1).sum() +
              exact.w2.cwiseProduct(approx.w2).sum() + exact.b2.cwiseProduct(approx.b2).sum() +
              exact.wx.cwiseProduct(approx.wx).sum() + exact.wh.cwiseProduct(approx.wh).sum() +
              exact.bl.cwiseProduct(approx.bl).sum() + exact.w3.cwiseProduct(approx.w3).sum() +
              exact.b3.cwiseProduct(approx.b3).sum();
        if (num > 0) agree++;
    }
    r.require(agree >= instances * 95 / 100,
              fmt("approximate vs exact gradient direction agrees on %.0f/200 toy instances",
                  double(agree)));
    return r.ok;
}

bool criterion_3(Reporter& r) {
    std::mt19937_64 rng(30303);
    int fifo = 0, drop_law = 0, bounds = 0, conserved = 0, deterministic = 0;
    const int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        ScenarioSpec spec = random_scenario(rng);
        std::uint64_t algo_pick = rng();
        PropertyRun a = run_with_checks(spec, algo_pick);
        PropertyRun b = run_with_checks(spec, algo_pick);
        if (a.fifo_ok) fifo++;
        if (a.drop_law_ok) drop_law++;
        if (a.bounds_ok) bounds++;
        if (a.conserved && a.sent == a.delivered + a.dropped) conserved++;
        if (a.trace_hash == b.trace_hash && a.delivered == b.delivered) deterministic++;
    }
    r.require(fifo == cases, fmt("FIFO order on %.0f/1000 cases", double(fifo)));
    r.require(drop_law == cases, fmt("drop law on %.0f/1000 cases", double(drop_law)));
    r.require(bounds == cases, fmt("buffer bounds on %.0f/1000 cases", double(bounds)));
    r.require(conserved == cases, fmt("byte conservation on %.0f/1000 cases", double(conserved)));
    r.require(deterministic == cases,
              fmt("bit-identical trace hash on %.0f/1000 reruns", double(deterministic)));
    return r.ok;
}

TrainConfig standard_mix_config() {
    TrainConfig tc;
    tc.target = 2.0;  // the Standard operating point
    tc.lr = 4e-4;
    tc.rollout_len = 12;
    tc.iterations = 100000;
    tc.coeff_mode = CoeffMode::PerStep;
    tc.optimizer = Optimizer::Adam;
    tc.seed = 3;
    tc.max_total_steps = 50'000;
    return tc;
}

RunRecord eval_adpg(const std::string& ckpt, const char* scenario, double duration_ms,
                    std::uint64_t seed = 99) {
    AlgoSpec algo;
    algo.name = "adpg";
    algo.ckpt_path = ckpt;
    ScenarioSpec spec = scenario_shorthand(scenario);
    spec.duration_ns = SimTime(duration_ms * double(kMillisecond));
    return run_scenario(spec, algo, seed);
}

bool criterion_4(Reporter& r) {
    TrainConfig tc = standard_mix_config();
    auto initial = PolicyParams<float>::init(tc.features.count(), tc.seed, tc.init_range);
    TrainResult res = train(tc);
    r.require(!res.diverged, "training stayed finite");
    r.require(res.total_steps <= 50'000,
              fmt("decision-step budget: %.0f <= 50000", double(res.total_steps)));

    auto scen = default_train_scenarios(tc);
    double before = probe_mean_abs_coeff(initial, scen, tc.target, tc.features);
    double after = probe_mean_abs_coeff(res.params, scen, tc.target, tc.features);
    r.require(after <= 0.5 * before,
              fmt("mean |coeff| drop: %.3f -> %.3f (>= 50%%)", before, after));

    std::filesystem::create_directories(g_out_dir);
    save_checkpoint_file(ckpt_path(), res.params);
    {
        std::ofstream os(g_out_dir + "/standard_mix_curve.csv");
        write_curve_csv(os, res.curve);
    }

    RunRecord rec = eval_adpg(ckpt_path(), "m2o:4", 40.0);
    r.require(rec.metrics.fr >= 80.0, fmt("4->1 FR %.1f >= 80", rec.metrics.fr));
    r.require(rec.metrics.dr_gbps == 0.0, fmt("4->1 DR %.3f == 0", rec.metrics.dr_gbps));
    r.require(rec.metrics.su_percent >= 85.0,
              fmt("4->1 SU %.1f >= 85", rec.metrics.su_percent));
    return r.ok;
}

bool criterion_5(Reporter& r) {
    if (!std::filesystem::exists(ckpt_path())) {
        r.require(false, "checkpoint missing; run criterion 4 first");
        return false;
    }
    RunRecord m128 = eval_adpg(ckpt_path(), "m2o:128", 40.0);
    r.require(m128.metrics.dr_gbps == 0.0, fmt("128->1 DR %.3f == 0", m128.metrics.dr_gbps));
    r.require(m128.metrics.su_percent >= 85.0,
              fmt("128->1 SU %.1f >= 85", m128.metrics.su_percent));

    RunRecord a2a = eval_adpg(ckpt_path(), "a2a:4", 20.0);
    r.require(a2a.metrics.dr_gbps == 0.0, fmt("all-to-all DR %.3f == 0", a2a.metrics.dr_gbps));

    RunRecord ls = eval_adpg(ckpt_path(), "ls:2", 20.0);
    r.require(ls.metrics.dr_gbps == 0.0, fmt("long-short DR %.3f == 0", ls.metrics.dr_gbps));
    r.require(ls.metrics.has_recovery() && ls.metrics.recovery_s >= 0.0,
              fmt("long flow re-attains 95%% line rate, recovery %.3g s",
                  ls.metrics.recovery_s));
    return r.ok;
}

bool criterion_6(Reporter& r) {
    double su[3], ql[3];
    double targets[3] = {1.0, 2.0, 20.0};
    for (int i = 0; i < 3; ++i) {
        TrainConfig tc;
        tc.target = targets[i];
        tc.lr = 8e-4;
        tc.rollout_len = 24;
        tc.iterations = 100000;
        tc.coeff_mode = CoeffMode::PerStep;
        tc.optimizer = Optimizer::Adam;
        tc.seed = 3;
        tc.max_total_steps = 50'000;
        // The loose point's equilibrium queue is ~2.8 MB; give the restart
        // warmup time to develop comparable depths.
        tc.warmup_ns = targets[i] >= 20.0 ? 600 * kMicrosecond : 20 * kMicrosecond;
        ScenarioSpec s;
        s.kind = ScenarioKind::ManyToOne;
        s.total_flows = 8;
        s.name = "m2o:8";
        s.seed = tc.seed * 1000 + 8;
        tc.scenarios = {s};
        TrainResult res = train(tc);
        auto p = std::make_shared<PolicyParams<float>>(res.params);
        AlgoSpec algo;
        algo.name = "adpg";
        algo.policy = p;
        ScenarioSpec ev = s;
        ev.duration_ns = 40 * kMillisecond;
        RunRecord rec = run_scenario(ev, algo, 99);
        su[i] = rec.metrics.su_percent;
        ql[i] = rec.metrics.ql_us;
        r.detail << "    target " << targets[i] << ": su " << su[i] << "  ql " << ql[i]
                 << "  dr " << rec.metrics.dr_gbps << "\n";
    }
    // Nondecreasing up to measurement resolution (half a point / half a us).
    r.require(ql[0] <= ql[1] + 0.5 && ql[1] <= ql[2] + 0.5,
              fmt("QL nondecreasing in target: %.2f, %.2f, %.2f", ql[0], ql[1], ql[2]));
    r.require(su[0] <= su[1] + 0.5 && su[1] <= su[2] + 0.5,
              fmt("SU nondecreasing in target: %.1f, %.1f, %.1f", su[0], su[1], su[2]));
    return r.ok;
}

bool criterion_7(Reporter& r) {
    if (!std::filesystem::exists(ckpt_path())) {
        r.require(false, "checkpoint missing; run criterion 4 first");
        return false;
    }
    PolicyParams<float> params = load_checkpoint_file(ckpt_path());
    QuantizedPolicy qp = quantize(params);
    std::string qpath = g_out_dir + "/standard_mix.q8";
    save_quantized_file(qpath, qp);

    RunRecord rf = eval_adpg(ckpt_path(), "m2o:4", 40.0);
    RunRecord rq = eval_adpg(qpath, "m2o:4", 40.0);
    r.require(std::abs(rf.metrics.su_percent - rq.metrics.su_percent) <= 5.0,
              fmt("SU float %.1f vs int8 %.1f within 5", rf.metrics.su_percent,
                  rq.metrics.su_percent));
    r.require(std::abs(rf.metrics.fr - rq.metrics.fr) <= 5.0,
              fmt("FR float %.1f vs int8 %.1f within 5", rf.metrics.fr, rq.metrics.fr));
    r.require(rq.metrics.dr_gbps == 0.0, fmt("int8 DR %.3f == 0", rq.metrics.dr_gbps));

    std::mt19937_64 rng(7007);
    PolicyState<float> fs;
    QuantizedState qs;
    double dev = 0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::VectorXf obs(4);
        obs << float(u01(rng)), float(1.0 + 30.0 * u01(rng)), float(u01(rng)),
            float(u01(rng));
        dev += std::abs(double(action_map(policy_forward(params, fs, obs).raw)) -
                        double(action_map(qforward(qp, qs, obs))));
    }
    dev /= 1000.0;
    r.require(dev <= 0.01, fmt("mean action deviation %.5f <= 0.01", dev));
    return r.ok;
}

bool criterion_8(Reporter& r) {
    std::vector<double> medians, root_n;
    for (std::uint32_t n : {2u, 4u, 8u, 16u}) {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::ManyToOne;
        spec.total_flows = n;
        spec.hosts = n;
        spec.flows_per_host = 1;
        spec.name = "sqrtn";
        spec.duration_ns = 10 * kMillisecond;
        spec.seed = 42 + n;
        double overhead = double(spec.sim.mtu_bytes + spec.sim.probe_bytes) /
                          double(spec.sim.mtu_bytes);
        spec.initial_rate_fraction = 1.0 / (double(n) * overhead);
        Simulation sim(build_instance(spec));
        sim.set_cc(std::make_shared<FixedRateCc>());
        sim.set_measure_window(2 * kMillisecond, 10 * kMillisecond);
        sim.enable_rtt_collection();
        sim.run_until(spec.duration_ns);
        std::vector<double> inflations;
        double base = double(sim.flows()[0].base_rtt_ns);
        for (const auto& samples : sim.collector().rtt_samples_ns)
            for (auto rtt : samples) inflations.push_back(double(rtt) / base);
        medians.push_back(median(inflations));
        root_n.push_back(std::sqrt(double(n)));
        r.detail << "    N=" << n << ": median inflation " << medians.back() << "\n";
    }
    bool mono = medians[0] < medians[1] && medians[1] < medians[2] && medians[2] < medians[3];
    r.require(mono, "median inflation strictly increasing in N");
    double rho = spearman_rho(medians, root_n);
    r.require(rho > 0.9, fmt("Spearman rho vs sqrt(N): %.3f > 0.9", rho));
    return r.ok;
}

bool criterion_9(Reporter& r) {
    for (const char* algo_name : {"dcqcn", "hpcc", "swift"}) {
        for (const char* scenario : {"m2o:2", "m2o:8"}) {
            AlgoSpec algo;
            algo.name = algo_name;
            ScenarioSpec spec = scenario_shorthand(scenario);
            spec.duration_ns = 20 * kMillisecond;
            RunRecord rec = run_scenario(spec, algo, 7);
            std::string what = std::string(algo_name) + " on " + scenario + ": SU " +
                               fmt("%.1f >= 70, DR %.3f == 0", rec.metrics.su_percent,
                                   rec.metrics.dr_gbps);
            r.require(rec.metrics.su_percent >= 70.0 && rec.metrics.dr_gbps == 0.0, what);
        }
    }
    // Pareto machinery: band, antisymmetry, irreflexivity.
    MetricsReport base;
    base.su_percent = 90;
    base.fr = 80;
    base.ql_us = 10;
    base.dr_gbps = 0;
    MetricsReport better = base;
    better.su_percent = 96;
    r.require(pareto_compare(better, base) == Pareto::ADominatesB &&
                  pareto_compare(base, better) == Pareto::BDominatesA,
              "domination beyond the 5-point band, antisymmetric");
    MetricsReport inside = base;
    inside.su_percent = 94.9;
    r.require(pareto_compare(inside, base) == Pareto::Incomparable,
              "differences inside the band are similar");
    MetricsReport tradeoff = base;
    tradeoff.su_percent = 96;
    tradeoff.ql_us = 20;
    r.require(pareto_compare(tradeoff, base) == Pareto::Incomparable,
              "opposite wins are incomparable");
    r.require(pareto_compare(base, base) == Pareto::Incomparable, "irreflexive");
    std::mt19937_64 rng(909);
    bool anti = true;
    for (int i = 0; i < 200; ++i) {
        MetricsReport a, b;
        a.su_percent = 100 * u01(rng);
        b.su_percent = 100 * u01(rng);
        a.fr = 100 * u01(rng);
        b.fr = 100 * u01(rng);
        a.ql_us = 50 * u01(rng);
        b.ql_us = 50 * u01(rng);
        Pareto ab = pareto_compare(a, b), ba = pareto_compare(b, a);
        if (ab == Pareto::ADominatesB && ba != Pareto::BDominatesA) anti = false;
        if (ab == Pareto::Incomparable && ba != Pareto::Incomparable) anti = false;
    }
    r.require(anti, "antisymmetry holds on 200 randomized report pairs");
    return r.ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--out-dir") == 0 && i + 1 < argc) g_out_dir = argv[++i];
    }
    struct Entry {
        int id;
        const char* name;
        bool (*fn)(Reporter&);
    };
    const Entry entries[] = {
        {1, "reward and fixed point", criterion_1},
        {2, "analytic gradient", criterion_2},
        {3, "simulator properties", criterion_3},
        {4, "training reproduction", criterion_4},
        {5, "generalization", criterion_5},
        {6, "operating-point monotonicity", criterion_6},
        {7, "int8 quantization", criterion_7},
        {8, "sqrt(N) inflation trend", criterion_8},
        {9, "baseline smoke and pareto", criterion_9},
    };
    bool all_ok = true;
    for (const Entry& e : entries) {
        if (only != 0 && e.id != only) continue;
        Reporter r;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = e.fn(r);
        } catch (const std::exception& ex) {
            r.detail << "    exception: " << ex.what() << "\n";
        }
        std::cout << "criterion " << e.id << " (" << e.name << "): "
                  << (ok ? "PASS" : "FAIL") << "  [" << fmt("%.1f", elapsed_s(t0))
                  << "s]\n"
                  << r.detail.str();
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
