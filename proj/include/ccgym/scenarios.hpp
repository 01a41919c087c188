#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccgym/kvconfig.hpp"
#include "ccgym/simulation.hpp"

namespace ccgym {

enum class ScenarioKind : std::uint8_t { ManyToOne, AllToAll, LongShort };

inline const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::ManyToOne: return "many_to_one";
        case ScenarioKind::AllToAll: return "all_to_all";
        case ScenarioKind::LongShort: return "long_short";
    }
    return "?";
}

struct InterruptSpec {
    std::uint32_t short_flow_count = 1;
    std::uint64_t short_bytes = 1 << 20;  // 1 MB default
    SimTime start_time_ns = 0;            // interrupt window start
    SimTime window_ns = 0;                // 0 = first quarter of the run
};

struct ScenarioSpec {
    std::string name;
    ScenarioKind kind = ScenarioKind::ManyToOne;
    std::uint32_t total_flows = 0;
    std::uint32_t hosts = 0;           // 0 = derive (mapping table / kind rule)
    std::uint32_t flows_per_host = 0;  // 0 = derive
    SimTime duration_ns = 20 * kMillisecond;
    InterruptSpec interrupt;  // LongShort only
    std::uint64_t seed = 1;
    SimParams sim;
    SimTime start_jitter_ns = 2 * kMicrosecond;  // host start desynchronization
    // Long-lived flows start at the fair share of their congestion port by
    // default; a simultaneous line-rate start of many probe-paced flows jams
    // the buffer before the first probes return. 0 = fair share.
    double initial_rate_fraction = 0;
};

// Host/flow decomposition used by the many-to-one benchmark family.
struct MappingTable {
    struct Row {
        std::uint32_t total_flows, hosts, flows_per_host;
    };

    static const std::vector<Row>& rows() {
        static const std::vector<Row> t = {
            {2, 2, 1},       {4, 4, 1},      {16, 16, 1},    {32, 32, 1},
            {64, 64, 1},     {128, 64, 2},   {256, 32, 8},   {512, 64, 8},
            {1024, 32, 32},  {2048, 64, 32}, {4096, 64, 64}, {8192, 64, 128},
        };
        return t;
    }

    static bool lookup(std::uint32_t total, std::uint32_t& hosts,
                       std::uint32_t& flows_per_host) {
        for (const Row& r : rows()) {
            if (r.total_flows == total) {
                hosts = r.hosts;
                flows_per_host = r.flows_per_host;
                return true;
            }
        }
        return false;
    }
};

namespace detail {
inline SimTime draw_jitter(std::mt19937_64& rng, SimTime span) {
    return span == 0 ? 0 : SimTime(u01(rng) * double(span));
}
}  // namespace detail

// N senders, one congestion port, one receiver. Hosts get a small seeded
// start offset so equal-rate sources do not phase-lock.
inline InstanceSetup build_many_to_one(const ScenarioSpec& spec) {
    if (spec.kind != ScenarioKind::ManyToOne)
        throw std::runtime_error("scenario: kind mismatch for many_to_one builder");
    if (spec.total_flows == 0) throw std::runtime_error("scenario: total_flows required");
    std::uint32_t hosts = spec.hosts, fph = spec.flows_per_host;
    if (hosts == 0 || fph == 0) {
        if (!MappingTable::lookup(spec.total_flows, hosts, fph)) {
            if (spec.total_flows <= 64) {
                hosts = spec.total_flows;
                fph = 1;
            } else {
                throw std::runtime_error(
                    "scenario: no mapping for this flow count; set hosts and "
                    "flows_per_host explicitly");
            }
        }
    }
    if (std::uint64_t(hosts) * fph != spec.total_flows)
        throw std::runtime_error("scenario: hosts * flows_per_host != total_flows");
    InstanceSetup setup;
    setup.params = spec.sim;
    setup.params.seed = spec.seed;
    setup.hosts = hosts;
    setup.ports = 1;
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    double frac = spec.initial_rate_fraction > 0 ? spec.initial_rate_fraction
                                                 : 1.0 / double(spec.total_flows);
    for (std::uint32_t h = 0; h < hosts; ++h) {
        SimTime jitter = detail::draw_jitter(rng, spec.start_jitter_ns);
        for (std::uint32_t k = 0; k < fph; ++k)
            setup.flows.push_back(FlowSetup{h, 0, 0, jitter, frac});
    }
    return setup;
}

// Every host sends one infinite flow to every other host; traffic toward
// host i traverses switch port i.
inline InstanceSetup build_all_to_all(const ScenarioSpec& spec) {
    std::uint32_t hosts = spec.hosts != 0 ? spec.hosts : spec.total_flows;
    if (hosts < 2) throw std::runtime_error("scenario: all_to_all needs >= 2 hosts");
    InstanceSetup setup;
    setup.params = spec.sim;
    setup.params.seed = spec.seed;
    setup.hosts = hosts;
    setup.ports = hosts;
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    double frac = spec.initial_rate_fraction > 0 ? spec.initial_rate_fraction
                                                 : 1.0 / double(hosts - 1);
    for (std::uint32_t i = 0; i < hosts; ++i) {
        SimTime jitter = detail::draw_jitter(rng, spec.start_jitter_ns);
        for (std::uint32_t j = 0; j < hosts; ++j) {
            if (i == j) continue;
            setup.flows.push_back(FlowSetup{i, j, 0, jitter, frac});
        }
    }
    return setup;
}

// One infinite flow from t=0, interrupted by short flows whose start times
// are drawn from the seeded generator inside the interrupt window.
inline InstanceSetup build_long_short(const ScenarioSpec& spec) {
    std::uint32_t shorts = spec.interrupt.short_flow_count;
    if (spec.total_flows != 0) {
        if (spec.total_flows < 2)
            throw std::runtime_error("scenario: long_short needs >= 2 flows");
        shorts = spec.total_flows - 1;
    }
    if (shorts < 1) throw std::runtime_error("scenario: long_short needs >= 1 short flow");
    if (spec.interrupt.short_bytes == 0)
        throw std::runtime_error("scenario: short_bytes must be positive");
    InstanceSetup setup;
    setup.params = spec.sim;
    setup.params.seed = spec.seed;
    setup.hosts = 1 + shorts;
    setup.ports = 1;
    // The long flow owns the port at t=0; interrupters join at line rate.
    setup.flows.push_back(FlowSetup{0, 0, 0, 0, 1.0});
    SimTime window = spec.interrupt.window_ns != 0 ? spec.interrupt.window_ns
                                                   : spec.duration_ns / 4;
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
    double frac = spec.initial_rate_fraction > 0 ? spec.initial_rate_fraction : 1.0;
    for (std::uint32_t k = 0; k < shorts; ++k) {
        SimTime at = spec.interrupt.start_time_ns + detail::draw_jitter(rng, window);
        setup.flows.push_back(FlowSetup{1 + k, 0, spec.interrupt.short_bytes, at, frac});
    }
    return setup;
}

inline InstanceSetup build_instance(const ScenarioSpec& spec) {
    switch (spec.kind) {
        case ScenarioKind::ManyToOne: return build_many_to_one(spec);
        case ScenarioKind::AllToAll: return build_all_to_all(spec);
        case ScenarioKind::LongShort: return build_long_short(spec);
    }
    throw std::runtime_error("scenario: unknown kind");
}

inline void apply_sim_overrides(SimParams& p, const KvConfig& cfg) {
    p.link_rate_bps = std::uint64_t(cfg.real("sim.link_rate_gbps",
                                             double(p.link_rate_bps) / 1e9) * 1e9);
    p.mtu_bytes = std::uint32_t(cfg.integer("sim.mtu_bytes", p.mtu_bytes));
    p.probe_bytes = std::uint32_t(cfg.integer("sim.probe_bytes", p.probe_bytes));
    p.max_burst_bytes = std::uint32_t(cfg.integer("sim.max_burst_bytes", p.max_burst_bytes));
    p.hop_prop_ns = SimTime(cfg.integer("sim.hop_prop_ns", std::int64_t(p.hop_prop_ns)));
    p.port_capacity_bytes =
        std::uint64_t(cfg.integer("sim.port_capacity_bytes", std::int64_t(p.port_capacity_bytes)));
    p.ecn_kmin_bytes = std::uint64_t(cfg.integer("sim.ecn_kmin_bytes", std::int64_t(p.ecn_kmin_bytes)));
    p.ecn_kmax_bytes = std::uint64_t(cfg.integer("sim.ecn_kmax_bytes", std::int64_t(p.ecn_kmax_bytes)));
    p.ecn_pmax = cfg.real("sim.ecn_pmax", p.ecn_pmax);
    p.telemetry = cfg.integer("sim.telemetry", p.telemetry ? 1 : 0) != 0;
    p.min_rate_fraction = cfg.real("sim.min_rate_fraction", p.min_rate_fraction);
    p.initial_rate_fraction = cfg.real("sim.initial_rate_fraction", p.initial_rate_fraction);
}

// One scenario per config document.
inline ScenarioSpec scenario_from_config(const KvConfig& cfg, const std::string& name) {
    ScenarioSpec spec;
    spec.name = cfg.str("name", name);
    std::string kind = cfg.str("kind", "many_to_one");
    if (kind == "many_to_one")
        spec.kind = ScenarioKind::ManyToOne;
    else if (kind == "all_to_all")
        spec.kind = ScenarioKind::AllToAll;
    else if (kind == "long_short")
        spec.kind = ScenarioKind::LongShort;
    else
        throw std::runtime_error("scenario: unknown kind " + kind);
    spec.total_flows = std::uint32_t(cfg.integer("total_flows", 0));
    spec.hosts = std::uint32_t(cfg.integer("hosts", 0));
    spec.flows_per_host = std::uint32_t(cfg.integer("flows_per_host", 0));
    if (cfg.has("duration_ms"))
        spec.duration_ns = SimTime(cfg.real("duration_ms", 20.0) * double(kMillisecond));
    else
        spec.duration_ns = SimTime(cfg.integer("duration_ns", std::int64_t(spec.duration_ns)));
    spec.seed = std::uint64_t(cfg.integer("seed", 1));
    spec.start_jitter_ns = SimTime(cfg.integer("start_jitter_ns", std::int64_t(spec.start_jitter_ns)));
    spec.interrupt.short_flow_count =
        std::uint32_t(cfg.integer("short_flows", spec.interrupt.short_flow_count));
    spec.interrupt.short_bytes =
        std::uint64_t(cfg.integer("short_bytes", std::int64_t(spec.interrupt.short_bytes)));
    spec.interrupt.start_time_ns =
        SimTime(cfg.integer("interrupt_start_ns", std::int64_t(spec.interrupt.start_time_ns)));
    spec.interrupt.window_ns =
        SimTime(cfg.integer("interrupt_window_ns", std::int64_t(spec.interrupt.window_ns)));
    spec.initial_rate_fraction = cfg.real("initial_rate_fraction", spec.initial_rate_fraction);
    apply_sim_overrides(spec.sim, cfg);
    return spec;
}

inline ScenarioSpec load_scenario(const std::string& path) {
    std::string name = path;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    return scenario_from_config(KvConfig::parse_file(path), name);
}

// Shorthand used by the benchmark suite and tests: "m2o:8", "a2a:4", "ls:2".
inline ScenarioSpec scenario_shorthand(const std::string& token) {
    auto colon = token.find(':');
    if (colon == std::string::npos)
        throw std::runtime_error("scenario: bad shorthand " + token);
    std::string kind = token.substr(0, colon);
    std::uint32_t n = std::uint32_t(std::stoul(token.substr(colon + 1)));
    ScenarioSpec spec;
    spec.name = token;
    if (kind == "m2o") {
        spec.kind = ScenarioKind::ManyToOne;
        spec.total_flows = n;
    } else if (kind == "a2a") {
        spec.kind = ScenarioKind::AllToAll;
        spec.hosts = n;
    } else if (kind == "ls") {
        spec.kind = ScenarioKind::LongShort;
        spec.total_flows = n;
    } else {
        throw std::runtime_error("scenario: bad shorthand kind " + kind);
    }
    return spec;
}

}  // namespace ccgym
