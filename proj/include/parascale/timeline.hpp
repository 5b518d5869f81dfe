#pragma once

#include "parascale/contributions.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Discrete-event simulation of the extended fork/join timeline: serial
// software and OS phases, sequential per-processor dispatch, propagation
// delays out and back, parallel payloads, join. Measures the effective
// parallelization of the resulting schedule.
//
// All event times are integer clock cycles; a run is fully deterministic.

namespace parascale::timeline {

using Cycles = std::int64_t;

enum class DispatchOrder {
    AsGiven,       // processor index order
    NearestFirst,  // ascending outbound propagation delay
    FarthestFirst, // descending outbound propagation delay
};

// Throws std::invalid_argument on unknown names.
DispatchOrder parse_dispatch_order(std::string_view name);
std::string_view dispatch_order_name(DispatchOrder order);

struct TimelineConfig {
    std::size_t n_procs = 0;
    Cycles sw_pre = 0, sw_post = 0;   // serial software phases
    Cycles os_pre = 0, os_post = 0;   // serial OS phases
    Cycles dispatch_cost = 0;         // per-processor, consumed serially
    std::vector<Cycles> pd_out;       // per-processor outbound delay
    std::vector<Cycles> pd_back;      // per-processor return delay
    std::vector<Cycles> payloads;     // per-processor payload, > 0
    Cycles access_init = 0, access_term = 0;
    Cycles join_cost = 0;             // serial per-result cost at the join
    DispatchOrder order = DispatchOrder::AsGiven;
    // When true the first-dispatched slot is the initiator itself: processor 0
    // skips the dispatch queue and starts right after the serial pre phases.
    bool initiator_works = false;
    std::uint64_t seed = 0;           // used only by generator expansion

    void validate() const; // throws std::invalid_argument
};

struct SimResult {
    Cycles makespan = 0;              // access time excluded
    Cycles extended_makespan = 0;     // access time included
    Cycles payload_sum = 0;
    double speedup = 1.0;
    std::optional<double> alpha_eff;  // empty for n_procs == 1 (singular)
    double payload_stddev = 0.0;
    std::vector<double> per_proc_busy;
};

// Dispatch sequence under the configured policy. Ties break by index.
std::vector<std::size_t> dispatch_sequence(const TimelineConfig& config);

SimResult simulate(const TimelineConfig& config);
// Same schedule but with an explicit dispatch sequence (a permutation of
// processor indices); used for exhaustive ordering searches.
SimResult simulate_with_sequence(const TimelineConfig& config,
                                 const std::vector<std::size_t>& sequence);

struct AnalyticComparison {
    double alpha_sim = 0.0;
    double alpha_model = 0.0;
    double relative_gap = 0.0; // |alpha_sim - alpha_model| / alpha_model
};

// Cross-check of the simulated schedule against the closed-form contribution
// sum. Requires uniform payloads and uniform propagation delays.
AnalyticComparison compare_with_analytic(const TimelineConfig& config);
// Variant with an explicit clock budget (params.total_clocks) instead of the
// config-derived serial-equivalent work.
AnalyticComparison compare_with_analytic(const TimelineConfig& config,
                                         const contrib::MachineParams& params);

// Scenario files: line-oriented key=value, '#' comments. List fields accept
// comma-separated values or generators (const:V, uniform:LO:HI, linspace:LO:HI).
TimelineConfig load_scenario(std::istream& in);
TimelineConfig load_scenario_file(const std::string& path);

// Flat key=value result block, deterministic field order.
void write_result(std::ostream& out, const SimResult& result);

} // namespace parascale::timeline
