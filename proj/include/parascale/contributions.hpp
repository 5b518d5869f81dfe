#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Decomposition of the serial fraction (1-alpha) into named sources, payload
// performance curves RMax(RPeak) with a processor-count-dependent alpha, and
// the breakdown point where adding processors starts to hurt.
//
// All fractions are measured against a fixed serial-equivalent clock budget
// (total_clocks): a term that costs C cycles contributes C/total_clocks.

namespace parascale::contrib {

// Combined serial fraction reached or passed 1: the machine does no payload
// work at all under this parameter set.
class ModelSaturatedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct MachineParams {
    double clock_ghz = 1.0;
    double per_core_flops = 1e11;     // payload flop/s of one processing unit
    double total_clocks = 2e13;       // benchmark clock budget
    double context_switch_cycles = 2e4;
    // Round-trip signal cost in cycles. When set it is used as-is; when
    // empty the cost is derived from physical distance and clock rate.
    std::optional<double> signal_cycles_roundtrip = 2e3;
    double cluster_size = 1;          // processors per dispatch head
    bool addressing_enabled = true;   // include the per-processor dispatch term

    void validate() const; // throws std::invalid_argument
};

// Serial-fraction shares by source. `access` is time spent outside the
// parallel system and is excluded from machine totals.
struct ContributionSet {
    double sw = 0.0;
    double os_context = 0.0;
    double addressing = 0.0;
    double propagation = 0.0;
    double access = 0.0;
};

struct BenchmarkProfile {
    std::string name;
    double sw_fraction = 0.0;
};

// Software serial fractions imitating the two standard benchmark classes.
BenchmarkProfile hpl_like();  // dense linear algebra, minimal SW fraction
BenchmarkProfile hpcg_like(); // iterative, communication-heavy

struct CurvePoint {
    double n_procs = 0.0;
    double rpeak = 0.0;   // flop/s
    double rmax = 0.0;    // flop/s
    double one_minus_alpha = 0.0;
};

struct Breakdown {
    double n_procs = 0.0;
    double rpeak = 0.0;
    double rmax = 0.0;
};

// (context_switch + addressing steps) / total_clocks, one clock per step,
// ceil(n/cluster_size) steps. The addressing term drops out when
// addressing_enabled is false.
double os_contribution(const MachineParams& params, double n_procs);

// Round-trip propagation share. The cycle override wins when set; otherwise
// 2*distance/c at the configured clock rate.
double pd_contribution(const MachineParams& params, double distance_m);
// Override-only form (no distance available).
double pd_contribution(const MachineParams& params);

// 2 / total_clocks: one fork plus one join cycle, the absolute floor.
double inherent_limit_floor(const MachineParams& params);

// Linear sum of the machine-side parts (access excluded).
// Throws ModelSaturatedError when the sum reaches 1.
double total_non_parallelizable(const ContributionSet& parts);

// sw + os + pd shares for n_procs processors under `profile`.
ContributionSet assemble(const MachineParams& params, const BenchmarkProfile& profile,
                         double n_procs);

// Log-spaced sweep of RPeak over [rpeak_lo, rpeak_hi] (flop/s);
// n = rpeak / per_core_flops, rmax = rpeak * E(alpha(n), n).
std::vector<CurvePoint> rmax_curve(const MachineParams& params, const BenchmarkProfile& profile,
                                   double rpeak_lo, double rpeak_hi, int samples);

// Processor count maximizing rmax on [1, n_max]: log-grid scan plus
// golden-section refinement. Empty when rmax never turns over in range.
std::optional<Breakdown> find_breakdown(const MachineParams& params,
                                        const BenchmarkProfile& profile, double n_max);

// Achievable performance gain 1/(1-alpha) for the assembled set.
double gain_limit(const MachineParams& params, const BenchmarkProfile& profile, double n_procs);

// rmax at a single processor count (the objective find_breakdown maximizes).
double rmax_at(const MachineParams& params, const BenchmarkProfile& profile, double n_procs);

} // namespace parascale::contrib
