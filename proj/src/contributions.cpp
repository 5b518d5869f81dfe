#include "parascale/contributions.hpp"

#include "parascale/amdahl.hpp"

#include <algorithm>
#include <cmath>

namespace parascale::contrib {

namespace {

constexpr double kLightSpeedMps = 299'792'458.0;

// Golden-section search for the maximum of f on [lo, hi] (unimodal).
template <typename F>
double golden_max(F&& f, double lo, double hi, double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > rel_tol * std::max(1.0, std::abs(a))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    // ties broken toward smaller n
    return f1 >= f2 ? x1 : x2;
}

} // namespace

void MachineParams::validate() const {
    if (!(clock_ghz > 0.0))
        throw std::invalid_argument("clock_ghz must be > 0");
    if (!(per_core_flops > 0.0))
        throw std::invalid_argument("per_core_flops must be > 0");
    if (!(total_clocks > 0.0))
        throw std::invalid_argument("total_clocks must be > 0");
    if (!(context_switch_cycles >= 0.0))
        throw std::invalid_argument("context_switch_cycles must be >= 0");
    if (signal_cycles_roundtrip && !(*signal_cycles_roundtrip >= 0.0))
        throw std::invalid_argument("signal_cycles_roundtrip must be >= 0");
    if (!(cluster_size >= 1.0))
        throw std::invalid_argument("cluster_size must be >= 1");
}

BenchmarkProfile hpl_like() { return {"hpl", 2e-8}; }
BenchmarkProfile hpcg_like() { return {"hpcg", 2e-6}; }

double os_contribution(const MachineParams& params, double n_procs) {
    params.validate();
    if (!(n_procs >= 1.0))
        throw std::domain_error("n_procs must be >= 1");
    double steps = params.addressing_enabled ? std::ceil(n_procs / params.cluster_size) : 0.0;
    return (params.context_switch_cycles + steps) / params.total_clocks;
}

double pd_contribution(const MachineParams& params, double distance_m) {
    params.validate();
    if (!(distance_m >= 0.0))
        throw std::domain_error("distance must be >= 0");
    double roundtrip_cycles;
    if (params.signal_cycles_roundtrip) {
        roundtrip_cycles = *params.signal_cycles_roundtrip;
    } else {
        double clock_hz = params.clock_ghz * 1e9;
        roundtrip_cycles = 2.0 * distance_m / kLightSpeedMps * clock_hz;
    }
    return roundtrip_cycles / params.total_clocks;
}

double pd_contribution(const MachineParams& params) {
    params.validate();
    double roundtrip_cycles = params.signal_cycles_roundtrip.value_or(0.0);
    return roundtrip_cycles / params.total_clocks;
}

double inherent_limit_floor(const MachineParams& params) {
    params.validate();
    return 2.0 / params.total_clocks;
}

double total_non_parallelizable(const ContributionSet& parts) {
    for (double part : {parts.sw, parts.os_context, parts.addressing, parts.propagation}) {
        if (!(part >= 0.0))
            throw std::domain_error("contributions must be non-negative");
    }
    double total = parts.sw + parts.os_context + parts.addressing + parts.propagation;
    if (total >= 1.0)
        throw ModelSaturatedError("model saturated: serial fractions sum to " +
                                  std::to_string(total));
    return total;
}

ContributionSet assemble(const MachineParams& params, const BenchmarkProfile& profile,
                         double n_procs) {
    params.validate();
    if (!(profile.sw_fraction >= 0.0 && profile.sw_fraction < 1.0))
        throw std::domain_error("profile sw_fraction must lie in [0,1)");
    ContributionSet parts;
    parts.sw = profile.sw_fraction;
    parts.os_context = params.context_switch_cycles / params.total_clocks;
    if (params.addressing_enabled)
        parts.addressing = std::ceil(n_procs / params.cluster_size) / params.total_clocks;
    parts.propagation = pd_contribution(params);
    return parts;
}

double rmax_at(const MachineParams& params, const BenchmarkProfile& profile, double n_procs) {
    double one_minus_alpha = total_non_parallelizable(assemble(params, profile, n_procs));
    return n_procs * params.per_core_flops *
           amdahl::efficiency_serial(one_minus_alpha, n_procs);
}

std::vector<CurvePoint> rmax_curve(const MachineParams& params, const BenchmarkProfile& profile,
                                   double rpeak_lo, double rpeak_hi, int samples) {
    params.validate();
    if (!(rpeak_lo > 0.0) || !(rpeak_hi > rpeak_lo))
        throw std::domain_error("rpeak range must be positive and increasing");
    if (samples < 2)
        throw std::domain_error("need at least 2 samples");

    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(samples));
    double log_lo = std::log10(rpeak_lo);
    double log_hi = std::log10(rpeak_hi);
    for (int i = 0; i < samples; ++i) {
        double rpeak = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (samples - 1));
        double n = std::max(1.0, rpeak / params.per_core_flops);
        double one_minus_alpha = total_non_parallelizable(assemble(params, profile, n));
        CurvePoint pt;
        pt.n_procs = n;
        pt.rpeak = rpeak;
        pt.one_minus_alpha = one_minus_alpha;
        pt.rmax = rpeak * amdahl::efficiency_serial(one_minus_alpha, n);
        curve.push_back(pt);
    }
    return curve;
}

std::optional<Breakdown> find_breakdown(const MachineParams& params,
                                        const BenchmarkProfile& profile, double n_max) {
    params.validate();
    if (!(n_max >= 2.0))
        throw std::domain_error("n_max must be >= 2");

    auto objective = [&](double n) { return rmax_at(params, profile, n); };

    // Log-grid scan to bracket the maximum.
    constexpr int kGrid = 1000;
    double log_hi = std::log10(n_max);
    int best = 0;
    double best_val = -1.0;
    std::vector<double> grid(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        grid[i] = std::pow(10.0, log_hi * i / (kGrid - 1));
        double val = objective(grid[i]);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    if (best == kGrid - 1)
        return std::nullopt; // still climbing at n_max: no interior maximum

    double lo = grid[std::max(0, best - 1)];
    double hi = grid[best + 1];
    double n_star = golden_max(objective, lo, hi, 1e-12);

    Breakdown bd;
    bd.n_procs = n_star;
    bd.rpeak = n_star * params.per_core_flops;
    bd.rmax = objective(n_star);
    return bd;
}

double gain_limit(const MachineParams& params, const BenchmarkProfile& profile, double n_procs) {
    if (!(n_procs >= 1.0))
        throw std::domain_error("n_procs must be >= 1");
    double total = total_non_parallelizable(assemble(params, profile, n_procs));
    return amdahl::gain_from_serial(total);
}

} // namespace parascale::contrib
