// parascale — strong-scaling analysis toolkit.
//
// Subcommands:
//   analyze   derive efficiency / serial fraction / gain from measured tables
//   predict   RMax(RPeak) prediction sweep with breakdown search
//   simulate  run a dispatch/payload/join timeline scenario
//   figures   emit hillside / gain-timeline / scatter datasets
//   limits    report the inherent serial-fraction floors and gain bounds

#include "parascale/amdahl.hpp"
#include "parascale/contributions.hpp"
#include "parascale/ingest.hpp"
#include "parascale/report.hpp"
#include "parascale/timeline.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoData = 2;

std::string fmt(const char* format, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

// Output sink: file when --output given, stdout otherwise.
struct Sink {
    std::ofstream file;
    std::ostream* out = &std::cout;

    bool open(const std::string& path) {
        if (path.empty())
            return true;
        file.open(path);
        if (!file) {
            std::cerr << "error: cannot open output file: " << path << "\n";
            return false;
        }
        out = &file;
        return true;
    }
};

struct MachineFlags {
    double total_clocks = 2e13;
    double ctx_cycles = 2e4;
    double pd_cycles = 2e3;
    double clock_ghz = 1.0;
    double per_core_flops = 1e11;
    double cluster = 1.0;
    bool no_addressing = false;
    double distance_m = -1.0;
    CLI::Option* pd_opt = nullptr;
    CLI::Option* dist_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--total-clocks", total_clocks,
                        "Benchmark clock budget in cycles (default 2e13)");
        cmd->add_option("--ctx-cycles", ctx_cycles,
                        "Context-switch cost in cycles (default 2e4)");
        pd_opt = cmd->add_option("--pd-cycles", pd_cycles,
                                 "Signal round-trip cost in cycles (default 2e3)");
        dist_opt = cmd->add_option("--distance-m", distance_m,
                                   "Derive the round-trip cost from cable length instead");
        cmd->add_option("--clock-ghz", clock_ghz, "Clock rate in GHz (default 1)");
        cmd->add_option("--per-core-flops", per_core_flops,
                        "Payload flop/s of one processing unit (default 1e11)");
        cmd->add_option("--cluster", cluster, "Processors per dispatch head (default 1)");
        cmd->add_flag("--no-addressing", no_addressing,
                      "Drop the per-processor addressing term (constant alpha)");
    }

    parascale::contrib::MachineParams params() const {
        parascale::contrib::MachineParams p;
        p.clock_ghz = clock_ghz;
        p.per_core_flops = per_core_flops;
        p.total_clocks = total_clocks;
        p.context_switch_cycles = ctx_cycles;
        p.cluster_size = cluster;
        p.addressing_enabled = !no_addressing;
        if (dist_opt && dist_opt->count() > 0 && (!pd_opt || pd_opt->count() == 0)) {
            // physics path: round-trip cycles from distance at the clock rate
            p.signal_cycles_roundtrip =
                2.0 * distance_m / 299'792'458.0 * clock_ghz * 1e9;
        } else {
            p.signal_cycles_roundtrip = pd_cycles;
        }
        return p;
    }
};

parascale::contrib::BenchmarkProfile make_profile(const std::string& name, double sw,
                                                  bool sw_given) {
    parascale::contrib::BenchmarkProfile profile;
    if (name == "hpl")
        profile = parascale::contrib::hpl_like();
    else if (name == "hpcg")
        profile = parascale::contrib::hpcg_like();
    else
        profile = {"custom", 0.0};
    if (sw_given)
        profile.sw_fraction = sw;
    return profile;
}

int run_analyze(const std::string& input, const std::string& output, const std::string& k_column,
                const std::string& units) {
    parascale::ingest::ParseOptions opts;
    if (!units.empty())
        opts.unit_flops = parascale::ingest::unit_multiplier(units);
    parascale::ingest::ParseResult parsed = parascale::ingest::parse_file(input, opts);
    for (const auto& err : parsed.errors)
        std::cerr << input << ":" << err.line << ": " << err.reason << "\n";

    std::vector<parascale::ingest::MachineRecord> good;
    for (const auto& rec : parsed.records) {
        double k = rec.cores;
        if (k_column == "nodes") {
            if (!rec.nodes) {
                std::cerr << "record '" << rec.name << "': no nodes column value, skipped\n";
                continue;
            }
            k = *rec.nodes;
        }
        try {
            parascale::ingest::derive(rec, k);
            good.push_back(rec);
        } catch (const std::exception& e) {
            std::cerr << "record '" << rec.name << "': " << e.what() << "\n";
        }
    }
    if (good.empty()) {
        std::cerr << "error: no valid rows\n";
        return kExitNoData;
    }
    Sink sink;
    if (!sink.open(output))
        return kExitError;
    parascale::ingest::write_records(*sink.out, good, "flop/s", true, k_column);
    return kExitOk;
}

int run_predict(const MachineFlags& machine, const std::string& profile_name, double sw,
                bool sw_given, double rpeak_min_eflops, double rpeak_max_eflops, int samples,
                double n_max, bool n_max_given, const std::string& output) {
    auto params = machine.params();
    auto profile = make_profile(profile_name, sw, sw_given);
    double lo = rpeak_min_eflops * 1e18;
    double hi = rpeak_max_eflops * 1e18;

    Sink sink;
    if (!sink.open(output))
        return kExitError;
    std::ostream& out = *sink.out;

    auto curve = parascale::contrib::rmax_curve(params, profile, lo, hi, samples);
    out << "# rmax prediction sweep, profile=" << profile.name
        << " sw=" << fmt("%g", profile.sw_fraction) << " (units: flop/s)\n";
    out << "n_procs,rpeak,rmax,one_minus_alpha\n";
    for (const auto& pt : curve) {
        out << fmt("%.8e", pt.n_procs) << ',' << fmt("%.8e", pt.rpeak) << ','
            << fmt("%.8e", pt.rmax) << ',' << fmt("%.8e", pt.one_minus_alpha) << "\n";
    }

    double search_n_max = n_max_given ? n_max : hi / params.per_core_flops;
    auto breakdown = parascale::contrib::find_breakdown(params, profile, search_n_max);
    if (breakdown) {
        out << "# breakdown n_star=" << fmt("%.8e", breakdown->n_procs)
            << " rpeak_star=" << fmt("%.8e", breakdown->rpeak)
            << " rmax_star=" << fmt("%.8e", breakdown->rmax) << "\n";
    } else {
        out << "# no breakdown in range\n";
    }
    return kExitOk;
}

int run_simulate(const std::string& scenario, const std::string& policy, bool policy_given,
                 std::uint64_t seed, bool seed_given, bool compare, const std::string& output) {
    auto config = parascale::timeline::load_scenario_file(scenario);
    if (policy_given)
        config.order = parascale::timeline::parse_dispatch_order(policy);
    if (seed_given) {
        // regenerate list fields under the new seed
        std::ifstream raw(scenario);
        std::stringstream patched;
        std::string line;
        while (std::getline(raw, line)) {
            auto pos = line.find_first_not_of(" \t");
            if (pos != std::string::npos && line.compare(pos, 4, "seed") == 0)
                continue;
            patched << line << "\n";
        }
        patched << "seed = " << seed << "\n";
        config = parascale::timeline::load_scenario(patched);
        if (policy_given)
            config.order = parascale::timeline::parse_dispatch_order(policy);
    }

    Sink sink;
    if (!sink.open(output))
        return kExitError;
    auto result = parascale::timeline::simulate(config);
    parascale::timeline::write_result(*sink.out, result);
    if (compare) {
        auto cmp = parascale::timeline::compare_with_analytic(config);
        *sink.out << "alpha_model = " << fmt("%.17g", cmp.alpha_model) << "\n";
        *sink.out << "alpha_gap_relative = " << fmt("%.17g", cmp.relative_gap) << "\n";
    }
    return kExitOk;
}

int run_figures(const std::string& input, const std::string& which,
                const std::vector<double>& levels, const MachineFlags& machine,
                const std::string& output) {
    parascale::ingest::ParseResult parsed = parascale::ingest::parse_file(input);
    for (const auto& err : parsed.errors)
        std::cerr << input << ":" << err.line << ": " << err.reason << "\n";
    if (parsed.records.empty()) {
        std::cerr << "error: no valid rows\n";
        return kExitNoData;
    }

    Sink sink;
    if (!sink.open(output))
        return kExitError;
    std::ostream& out = *sink.out;

    if (which == "hillside") {
        auto grid = parascale::report::hillside(parsed.records);
        for (const auto& issue : grid.issues)
            std::cerr << "hillside: " << issue << "\n";
        parascale::report::write_hillside(out, grid);
    } else if (which == "gain") {
        auto timeline = parascale::report::gain_timeline(parsed.records);
        for (const auto& notice : timeline.notices)
            std::cerr << "gain: " << notice << "\n";
        parascale::report::write_gain_timeline(out, timeline);
    } else if (which == "scatter") {
        auto ds = parascale::report::scatter_with_bands(parsed.records, levels,
                                                        machine.params());
        parascale::report::write_scatter(out, ds);
    } else {
        std::cerr << "error: unknown figure '" << which << "'\n";
        return kExitError;
    }

    if (!output.empty()) {
        std::ofstream stub(output + ".gnuplot");
        stub << parascale::report::plot_stub(which, output);
    }
    return kExitOk;
}

int run_limits(const MachineFlags& machine, double n_procs, const std::string& output) {
    auto params = machine.params();
    params.validate();

    Sink sink;
    if (!sink.open(output))
        return kExitError;
    std::ostream& out = *sink.out;

    double floor = parascale::contrib::inherent_limit_floor(params);
    double pd = parascale::contrib::pd_contribution(params);
    double os = parascale::contrib::os_contribution(params, n_procs);
    double t = params.total_clocks;
    double steps = params.addressing_enabled
                       ? std::ceil(n_procs / params.cluster_size)
                       : 0.0;

    out << "# inherent limits report (n_procs = " << fmt("%g", n_procs)
        << ", cluster = " << fmt("%g", params.cluster_size) << ")\n";
    out << "total_clocks = " << fmt("%g", t) << "\n";
    out << "floor_one_minus_alpha = " << fmt("%g", floor) << "\n";
    out << "floor_gain_bound = " << fmt("%g", t / 2.0) << "\n";
    out << "pd_one_minus_alpha = " << fmt("%g", pd) << "\n";
    out << "pd_gain_bound = "
        << (pd > 0.0 ? fmt("%g", t / *params.signal_cycles_roundtrip) : "unbounded") << "\n";
    out << "os_one_minus_alpha = " << fmt("%g", os) << "\n";
    out << "os_gain_bound = "
        << (os > 0.0 ? fmt("%g", t / (params.context_switch_cycles + steps)) : "unbounded")
        << "\n";
    double combined = parascale::contrib::total_non_parallelizable(
        {0.0, params.context_switch_cycles / t, steps / t, pd, 0.0});
    out << "combined_one_minus_alpha = " << fmt("%g", combined) << "\n";
    out << "combined_gain_bound = " << fmt("%g", parascale::amdahl::gain_from_serial(combined))
        << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong-scaling analysis toolkit"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value config file ('#' comments)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Derive metrics from a measurement table");
    analyze->configurable();
    std::string an_input, an_output, an_k_column = "cores", an_units;
    analyze->add_option("--input", an_input, "Input table")->required();
    analyze->add_option("--output", an_output, "Output path (default stdout)");
    analyze->add_option("--k-column", an_k_column, "Processor count column: cores|nodes")
        ->check(CLI::IsMember({"cores", "nodes"}));
    analyze->add_option("--units", an_units, "Default input unit (Tflop/s when omitted)");

    // predict
    auto* predict = app.add_subcommand("predict", "RMax(RPeak) prediction sweep");
    predict->configurable();
    MachineFlags pr_machine;
    pr_machine.attach(predict);
    std::string pr_profile = "hpl", pr_output;
    double pr_sw = 0.0, pr_min = 0.001, pr_max = 1.1, pr_n_max = 0.0;
    int pr_samples = 200;
    predict->add_option("--profile", pr_profile, "Benchmark profile: hpl|hpcg|custom")
        ->check(CLI::IsMember({"hpl", "hpcg", "custom"}));
    auto* pr_sw_opt =
        predict->add_option("--sw", pr_sw, "Software serial fraction override");
    predict->add_option("--rpeak-min", pr_min, "Sweep start in Eflop/s (default 0.001)");
    predict->add_option("--rpeak-max", pr_max, "Sweep end in Eflop/s (default 1.1)");
    predict->add_option("--samples", pr_samples, "Sweep samples (default 200)");
    auto* pr_n_max_opt =
        predict->add_option("--n-max", pr_n_max, "Breakdown search bound (processors)");
    predict->add_option("--output", pr_output, "Output path (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a timeline scenario");
    simulate->configurable();
    std::string si_scenario, si_policy, si_output;
    std::uint64_t si_seed = 0;
    bool si_compare = false;
    simulate->add_option("--scenario", si_scenario, "Scenario file")->required();
    auto* si_policy_opt = simulate->add_option(
        "--policy", si_policy, "Dispatch order: as-given|nearest-first|farthest-first");
    auto* si_seed_opt = simulate->add_option("--seed", si_seed, "Seed override (default 0)");
    simulate->add_flag("--compare-analytic", si_compare,
                       "Append the closed-form cross-check to the result block");
    simulate->add_option("--output", si_output, "Output path (default stdout)");

    // figures
    auto* figures = app.add_subcommand("figures", "Emit figure datasets");
    figures->configurable();
    MachineFlags fi_machine;
    fi_machine.attach(figures);
    std::string fi_input, fi_which, fi_output;
    std::vector<double> fi_levels = {1e-8, 1e-7, 5e-7, 1e-6, 1e-5, 5e-5, 1e-4, 3e-4};
    figures->add_option("--input", fi_input, "Input table")->required();
    figures->add_option("--which", fi_which, "hillside|gain|scatter")
        ->required()
        ->check(CLI::IsMember({"hillside", "gain", "scatter"}));
    figures->add_option("--levels", fi_levels, "Band levels (1-alpha)")->delimiter(',');
    figures->add_option("--output", fi_output, "Output path (default stdout)");

    // limits
    auto* limits = app.add_subcommand("limits", "Inherent limits report");
    limits->configurable();
    MachineFlags li_machine;
    li_machine.attach(limits);
    double li_n_procs = 1e7;
    std::string li_output;
    limits->add_option("--n-procs", li_n_procs, "Processor count (default 1e7)");
    limits->add_option("--output", li_output, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed())
            return run_analyze(an_input, an_output, an_k_column, an_units);
        if (predict->parsed())
            return run_predict(pr_machine, pr_profile, pr_sw, pr_sw_opt->count() > 0, pr_min,
                               pr_max, pr_samples, pr_n_max, pr_n_max_opt->count() > 0,
                               pr_output);
        if (simulate->parsed())
            return run_simulate(si_scenario, si_policy, si_policy_opt->count() > 0, si_seed,
                                si_seed_opt->count() > 0, si_compare, si_output);
        if (figures->parsed())
            return run_figures(fi_input, fi_which, fi_levels, fi_machine, fi_output);
        if (limits->parsed())
            return run_limits(li_machine, li_n_procs, li_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
