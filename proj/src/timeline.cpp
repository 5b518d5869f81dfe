#include "parascale/timeline.hpp"

#include "parascale/amdahl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace parascale::timeline {

namespace {

Cycles checked_add(Cycles a, Cycles b) {
    Cycles out;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("cycle counter overflow (config exceeds 2^63 cycles)");
    return out;
}

Cycles checked_mul(Cycles a, Cycles b) {
    Cycles out;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("cycle counter overflow (config exceeds 2^63 cycles)");
    return out;
}

double population_stddev(const std::vector<Cycles>& values) {
    if (values.empty())
        return 0.0;
    double mean = 0.0;
    for (Cycles v : values)
        mean += static_cast<double>(v);
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (Cycles v : values) {
        double d = static_cast<double>(v) - mean;
        var += d * d;
    }
    return std::sqrt(var / static_cast<double>(values.size()));
}

} // namespace

DispatchOrder parse_dispatch_order(std::string_view name) {
    if (name == "as-given")
        return DispatchOrder::AsGiven;
    if (name == "nearest-first")
        return DispatchOrder::NearestFirst;
    if (name == "farthest-first")
        return DispatchOrder::FarthestFirst;
    throw std::invalid_argument("unknown dispatch order '" + std::string(name) +
                                "' (expected as-given|nearest-first|farthest-first)");
}

std::string_view dispatch_order_name(DispatchOrder order) {
    switch (order) {
    case DispatchOrder::AsGiven: return "as-given";
    case DispatchOrder::NearestFirst: return "nearest-first";
    case DispatchOrder::FarthestFirst: return "farthest-first";
    }
    return "?";
}

void TimelineConfig::validate() const {
    if (n_procs == 0)
        throw std::invalid_argument("empty payload list: n_procs must be >= 1");
    if (payloads.size() != n_procs || pd_out.size() != n_procs || pd_back.size() != n_procs)
        throw std::invalid_argument("pd_out, pd_back and payloads must each have n_procs entries");
    for (Cycles c : {sw_pre, sw_post, os_pre, os_post, dispatch_cost, access_init, access_term,
                     join_cost}) {
        if (c < 0)
            throw std::invalid_argument("durations must be non-negative");
    }
    for (std::size_t i = 0; i < n_procs; ++i) {
        if (payloads[i] <= 0)
            throw std::invalid_argument("payloads must be positive cycles");
        if (pd_out[i] < 0 || pd_back[i] < 0)
            throw std::invalid_argument("propagation delays must be non-negative");
    }
}

std::vector<std::size_t> dispatch_sequence(const TimelineConfig& config) {
    config.validate();
    std::vector<std::size_t> seq(config.n_procs);
    std::iota(seq.begin(), seq.end(), std::size_t{0});
    switch (config.order) {
    case DispatchOrder::AsGiven:
        break;
    case DispatchOrder::NearestFirst:
        std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
            return config.pd_out[a] < config.pd_out[b];
        });
        break;
    case DispatchOrder::FarthestFirst:
        std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
            return config.pd_out[a] > config.pd_out[b];
        });
        break;
    }
    return seq;
}

SimResult simulate_with_sequence(const TimelineConfig& config,
                                 const std::vector<std::size_t>& sequence) {
    config.validate();
    std::vector<bool> covered(config.n_procs, false);
    for (std::size_t idx : sequence) {
        if (idx >= config.n_procs || covered[idx])
            throw std::invalid_argument("dispatch sequence must be a permutation of processors");
        covered[idx] = true;
    }
    if (sequence.size() != config.n_procs)
        throw std::invalid_argument("dispatch sequence must cover every processor");

    // Serial pre phases; time zero is the end of access_init.
    Cycles serial_pre = checked_add(config.sw_pre, config.os_pre);
    Cycles cursor = serial_pre;

    std::vector<Cycles> start(config.n_procs, serial_pre);
    for (std::size_t idx : sequence) {
        if (config.initiator_works && idx == 0)
            continue; // the initiator starts itself without a dispatch slot
        cursor = checked_add(cursor, config.dispatch_cost);
        start[idx] = cursor;
    }

    Cycles join = cursor; // the initiator is busy until the last dispatch
    Cycles payload_sum = 0;
    for (std::size_t i = 0; i < config.n_procs; ++i) {
        Cycles begin = checked_add(start[i], config.pd_out[i]);
        Cycles end = checked_add(begin, config.payloads[i]);
        Cycles arrival = checked_add(end, config.pd_back[i]);
        join = std::max(join, arrival);
        payload_sum = checked_add(payload_sum, config.payloads[i]);
    }
    join = checked_add(join, checked_mul(config.join_cost,
                                         static_cast<Cycles>(config.n_procs)));

    Cycles serial_post = checked_add(config.os_post, config.sw_post);
    Cycles makespan = checked_add(join, serial_post);
    Cycles serial_equiv = checked_add(checked_add(serial_pre, serial_post), payload_sum);

    SimResult res;
    res.makespan = makespan;
    res.extended_makespan =
        checked_add(checked_add(config.access_init, makespan), config.access_term);
    res.payload_sum = payload_sum;

    // S = T1 / makespan, bounded by n_procs up to rounding.
    long double s_exact = static_cast<long double>(serial_equiv) / makespan;
    double s = std::min(static_cast<double>(s_exact), static_cast<double>(config.n_procs));
    res.speedup = std::max(1.0, s);
    if (config.n_procs >= 2) {
        double one_minus_alpha =
            amdahl::serial_from_speedup(res.speedup, static_cast<double>(config.n_procs));
        res.alpha_eff = 1.0 - one_minus_alpha;
    }
    res.payload_stddev = population_stddev(config.payloads);
    res.per_proc_busy.reserve(config.n_procs);
    for (std::size_t i = 0; i < config.n_procs; ++i)
        res.per_proc_busy.push_back(static_cast<double>(config.payloads[i]) /
                                    static_cast<double>(makespan));
    return res;
}

SimResult simulate(const TimelineConfig& config) {
    return simulate_with_sequence(config, dispatch_sequence(config));
}

namespace {

// Exact serial fraction of the schedule: (k*M - T1) / ((k-1) * T1),
// the speedup relation S = T1/M inverted on the integer cycle counts.
long double schedule_serial_fraction(std::size_t n, Cycles makespan, Cycles serial_equiv) {
    __int128 km = static_cast<__int128>(n) * makespan;
    __int128 num = km - serial_equiv;
    long double den =
        static_cast<long double>(n - 1) * static_cast<long double>(serial_equiv);
    return static_cast<long double>(num) / den;
}

} // namespace

AnalyticComparison compare_with_analytic(const TimelineConfig& config) {
    contrib::MachineParams params;
    params.signal_cycles_roundtrip.reset();
    // Clock budget = the serial-equivalent work of this config.
    Cycles serial = checked_add(checked_add(config.sw_pre, config.sw_post),
                                checked_add(config.os_pre, config.os_post));
    Cycles total = serial;
    for (Cycles p : config.payloads)
        total = checked_add(total, p);
    params.total_clocks = static_cast<double>(total);
    return compare_with_analytic(config, params);
}

AnalyticComparison compare_with_analytic(const TimelineConfig& config,
                                         const contrib::MachineParams& params) {
    config.validate();
    if (config.n_procs < 2)
        throw std::invalid_argument("analytic comparison needs n_procs >= 2");
    for (std::size_t i = 1; i < config.n_procs; ++i) {
        if (config.payloads[i] != config.payloads[0] || config.pd_out[i] != config.pd_out[0] ||
            config.pd_back[i] != config.pd_back[0])
            throw std::invalid_argument(
                "analytic comparison requires uniform payloads and propagation delays");
    }

    SimResult sim = simulate(config);
    Cycles serial_phases = checked_add(checked_add(config.sw_pre, config.sw_post),
                                       checked_add(config.os_pre, config.os_post));
    Cycles serial_equiv = checked_add(serial_phases, sim.payload_sum);
    long double omega_sim =
        schedule_serial_fraction(config.n_procs, sim.makespan, serial_equiv);

    double t = params.total_clocks;
    contrib::ContributionSet parts;
    parts.sw = static_cast<double>(config.sw_pre + config.sw_post) / t;
    parts.os_context = static_cast<double>(config.os_pre + config.os_post) / t;
    parts.addressing =
        static_cast<double>(config.n_procs) * static_cast<double>(config.dispatch_cost) / t;
    parts.propagation = static_cast<double>(config.pd_out[0] + config.pd_back[0]) / t;
    double omega_model = contrib::total_non_parallelizable(parts);

    AnalyticComparison cmp;
    cmp.alpha_sim = static_cast<double>(1.0L - omega_sim);
    cmp.alpha_model = 1.0 - omega_model;
    cmp.relative_gap = std::abs(cmp.alpha_sim - cmp.alpha_model) / std::abs(cmp.alpha_model);
    return cmp;
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Cycles parse_cycles(const std::string& text, const std::string& key) {
    try {
        std::size_t pos = 0;
        // Accept scientific notation (2e9) for convenience; must be integral.
        double v = std::stod(text, &pos);
        if (pos != text.size())
            throw std::invalid_argument("trailing characters");
        if (v < 0 || v > 9.2e18 || v != std::floor(v))
            throw std::invalid_argument("not a non-negative integer cycle count");
        return static_cast<Cycles>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("scenario key '" + key + "': bad cycle value '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream iss(text);
    while (std::getline(iss, item, sep))
        out.push_back(item);
    if (!text.empty() && text.back() == sep)
        out.push_back("");
    return out;
}

// List field: explicit comma list, a single broadcast value, or a generator
// (const:V | uniform:LO:HI | linspace:LO:HI). uniform draws from a seeded
// mt19937_64, which the standard pins down bit-exactly.
std::vector<Cycles> expand_list(const std::string& key, const std::string& value,
                                std::size_t n, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("scenario: n_procs must be set before list fields");
    std::vector<Cycles> out;
    auto parts = split(value, ':');
    if (parts.size() >= 2 && (parts[0] == "const" || parts[0] == "uniform" ||
                              parts[0] == "linspace" || parts[0] == "list")) {
        const std::string& kind = parts[0];
        if (kind == "const") {
            Cycles v = parse_cycles(trim(parts[1]), key);
            out.assign(n, v);
        } else if (kind == "list") {
            for (const auto& item : split(parts[1], ','))
                out.push_back(parse_cycles(trim(item), key));
        } else if (kind == "uniform") {
            if (parts.size() != 3)
                throw std::invalid_argument("scenario key '" + key + "': uniform needs LO:HI");
            Cycles lo = parse_cycles(trim(parts[1]), key);
            Cycles hi = parse_cycles(trim(parts[2]), key);
            if (hi < lo)
                throw std::invalid_argument("scenario key '" + key + "': uniform range inverted");
            std::mt19937_64 rng(seed);
            auto span = static_cast<std::uint64_t>(hi - lo) + 1;
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(lo + static_cast<Cycles>(rng() % span));
        } else { // linspace
            if (parts.size() != 3)
                throw std::invalid_argument("scenario key '" + key + "': linspace needs LO:HI");
            Cycles lo = parse_cycles(trim(parts[1]), key);
            Cycles hi = parse_cycles(trim(parts[2]), key);
            for (std::size_t i = 0; i < n; ++i) {
                double f = n == 1 ? 0.0
                                  : static_cast<double>(i) / static_cast<double>(n - 1);
                out.push_back(lo + static_cast<Cycles>(
                                       std::llround(f * static_cast<double>(hi - lo))));
            }
        }
    } else {
        auto items = split(value, ',');
        if (items.size() == 1) {
            out.assign(n, parse_cycles(trim(items[0]), key)); // broadcast
        } else {
            for (const auto& item : items)
                out.push_back(parse_cycles(trim(item), key));
        }
    }
    if (out.size() != n)
        throw std::invalid_argument("scenario key '" + key + "': expected " + std::to_string(n) +
                                    " entries, got " + std::to_string(out.size()));
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw std::invalid_argument("scenario key '" + key + "': bad boolean '" + value + "'");
}

} // namespace

TimelineConfig load_scenario(std::istream& in) {
    TimelineConfig config;
    // Collect keys first: list expansion needs n_procs and seed.
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": expected key=value");
        entries.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }

    for (const auto& [key, value] : entries) {
        if (key == "n_procs") {
            Cycles v = parse_cycles(value, key);
            if (v < 1)
                throw std::invalid_argument("n_procs must be >= 1");
            config.n_procs = static_cast<std::size_t>(v);
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_cycles(value, key));
        }
    }

    std::uint64_t stream = 0; // distinct derived seed per list field
    for (const auto& [key, value] : entries) {
        if (key == "n_procs" || key == "seed") {
            continue;
        } else if (key == "sw_pre") {
            config.sw_pre = parse_cycles(value, key);
        } else if (key == "sw_post") {
            config.sw_post = parse_cycles(value, key);
        } else if (key == "os_pre") {
            config.os_pre = parse_cycles(value, key);
        } else if (key == "os_post") {
            config.os_post = parse_cycles(value, key);
        } else if (key == "dispatch_cost") {
            config.dispatch_cost = parse_cycles(value, key);
        } else if (key == "access_init") {
            config.access_init = parse_cycles(value, key);
        } else if (key == "access_term") {
            config.access_term = parse_cycles(value, key);
        } else if (key == "join_cost") {
            config.join_cost = parse_cycles(value, key);
        } else if (key == "pd_out") {
            config.pd_out = expand_list(key, value, config.n_procs, config.seed + stream++);
        } else if (key == "pd_back") {
            config.pd_back = expand_list(key, value, config.n_procs, config.seed + stream++);
        } else if (key == "payloads") {
            config.payloads = expand_list(key, value, config.n_procs, config.seed + stream++);
        } else if (key == "dispatch_order") {
            config.order = parse_dispatch_order(value);
        } else if (key == "initiator_works") {
            config.initiator_works = parse_bool(value, key);
        } else {
            throw std::invalid_argument("scenario: unknown key '" + key + "'");
        }
    }

    if (config.pd_out.empty())
        config.pd_out.assign(config.n_procs, 0);
    if (config.pd_back.empty())
        config.pd_back.assign(config.n_procs, 0);
    config.validate();
    return config;
}

TimelineConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open scenario file: " + path);
    return load_scenario(in);
}

void write_result(std::ostream& out, const SimResult& result) {
    char buf[64];
    out << "makespan = " << result.makespan << "\n";
    out << "extended_makespan = " << result.extended_makespan << "\n";
    out << "payload_sum = " << result.payload_sum << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", result.speedup);
    out << "speedup = " << buf << "\n";
    if (result.alpha_eff) {
        std::snprintf(buf, sizeof buf, "%.17g", *result.alpha_eff);
        out << "alpha_eff = " << buf << "\n";
    } else {
        out << "alpha_eff = undefined\n";
    }
    std::snprintf(buf, sizeof buf, "%.17g", result.payload_stddev);
    out << "payload_stddev = " << buf << "\n";
    out << "per_proc_busy = ";
    for (std::size_t i = 0; i < result.per_proc_busy.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9e", result.per_proc_busy[i]);
        out << (i ? "," : "") << buf;
    }
    out << "\n";
}

} // namespace parascale::timeline
