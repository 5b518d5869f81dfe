#include "parascale/ingest.hpp"

#include "parascale/amdahl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace parascale::ingest {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
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

double parse_double(const std::string& text, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": not a number: '" + text + "'");
    }
    if (pos != text.size() || std::isnan(v))
        throw std::invalid_argument(std::string(what) + ": not a number: '" + text + "'");
    return v;
}

int parse_int(const std::string& text, const char* what) {
    double v = parse_double(text, what);
    if (v != std::floor(v))
        throw std::invalid_argument(std::string(what) + ": not an integer: '" + text + "'");
    return static_cast<int>(v);
}

// 17 significant digits: enough for an exact double round trip.
std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace

double unit_multiplier(const std::string& unit) {
    std::string u = lower(trim(unit));
    // strip a "flop/s" / "flops" / "flop" tail
    for (const char* tail : {"flop/s", "flops", "flop"}) {
        auto len = std::string(tail).size();
        if (u.size() >= len && u.compare(u.size() - len, len, tail) == 0) {
            u = u.substr(0, u.size() - len);
            break;
        }
    }
    if (u == "" || u == "1")
        return 1.0;
    if (u == "g")
        return 1e9;
    if (u == "t")
        return 1e12;
    if (u == "p")
        return 1e15;
    if (u == "e")
        return 1e18;
    throw std::invalid_argument("unknown performance unit: '" + unit + "'");
}

ParseResult parse_records(std::istream& in, const ParseOptions& options) {
    if (!in)
        throw std::runtime_error("unreadable input stream");

    ParseResult result;
    std::string line;
    std::size_t lineno = 0;
    double file_unit = options.unit_flops;
    char delim = options.delimiter.value_or(',');
    bool have_header = false;
    std::map<std::string, std::size_t> columns;
    std::size_t ncols = 0;

    auto column = [&](const char* name) -> std::optional<std::size_t> {
        auto it = columns.find(name);
        if (it == columns.end())
            return std::nullopt;
        return it->second;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string text = trim(line);
        if (text.empty())
            continue;
        if (text[0] == '#') {
            // "# units: Pflop/s" (or units=...) sets the file unit from here on
            std::string body = lower(trim(text.substr(1)));
            if (body.rfind("units", 0) == 0) {
                auto sep = body.find_first_of(":=");
                if (sep != std::string::npos)
                    file_unit = unit_multiplier(trim(body.substr(sep + 1)));
            }
            continue;
        }
        if (!have_header) {
            if (!options.delimiter && text.find('\t') != std::string::npos)
                delim = '\t';
            auto names = split(text, delim);
            for (std::size_t i = 0; i < names.size(); ++i)
                columns[lower(trim(names[i]))] = i;
            ncols = names.size();
            for (const char* required :
                 {"name", "year", "rank", "benchmark", "rmax", "rpeak", "cores"}) {
                if (!column(required))
                    throw std::runtime_error("missing mandatory column: " +
                                             std::string(required));
            }
            have_header = true;
            continue;
        }

        auto fields = split(text, delim);
        if (fields.size() != ncols) {
            result.errors.push_back({lineno, "expected " + std::to_string(ncols) +
                                                 " fields, got " +
                                                 std::to_string(fields.size())});
            continue;
        }
        for (auto& f : fields)
            f = trim(f);

        try {
            MachineRecord rec;
            rec.name = fields[*column("name")];
            rec.year = parse_int(fields[*column("year")], "year");
            rec.rank = parse_int(fields[*column("rank")], "rank");
            rec.benchmark = fields[*column("benchmark")];
            double unit = file_unit;
            if (auto c = column("units"); c && !fields[*c].empty())
                unit = unit_multiplier(fields[*c]);
            rec.rmax = parse_double(fields[*column("rmax")], "rmax") * unit;
            rec.rpeak = parse_double(fields[*column("rpeak")], "rpeak") * unit;
            rec.cores = parse_double(fields[*column("cores")], "cores");
            if (auto c = column("nodes"); c && !fields[*c].empty())
                rec.nodes = parse_double(fields[*c], "nodes");
            if (auto c = column("clock_ghz"); c && !fields[*c].empty())
                rec.clock_ghz = parse_double(fields[*c], "clock_ghz");
            if (auto c = column("perf_norm"); c && !fields[*c].empty())
                rec.perf_norm = parse_double(fields[*c], "perf_norm");

            if (rec.rank < 1)
                throw std::invalid_argument("rank must be >= 1");
            if (!(rec.rpeak > 0.0) || !(rec.rmax > 0.0))
                throw std::invalid_argument("rmax and rpeak must be positive");
            if (rec.rmax > rec.rpeak)
                throw std::invalid_argument("payload exceeds nominal (rmax > rpeak)");
            if (!(rec.cores >= 1.0) || rec.cores != std::floor(rec.cores))
                throw std::invalid_argument("cores must be a positive integer");
            if (rec.nodes && (!(*rec.nodes >= 1.0) || *rec.nodes != std::floor(*rec.nodes)))
                throw std::invalid_argument("nodes must be a positive integer");
            if (rec.perf_norm && !(*rec.perf_norm > 0.0))
                throw std::invalid_argument("perf_norm must be positive");

            result.records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            result.errors.push_back({lineno, e.what()});
        }
    }
    if (!have_header)
        throw std::runtime_error("input has no header line");
    return result;
}

ParseResult parse_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open input file: " + path);
    return parse_records(in, options);
}

DerivedMetrics derive(const MachineRecord& record) { return derive(record, record.cores); }

DerivedMetrics derive(const MachineRecord& record, double k) {
    if (!(k >= 2.0))
        throw std::domain_error("record '" + record.name +
                                "': k < 2, effective parallelization undefined");
    DerivedMetrics m;
    m.efficiency = record.rmax / record.rpeak;
    m.one_minus_alpha = amdahl::serial_from_efficiency(m.efficiency, k);
    m.gain = amdahl::gain_from_serial(m.one_minus_alpha);
    return m;
}

void write_records(std::ostream& out, const std::vector<MachineRecord>& records,
                   const std::string& unit, bool with_derived, const std::string& k_column) {
    double mult = unit_multiplier(unit);
    bool any_nodes = std::any_of(records.begin(), records.end(),
                                 [](const MachineRecord& r) { return r.nodes.has_value(); });
    bool any_clock = std::any_of(records.begin(), records.end(),
                                 [](const MachineRecord& r) { return r.clock_ghz.has_value(); });
    bool any_norm = std::any_of(records.begin(), records.end(),
                                [](const MachineRecord& r) { return r.perf_norm.has_value(); });

    out << "# units: " << unit << "\n";
    out << "name,year,rank,benchmark,rmax,rpeak,cores";
    if (any_nodes)
        out << ",nodes";
    if (any_clock)
        out << ",clock_ghz";
    if (any_norm)
        out << ",perf_norm";
    if (with_derived)
        out << ",efficiency,one_minus_alpha,gain";
    out << "\n";

    for (const auto& rec : records) {
        out << rec.name << ',' << rec.year << ',' << rec.rank << ',' << rec.benchmark << ','
            << format_full(rec.rmax / mult) << ',' << format_full(rec.rpeak / mult) << ','
            << format_full(rec.cores);
        if (any_nodes)
            out << ',' << (rec.nodes ? format_full(*rec.nodes) : "");
        if (any_clock)
            out << ',' << (rec.clock_ghz ? format_full(*rec.clock_ghz) : "");
        if (any_norm)
            out << ',' << (rec.perf_norm ? format_full(*rec.perf_norm) : "");
        if (with_derived) {
            double k = rec.cores;
            if (k_column == "nodes")
                k = rec.nodes.value_or(rec.cores);
            DerivedMetrics m = derive(rec, k);
            out << ',' << format_full(m.efficiency) << ',' << format_full(m.one_minus_alpha)
                << ',' << format_full(m.gain);
        }
        out << "\n";
    }
}

} // namespace parascale::ingest
