#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Parsing of TOP500/HPCG-style measurement tables and per-machine derivation
// of efficiency, serial fraction and performance gain.
//
// Input is delimiter-separated text (comma default, tab accepted) with a
// header naming at least: name, year, rank, benchmark, rmax, rpeak, cores.
// Performance values are normalized to flop/s internally; the input unit is
// Tflop/s unless a per-file "# units: X" directive or a units column says
// otherwise. Lines starting with '#' are comments.

namespace parascale::ingest {

struct MachineRecord {
    std::string name;
    int year = 0;
    int rank = 0;
    std::string benchmark; // HPL | HPCG | other
    double rpeak = 0.0;    // flop/s
    double rmax = 0.0;     // flop/s
    double cores = 0.0;
    std::optional<double> nodes;
    std::optional<double> clock_ghz;
    // Single-processor performance normalization multiplier for cross-machine
    // comparison; applied to rmax when emitting corrected scatter points.
    std::optional<double> perf_norm;
};

struct RowError {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<MachineRecord> records;
    std::vector<RowError> errors;
};

struct ParseOptions {
    std::optional<char> delimiter;  // auto-detect from header when unset
    double unit_flops = 1e12;       // Tflop/s default
};

struct DerivedMetrics {
    double efficiency = 0.0;
    double one_minus_alpha = 0.0;
    double gain = 0.0; // amdahl::kUnboundedGain when efficiency == 1
};

// flop/s multiplier for a unit token (Gflop/s, Tflop/s, Pflop/s, Eflop/s).
// Throws std::invalid_argument on unknown units.
double unit_multiplier(const std::string& unit);

// Malformed rows land in `errors` with line number and reason; a missing
// mandatory column or an unreadable stream throws std::runtime_error.
ParseResult parse_records(std::istream& in, const ParseOptions& options = {});
ParseResult parse_file(const std::string& path, const ParseOptions& options = {});

// Serial-fraction derivation from (rmax, rpeak, k). k defaults to cores; pass
// record.nodes for node-level analysis. Throws std::domain_error for k < 2
// and SubSerialEfficiencyError when e*k < 1.
DerivedMetrics derive(const MachineRecord& record);
DerivedMetrics derive(const MachineRecord& record, double k);

// Serializes records in the accepted input format (flop/s re-expressed in
// `unit`), optionally with the derived columns appended. Full-precision
// scientific notation; parse(write(r)) == r field for field.
void write_records(std::ostream& out, const std::vector<MachineRecord>& records,
                   const std::string& unit = "Tflop/s", bool with_derived = false,
                   const std::string& k_column = "cores");

} // namespace parascale::ingest
