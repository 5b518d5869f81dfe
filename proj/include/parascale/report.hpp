#pragma once

#include "parascale/contributions.hpp"
#include "parascale/ingest.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Figure-ready datasets: the parallelization hillside over (year, rank),
// the performance-gain timeline, and the RMax-vs-RPeak scatter with
// constant-serial-fraction band curves.
//
// Datasets are emitted as header + delimiter-separated columns, absent cells
// as empty fields, scientific notation with 9 significant digits. Output is
// byte-for-byte deterministic for a fixed input.

namespace parascale::report {

struct HillsideGrid {
    std::vector<int> years;                         // ascending
    std::vector<int> ranks;                         // ascending
    std::vector<std::optional<double>> values;      // year-major, one_minus_alpha
    std::vector<std::string> issues;                // duplicate (year, rank) reports

    std::optional<double>& at(std::size_t year_idx, std::size_t rank_idx) {
        return values[year_idx * ranks.size() + rank_idx];
    }
    const std::optional<double>& at(std::size_t year_idx, std::size_t rank_idx) const {
        return values[year_idx * ranks.size() + rank_idx];
    }
};

struct GainTimelinePoint {
    int year = 0;
    std::optional<double> gain_rank1, gain_rank2, gain_rank3; // top-3 by rmax
    double gain_best = 0.0;                                   // best by alpha
    std::string best_name;
};

struct GainTimeline {
    std::vector<GainTimelinePoint> points; // ascending year
    std::vector<std::string> notices;
};

struct ScatterPoint {
    std::string name;
    std::string benchmark;
    double rpeak = 0.0; // flop/s
    double rmax = 0.0;  // flop/s
    double cores = 0.0;
    double one_minus_alpha = 0.0;   // derived with the record's own k
    double nearest_level = 0.0;     // closest band level on a log scale
    std::optional<double> one_minus_alpha_nodes; // when a nodes column exists
};

struct BandCurve {
    double level = 0.0;
    std::vector<contrib::CurvePoint> points;
};

struct ScatterDataset {
    std::vector<ScatterPoint> points;
    std::vector<BandCurve> curves;
};

// HPL records only; duplicate (year, rank) pairs are reported in `issues`
// (first occurrence wins). Cells without a record stay absent.
HillsideGrid hillside(const std::vector<ingest::MachineRecord>& records);

// Groups by year: gains of the top-3 machines by rmax plus the machine with
// the smallest serial fraction. Years without derivable records are skipped
// with a notice.
GainTimeline gain_timeline(const std::vector<ingest::MachineRecord>& records);

// Measured points tagged by benchmark plus one constant-(1-alpha) curve per
// level, sampled log-spaced across the span of the measured rpeaks.
ScatterDataset scatter_with_bands(const std::vector<ingest::MachineRecord>& records,
                                  const std::vector<double>& alpha_levels,
                                  const contrib::MachineParams& params,
                                  int curve_samples = 64);

void write_hillside(std::ostream& out, const HillsideGrid& grid);
void write_gain_timeline(std::ostream& out, const GainTimeline& timeline);
void write_scatter(std::ostream& out, const ScatterDataset& dataset);

// Minimal gnuplot stub for a dataset written to `data_path`.
std::string plot_stub(const std::string& which, const std::string& data_path);

} // namespace parascale::report
