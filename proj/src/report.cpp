#include "parascale/report.hpp"

#include "parascale/amdahl.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace parascale::report {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

bool is_hpl(const std::string& benchmark) {
    std::string b;
    for (char c : benchmark)
        b += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return b == "hpl";
}

double nearest_level(const std::vector<double>& levels, double value) {
    double best = levels.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (double level : levels) {
        double d = std::abs(std::log10(level) - std::log10(value));
        if (d < best_d) {
            best_d = d;
            best = level;
        }
    }
    return best;
}

} // namespace

HillsideGrid hillside(const std::vector<ingest::MachineRecord>& records) {
    HillsideGrid grid;
    std::set<int> years, ranks;
    std::map<std::pair<int, int>, double> cells;

    for (const auto& rec : records) {
        if (!is_hpl(rec.benchmark))
            continue;
        if (rec.cores < 2.0) {
            grid.issues.push_back("skipped " + rec.name + " (" + std::to_string(rec.year) +
                                  "): cores < 2");
            continue;
        }
        auto key = std::make_pair(rec.year, rec.rank);
        double value = ingest::derive(rec).one_minus_alpha;
        if (auto [it, inserted] = cells.emplace(key, value); !inserted) {
            grid.issues.push_back("duplicate (year, rank) = (" + std::to_string(rec.year) + ", " +
                                  std::to_string(rec.rank) + "): " + rec.name + " ignored");
            continue;
        }
        years.insert(rec.year);
        ranks.insert(rec.rank);
    }

    grid.years.assign(years.begin(), years.end());
    grid.ranks.assign(ranks.begin(), ranks.end());
    grid.values.assign(grid.years.size() * grid.ranks.size(), std::nullopt);
    for (std::size_t yi = 0; yi < grid.years.size(); ++yi) {
        for (std::size_t ri = 0; ri < grid.ranks.size(); ++ri) {
            auto it = cells.find({grid.years[yi], grid.ranks[ri]});
            if (it != cells.end())
                grid.at(yi, ri) = it->second;
        }
    }
    return grid;
}

GainTimeline gain_timeline(const std::vector<ingest::MachineRecord>& records) {
    GainTimeline timeline;
    struct Entry {
        const ingest::MachineRecord* rec;
        double one_minus_alpha;
        double gain;
    };
    std::map<int, std::vector<Entry>> by_year;
    std::set<int> seen_years;

    for (const auto& rec : records) {
        seen_years.insert(rec.year);
        if (rec.cores < 2.0)
            continue;
        ingest::DerivedMetrics m = ingest::derive(rec);
        by_year[rec.year].push_back({&rec, m.one_minus_alpha, m.gain});
    }

    for (int year : seen_years) {
        auto it = by_year.find(year);
        if (it == by_year.end() || it->second.empty()) {
            timeline.notices.push_back("year " + std::to_string(year) +
                                       " skipped: no derivable records");
            continue;
        }
        auto& entries = it->second;
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.rec->rmax != b.rec->rmax)
                return a.rec->rmax > b.rec->rmax;
            return a.rec->rank < b.rec->rank;
        });
        GainTimelinePoint pt;
        pt.year = year;
        if (entries.size() > 0)
            pt.gain_rank1 = entries[0].gain;
        if (entries.size() > 1)
            pt.gain_rank2 = entries[1].gain;
        if (entries.size() > 2)
            pt.gain_rank3 = entries[2].gain;
        const Entry* best = &entries[0];
        for (const auto& e : entries) {
            if (e.one_minus_alpha < best->one_minus_alpha)
                best = &e;
        }
        pt.gain_best = best->gain;
        pt.best_name = best->rec->name;
        timeline.points.push_back(std::move(pt));
    }
    return timeline;
}

ScatterDataset scatter_with_bands(const std::vector<ingest::MachineRecord>& records,
                                  const std::vector<double>& alpha_levels,
                                  const contrib::MachineParams& params, int curve_samples) {
    params.validate();
    for (double level : alpha_levels) {
        if (!(level > 0.0 && level < 1.0))
            throw std::domain_error("band levels must lie in (0,1)");
    }
    std::vector<double> levels = alpha_levels;
    std::sort(levels.begin(), levels.end());

    ScatterDataset ds;
    double rpeak_lo = 0.0, rpeak_hi = 0.0;
    for (const auto& rec : records) {
        if (rec.cores < 2.0)
            continue;
        ingest::DerivedMetrics m = ingest::derive(rec);
        ScatterPoint pt;
        pt.name = rec.name;
        pt.benchmark = rec.benchmark;
        pt.rpeak = rec.rpeak;
        pt.rmax = rec.rmax;
        pt.cores = rec.cores;
        pt.one_minus_alpha = m.one_minus_alpha;
        if (rec.nodes && *rec.nodes >= 2.0)
            pt.one_minus_alpha_nodes = ingest::derive(rec, *rec.nodes).one_minus_alpha;
        if (!levels.empty())
            pt.nearest_level = nearest_level(levels, m.one_minus_alpha);
        if (rpeak_lo == 0.0 || rec.rpeak < rpeak_lo)
            rpeak_lo = rec.rpeak;
        rpeak_hi = std::max(rpeak_hi, rec.rpeak);
        ds.points.push_back(pt);

        // single-processor performance correction: an extra point with the
        // payload rescaled by the per-record multiplier
        if (rec.perf_norm) {
            ingest::MachineRecord corrected = rec;
            corrected.rmax = rec.rmax * *rec.perf_norm;
            if (corrected.rmax <= corrected.rpeak) {
                try {
                    ScatterPoint cpt = pt;
                    cpt.name = rec.name + " (corrected)";
                    cpt.rmax = corrected.rmax;
                    cpt.one_minus_alpha = ingest::derive(corrected).one_minus_alpha;
                    cpt.one_minus_alpha_nodes.reset();
                    if (!levels.empty()) {
                        double best = levels.front();
                        double best_d = std::numeric_limits<double>::infinity();
                        for (double level : levels) {
                            double d = std::abs(std::log10(level) -
                                                std::log10(cpt.one_minus_alpha));
                            if (d < best_d) {
                                best_d = d;
                                best = level;
                            }
                        }
                        cpt.nearest_level = best;
                    }
                    ds.points.push_back(std::move(cpt));
                } catch (const std::exception&) {
                    // correction made the row underivable; keep the raw point only
                }
            }
        }
    }

    if (rpeak_lo > 0.0) {
        if (rpeak_lo == rpeak_hi) { // single measured rpeak: spread one decade each way
            rpeak_lo /= 10.0;
            rpeak_hi *= 10.0;
        }
        for (double level : levels) {
            BandCurve curve;
            curve.level = level;
            double log_lo = std::log10(rpeak_lo);
            double log_hi = std::log10(rpeak_hi);
            for (int i = 0; i < curve_samples; ++i) {
                double rpeak =
                    std::pow(10.0, log_lo + (log_hi - log_lo) * i / (curve_samples - 1));
                double n = std::max(1.0, rpeak / params.per_core_flops);
                contrib::CurvePoint cp;
                cp.n_procs = n;
                cp.rpeak = rpeak;
                cp.one_minus_alpha = level;
                cp.rmax = rpeak * amdahl::efficiency_serial(level, n);
                curve.points.push_back(cp);
            }
            ds.curves.push_back(std::move(curve));
        }
    }
    return ds;
}

void write_hillside(std::ostream& out, const HillsideGrid& grid) {
    out << "year";
    for (int rank : grid.ranks)
        out << ",r" << rank;
    out << "\n";
    for (std::size_t yi = 0; yi < grid.years.size(); ++yi) {
        out << grid.years[yi];
        for (std::size_t ri = 0; ri < grid.ranks.size(); ++ri) {
            out << ',';
            if (const auto& cell = grid.at(yi, ri))
                out << fmt9(*cell);
        }
        out << "\n";
    }
}

void write_gain_timeline(std::ostream& out, const GainTimeline& timeline) {
    out << "year,gain_rank1,gain_rank2,gain_rank3,gain_best,best_name\n";
    for (const auto& pt : timeline.points) {
        out << pt.year << ',';
        out << (pt.gain_rank1 ? fmt9(*pt.gain_rank1) : "") << ',';
        out << (pt.gain_rank2 ? fmt9(*pt.gain_rank2) : "") << ',';
        out << (pt.gain_rank3 ? fmt9(*pt.gain_rank3) : "") << ',';
        out << fmt9(pt.gain_best) << ',' << pt.best_name << "\n";
    }
}

void write_scatter(std::ostream& out, const ScatterDataset& dataset) {
    out << "kind,name,benchmark,level,rpeak,rmax,k,one_minus_alpha,nearest_level\n";
    for (const auto& pt : dataset.points) {
        out << "point," << pt.name << ',' << pt.benchmark << ",," << fmt9(pt.rpeak) << ','
            << fmt9(pt.rmax) << ',' << fmt9(pt.cores) << ',' << fmt9(pt.one_minus_alpha) << ','
            << fmt9(pt.nearest_level) << "\n";
    }
    for (const auto& curve : dataset.curves) {
        for (const auto& cp : curve.points) {
            out << "curve,,," << fmt9(curve.level) << ',' << fmt9(cp.rpeak) << ','
                << fmt9(cp.rmax) << ',' << fmt9(cp.n_procs) << ',' << fmt9(cp.one_minus_alpha)
                << ",\n";
        }
    }
}

std::string plot_stub(const std::string& which, const std::string& data_path) {
    std::string s;
    s += "# gnuplot stub for the '" + which + "' dataset\n";
    s += "set datafile separator ','\n";
    if (which == "scatter") {
        s += "set logscale xy\n";
        s += "plot '" + data_path + "' using 5:6 with points title 'measured', \\\n";
        s += "     '" + data_path + "' using 5:($1 eq 'curve' ? $6 : 1/0) with lines title 'bands'\n";
    } else if (which == "gain") {
        s += "set logscale y\n";
        s += "plot '" + data_path + "' using 1:2 with linespoints title 'rank 1', \\\n";
        s += "     '" + data_path + "' using 1:5 with linespoints title 'best'\n";
    } else {
        s += "set logscale z\n";
        s += "splot '" + data_path + "' matrix with lines\n";
    }
    return s;
}

} // namespace parascale::report
