#pragma once

#include <limits>
#include <stdexcept>

// Core algebra of the strong-scaling (Amdahl) model: speedup, efficiency,
// effective parallelization and performance gain, with exact inverses.
//
// The serial fraction (1-alpha) spans ~1e-13..1e-1 in practice, so every
// operation exists in two forms: one parameterized by alpha and one by the
// serial fraction itself ("_serial" suffix). The serial form never computes
// 1-alpha by subtraction and is the one to use near alpha = 1.

namespace parascale::amdahl {

// Sentinel returned by gain() when alpha == 1 (no serial fraction at all).
inline constexpr double kUnboundedGain = std::numeric_limits<double>::infinity();

// Measurement inconsistent with the model: efficiency below 1/k would imply
// a negative parallelizable fraction.
class SubSerialEfficiencyError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// S = k / (k(1-alpha) + alpha).  Result in [1, k].
double speedup(double alpha, double k);
double speedup_serial(double one_minus_alpha, double k);

// E = S/k = 1 / (k(1-alpha) + alpha).  Result in (0, 1].
double efficiency(double alpha, double k);
double efficiency_serial(double one_minus_alpha, double k);

// 1/E - 1 = (k-1)(1-alpha).  Exact product form; the slope of 1/E in k is
// recoverable from two evaluations without cancellation.
double inverse_efficiency_excess(double one_minus_alpha, double k);

// alpha = (k/(k-1)) (S-1)/S.  Requires k >= 2 and 1 <= s <= k.
double alpha_from_speedup(double s, double k);
// (1-alpha) = (k-s) / ((k-1) s).
double serial_from_speedup(double s, double k);

// alpha = (ek - 1) / (e(k-1)).  Requires k >= 2 and 1/k <= e <= 1.
double alpha_from_efficiency(double e, double k);
// (1-alpha) = (1-e) / (e(k-1)).  Numerically stable form for e near 1.
double serial_from_efficiency(double e, double k);

// G = 1/(1-alpha), the k->infinity speedup ceiling.  kUnboundedGain at alpha=1.
double gain(double alpha);
double gain_from_serial(double one_minus_alpha);

// One consistent (alpha, k, S, E, G) tuple.  Constructors derive the
// remaining quantities from whichever pair was measured.
struct EffectiveParallelization {
    double alpha = 0.0;
    double one_minus_alpha = 1.0; // carried separately; do not recompute as 1-alpha
    double k = 1.0;
    double speedup = 1.0;
    double efficiency = 1.0;
    double gain = 1.0; // kUnboundedGain when alpha == 1

    bool gain_unbounded() const { return alpha == 1.0; }

    static EffectiveParallelization from_alpha(double alpha, double k);
    static EffectiveParallelization from_serial_fraction(double one_minus_alpha, double k);
    static EffectiveParallelization from_speedup(double s, double k);
    static EffectiveParallelization from_efficiency(double e, double k);
};

} // namespace parascale::amdahl
