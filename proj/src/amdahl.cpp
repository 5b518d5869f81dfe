#include "parascale/amdahl.hpp"

#include <cmath>
#include <string>

namespace parascale::amdahl {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("alpha must lie in [0,1], got " + std::to_string(alpha));
}

void check_serial(double one_minus_alpha) {
    if (!(one_minus_alpha >= 0.0 && one_minus_alpha <= 1.0))
        throw std::domain_error("serial fraction must lie in [0,1], got " +
                                std::to_string(one_minus_alpha));
}

void check_k_forward(double k) {
    if (!(k >= 1.0))
        throw std::domain_error("processor count must be >= 1, got " + std::to_string(k));
}

void check_k_inverse(double k) {
    if (k == 1.0)
        throw std::domain_error("k = 1 is singular: alpha cannot be inferred from one processor");
    if (!(k >= 2.0))
        throw std::domain_error("processor count must be >= 2 to invert, got " +
                                std::to_string(k));
}

} // namespace

double speedup(double alpha, double k) {
    // defined as k * E so that efficiency(a,k) * k == speedup(a,k) bit-exactly
    return k * efficiency(alpha, k);
}

double speedup_serial(double one_minus_alpha, double k) {
    return k * efficiency_serial(one_minus_alpha, k);
}

double efficiency(double alpha, double k) {
    check_alpha(alpha);
    check_k_forward(k);
    return 1.0 / (k * (1.0 - alpha) + alpha);
}

double efficiency_serial(double one_minus_alpha, double k) {
    check_serial(one_minus_alpha);
    check_k_forward(k);
    // k(1-a)+a rewritten as 1 + (k-1)(1-a): no cancellation for tiny fractions
    return 1.0 / (1.0 + (k - 1.0) * one_minus_alpha);
}

double inverse_efficiency_excess(double one_minus_alpha, double k) {
    check_serial(one_minus_alpha);
    check_k_forward(k);
    return (k - 1.0) * one_minus_alpha;
}

double alpha_from_speedup(double s, double k) {
    check_k_inverse(k);
    if (!(s >= 1.0))
        throw std::domain_error("speedup below 1 is outside the model, got " + std::to_string(s));
    if (s > k)
        throw std::domain_error("super-linear speedup (s > k) is outside the model: s = " +
                                std::to_string(s) + ", k = " + std::to_string(k));
    return (k / (k - 1.0)) * ((s - 1.0) / s);
}

double serial_from_speedup(double s, double k) {
    check_k_inverse(k);
    if (!(s >= 1.0))
        throw std::domain_error("speedup below 1 is outside the model, got " + std::to_string(s));
    if (s > k)
        throw std::domain_error("super-linear speedup (s > k) is outside the model: s = " +
                                std::to_string(s) + ", k = " + std::to_string(k));
    return (k - s) / ((k - 1.0) * s);
}

double alpha_from_efficiency(double e, double k) {
    check_k_inverse(k);
    if (!(e > 0.0 && e <= 1.0))
        throw std::domain_error("efficiency must lie in (0,1], got " + std::to_string(e));
    if (e * k < 1.0)
        throw SubSerialEfficiencyError("sub-serial efficiency: e*k = " + std::to_string(e * k) +
                                       " < 1 implies negative alpha");
    return (e * k - 1.0) / (e * (k - 1.0));
}

double serial_from_efficiency(double e, double k) {
    check_k_inverse(k);
    if (!(e > 0.0 && e <= 1.0))
        throw std::domain_error("efficiency must lie in (0,1], got " + std::to_string(e));
    if (e * k < 1.0)
        throw SubSerialEfficiencyError("sub-serial efficiency: e*k = " + std::to_string(e * k) +
                                       " < 1 implies negative alpha");
    return (1.0 - e) / (e * (k - 1.0));
}

double gain(double alpha) {
    check_alpha(alpha);
    if (alpha == 1.0)
        return kUnboundedGain;
    return 1.0 / (1.0 - alpha);
}

double gain_from_serial(double one_minus_alpha) {
    check_serial(one_minus_alpha);
    if (one_minus_alpha == 0.0)
        return kUnboundedGain;
    return 1.0 / one_minus_alpha;
}

EffectiveParallelization EffectiveParallelization::from_alpha(double alpha, double k) {
    check_alpha(alpha);
    check_k_forward(k);
    EffectiveParallelization ep;
    ep.alpha = alpha;
    ep.one_minus_alpha = 1.0 - alpha;
    ep.k = k;
    ep.speedup = amdahl::speedup(alpha, k);
    ep.efficiency = ep.speedup / k;
    ep.gain = amdahl::gain(alpha);
    return ep;
}

EffectiveParallelization EffectiveParallelization::from_serial_fraction(double one_minus_alpha,
                                                                        double k) {
    check_serial(one_minus_alpha);
    check_k_forward(k);
    EffectiveParallelization ep;
    ep.alpha = 1.0 - one_minus_alpha;
    ep.one_minus_alpha = one_minus_alpha;
    ep.k = k;
    ep.speedup = speedup_serial(one_minus_alpha, k);
    ep.efficiency = ep.speedup / k;
    ep.gain = gain_from_serial(one_minus_alpha);
    return ep;
}

EffectiveParallelization EffectiveParallelization::from_speedup(double s, double k) {
    EffectiveParallelization ep;
    ep.one_minus_alpha = serial_from_speedup(s, k);
    ep.alpha = alpha_from_speedup(s, k);
    ep.k = k;
    ep.speedup = s;
    ep.efficiency = s / k;
    ep.gain = gain_from_serial(ep.one_minus_alpha);
    return ep;
}

EffectiveParallelization EffectiveParallelization::from_efficiency(double e, double k) {
    EffectiveParallelization ep;
    ep.one_minus_alpha = serial_from_efficiency(e, k);
    ep.alpha = alpha_from_efficiency(e, k);
    ep.k = k;
    ep.efficiency = e;
    ep.speedup = e * k;
    ep.gain = gain_from_serial(ep.one_minus_alpha);
    return ep;
}

} // namespace parascale::amdahl
