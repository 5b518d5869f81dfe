#include "parascale/amdahl.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace parascale;

namespace {

double rel_err(double got, double want) {
    if (want == 0.0)
        return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

} // namespace

TEST_CASE("speedup matches hand-evaluated cases") {
    CHECK(amdahl::speedup(1.0, 8.0) == 8.0);
    CHECK(amdahl::speedup(0.0, 64.0) == 1.0);
    // 10 / (10*0.1 + 0.9) = 10/1.9
    CHECK(rel_err(amdahl::speedup(0.9, 10.0), 5.263157894736842) < 1e-14);
    CHECK(amdahl::speedup(0.5, 1.0) == 1.0);
}

TEST_CASE("efficiency matches hand-evaluated cases") {
    CHECK(amdahl::efficiency(1.0, 1000.0) == 1.0);
    CHECK(rel_err(amdahl::efficiency(0.9, 10.0), 0.5263157894736842) < 1e-14);
    CHECK(rel_err(amdahl::efficiency(0.0, 10.0), 0.1) < 1e-15);
}

TEST_CASE("alpha_from_speedup matches hand-evaluated cases") {
    CHECK(amdahl::alpha_from_speedup(1.0, 16.0) == 0.0);
    CHECK(amdahl::alpha_from_speedup(16.0, 16.0) == 1.0);
    CHECK(rel_err(amdahl::alpha_from_speedup(5.2631578, 10.0), 0.9) < 1e-7);
    CHECK(rel_err(amdahl::alpha_from_speedup(amdahl::speedup(0.9, 10.0), 10.0), 0.9) < 1e-12);
}

TEST_CASE("alpha_from_efficiency matches hand-evaluated cases") {
    CHECK(amdahl::alpha_from_efficiency(1.0, 1024.0) == 1.0);
    // Taihulight HPL-level efficiency at 10.6M cores
    double s1 = amdahl::serial_from_efficiency(0.7417, 10'649'600.0);
    CHECK(rel_err(s1, 3.27e-8) < 1e-3);
    // Taihulight HPCG-level efficiency
    double s2 = amdahl::serial_from_efficiency(0.00383, 10'649'600.0);
    CHECK(rel_err(s2, 2.44e-5) < 1e-2);
    CHECK(amdahl::serial_from_efficiency(1.0, 64.0) == 0.0);
}

TEST_CASE("gain matches hand-evaluated cases") {
    CHECK(amdahl::gain(0.0) == 1.0);
    CHECK(rel_err(amdahl::gain_from_serial(1e-7), 1e7) < 1e-15);
    // 1/5.9e-5, the poor-parallelization cloud machine
    CHECK(rel_err(amdahl::gain_from_serial(5.9e-5), 16949.152542372881) < 1e-14);
    CHECK(amdahl::gain(1.0) == amdahl::kUnboundedGain);
    CHECK(amdahl::gain_from_serial(0.0) == amdahl::kUnboundedGain);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(amdahl::speedup(-0.1, 4.0), std::domain_error);
    CHECK_THROWS_AS(amdahl::speedup(1.1, 4.0), std::domain_error);
    CHECK_THROWS_AS(amdahl::speedup(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(amdahl::efficiency(2.0, 4.0), std::domain_error);
    // k = 1 is singular for the inverses
    CHECK_THROWS_AS(amdahl::alpha_from_speedup(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(amdahl::alpha_from_efficiency(1.0, 1.0), std::domain_error);
    // super-linear speedup rejected, not clamped
    CHECK_THROWS_AS(amdahl::alpha_from_speedup(16.5, 16.0), std::domain_error);
    CHECK_THROWS_AS(amdahl::alpha_from_speedup(0.5, 16.0), std::domain_error);
    // sub-serial efficiency: e*k < 1
    CHECK_THROWS_AS(amdahl::alpha_from_efficiency(0.05, 10.0), amdahl::SubSerialEfficiencyError);
    CHECK_THROWS_AS(amdahl::serial_from_efficiency(0.05, 10.0),
                    amdahl::SubSerialEfficiencyError);
}

TEST_CASE("identity: efficiency * k equals speedup bit-exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double alpha = ua(rng);
        double k = std::floor(std::pow(10.0, 8.0 * ua(rng)));
        if (k < 1.0)
            k = 1.0;
        CHECK(amdahl::efficiency(alpha, k) * k == amdahl::speedup(alpha, k));
    }
}

TEST_CASE("round trips hold to 1e-10 relative") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        // half the draws probe alpha near 0, half probe alpha near 1
        double alpha, serial;
        if (i % 2 == 0) {
            alpha = std::pow(10.0, -3.0 * u(rng)); // [1e-3, 1]
            serial = 1.0 - alpha;
        } else {
            serial = std::pow(10.0, -13.0 + 12.0 * u(rng)); // [1e-13, 1e-1]
            alpha = 1.0 - serial;
        }
        double k = std::floor(std::pow(10.0, std::log10(2.0) +
                                                 (8.0 - std::log10(2.0)) * u(rng)));

        double s = amdahl::speedup(alpha, k);
        CHECK(rel_err(amdahl::alpha_from_speedup(s, k), alpha) < 1e-10);

        double e = amdahl::efficiency(alpha, k);
        CHECK(rel_err(amdahl::alpha_from_efficiency(e, k), alpha) < 1e-10);

        double s2 = amdahl::speedup_serial(serial, k);
        CHECK(rel_err(1.0 - amdahl::serial_from_speedup(s2, k), alpha) < 1e-10);
        double e2 = amdahl::efficiency_serial(serial, k);
        CHECK(rel_err(1.0 - amdahl::serial_from_efficiency(e2, k), alpha) < 1e-10);

        // The complement survives the trip through S or E only while
        // (k-1)*serial is well above machine epsilon; there the round trip is
        // tight on the small quantity too.
        if ((k - 1.0) * serial >= 1e-5) {
            CHECK(rel_err(amdahl::serial_from_speedup(s2, k), serial) < 1e-10);
            CHECK(rel_err(amdahl::serial_from_efficiency(e2, k), serial) < 1e-10);
        }
    }
}

TEST_CASE("1/E is linear in k with slope (1-alpha)") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        double serial = std::pow(10.0, -13.0 + 12.9 * u(rng));
        double k1 = std::floor(std::pow(10.0, std::log10(2.0) + 7.0 * u(rng)));
        double k2 = 2.0 * k1;
        double slope = (amdahl::inverse_efficiency_excess(serial, k2) -
                        amdahl::inverse_efficiency_excess(serial, k1)) /
                       (k2 - k1);
        CHECK(rel_err(slope, serial) < 1e-12);
    }
}

TEST_CASE("monotonicity in k at fixed alpha") {
    const double alpha = 0.999;
    double prev_e = 2.0, prev_s = 0.0;
    double bound = amdahl::gain(alpha);
    for (double k : {2.0, 4.0, 16.0, 256.0, 65536.0, 1e7}) {
        double e = amdahl::efficiency(alpha, k);
        double s = amdahl::speedup(alpha, k);
        CHECK(e < prev_e);
        CHECK(s > prev_s);
        CHECK(s <= bound);
        prev_e = e;
        prev_s = s;
    }
}

TEST_CASE("speedup approaches the gain bound for large k") {
    for (double serial = 1e-6; serial <= 0.1; serial *= 10.0) {
        double s = amdahl::speedup_serial(serial, 1e9);
        double g = amdahl::gain_from_serial(serial);
        CHECK(rel_err(s, g) < 0.002);
    }
}

TEST_CASE("EffectiveParallelization constructors agree") {
    auto ep = amdahl::EffectiveParallelization::from_alpha(0.9, 10.0);
    CHECK(ep.efficiency == ep.speedup / ep.k);
    CHECK(rel_err(ep.gain, 10.0) < 1e-14);
    CHECK(!ep.gain_unbounded());

    auto ep1 = amdahl::EffectiveParallelization::from_alpha(1.0, 8.0);
    CHECK(ep1.gain_unbounded());
    CHECK(ep1.gain == amdahl::kUnboundedGain);

    auto ep2 = amdahl::EffectiveParallelization::from_speedup(ep.speedup, 10.0);
    CHECK(rel_err(ep2.alpha, 0.9) < 1e-12);

    auto ep3 = amdahl::EffectiveParallelization::from_efficiency(0.7417, 10'649'600.0);
    CHECK(rel_err(ep3.one_minus_alpha, 3.27e-8) < 1e-3);
    CHECK(rel_err(ep3.gain, 1.0 / ep3.one_minus_alpha) < 1e-14);

    // re-inverting the stored speedup reproduces alpha within 1e-12 relative
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.001, 1.0);
    for (int i = 0; i < 200; ++i) {
        double alpha = u(rng);
        double k = std::floor(2.0 + 1e6 * u(rng));
        auto e = amdahl::EffectiveParallelization::from_alpha(alpha, k);
        CHECK(rel_err(amdahl::alpha_from_speedup(e.speedup, e.k), e.alpha) < 1e-12);
    }
}
