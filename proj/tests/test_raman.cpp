#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "qklink/errors.hpp"
#include "qklink/raman.hpp"
#include "qklink/raman_profile.hpp"
#include "qklink/scenario.hpp"
#include "qklink/units.hpp"

using namespace qklink;

namespace {

const std::string bundled = std::string(QKLINK_DATA_DIR) + "/raman_profile_synthetic.csv";

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / (2 * panels);
    double sum = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("cross-section interpolation") {
    const RamanProfile profile = load_raman_profile(bundled);

    // Exact at sample points.
    const RamanSample& s = profile.samples[profile.samples.size() / 2];
    CHECK(cross_section_at(profile, s.wavelength_nm) == s.rho_per_km_per_nm);

    // Linear midpoint between neighbours.
    const RamanSample& a = profile.samples[10];
    const RamanSample& b = profile.samples[11];
    const double mid = 0.5 * (a.wavelength_nm + b.wavelength_nm);
    CHECK(cross_section_at(profile, mid) ==
          doctest::Approx(0.5 * (a.rho_per_km_per_nm + b.rho_per_km_per_nm)).epsilon(1e-12));

    // Outside the sampled span.
    CHECK_THROWS_AS(cross_section_at(profile, 1200.0), model_domain_error);
    CHECK_THROWS_AS(cross_section_at(profile, 1800.0), model_domain_error);
}

TEST_CASE("closed forms") {
    CHECK(raman_power_forward(2e-3, 10.0, 2e-9, 0.045) ==
          doctest::Approx(2e-3 * 10.0 * 2e-9 * 0.045).epsilon(1e-15));
    CHECK(raman_power_backward(1e-3, 10.0, 0.04835, 2e-9, 0.045) ==
          doctest::Approx(9.354779972538e-13).epsilon(1e-12));
    // alpha -> 0 limit equals the forward form.
    CHECK(raman_power_backward(1e-3, 10.0, 0.0, 2e-9, 0.045) ==
          doctest::Approx(raman_power_forward(1e-3, 10.0, 2e-9, 0.045)).epsilon(1e-9));
}

TEST_CASE("backscatter collects at least the co-propagating power") {
    // sinh(aL)/a >= L for a > 0, so backward >= forward at equal end powers.
    for (double alpha_db : {0.05, 0.21, 0.35, 1.0}) {
        for (double length : {0.5, 5.0, 25.0, 60.0}) {
            const double alpha = alpha_db_to_per_km(alpha_db);
            CHECK(raman_power_backward(1e-3, length, alpha, 2e-9, 0.045) >=
                  raman_power_forward(1e-3, length, 2e-9, 0.045));
        }
    }
}

TEST_CASE("closed forms match quadrature of the per-element scattering") {
    // Forward: light scattered at x arrives attenuated over the remaining
    // span; with P(x) = P_in e^(-a x) the collected power is
    //   integral of P_in e^(-a x) rho dl e^(-a (L-x)) dx = P_out L rho dl.
    // Backward: the scattered light returns over the same x,
    //   integral of P_in e^(-2 a x) rho dl dx = P_out sinh(a L)/a rho dl.
    const double alpha = alpha_db_to_per_km(0.21);
    const double rho = 2e-9;
    const double dl = 0.045;
    const double p_in = 1.5e-3;

    for (int i = 0; i < 50; ++i) {
        const double al = 1e-4 * std::pow(3.0 / 1e-4, i / 49.0);
        const double length = al / alpha;
        const double p_out = p_in * std::exp(-al);

        const double forward_quad = simpson(
            [&](double x) { return p_in * std::exp(-alpha * x) * rho * dl *
                                   std::exp(-alpha * (length - x)); },
            0.0, length, 2000);
        const double backward_quad = simpson(
            [&](double x) { return p_in * std::exp(-2.0 * alpha * x) * rho * dl; },
            0.0, length, 2000);

        CHECK(raman_power_forward(p_out, length, rho, dl) ==
              doctest::Approx(forward_quad).epsilon(1e-6));
        CHECK(raman_power_backward(p_out, length, alpha, rho, dl) ==
              doctest::Approx(backward_quad).epsilon(1e-6));
    }
}

TEST_CASE("count probability") {
    CHECK(count_probability(1e-12, 1550.0, 0.07, 1.5, 2.65) ==
          doctest::Approx(4.450863391630e-04).epsilon(1e-11));

    bool clamped = false;
    CHECK(count_probability(1.0, 1550.0, 0.07, 1.5, 2.65, &clamped) == 1.0);
    CHECK(clamped);
    count_probability(1e-12, 1550.0, 0.07, 1.5, 2.65, &clamped);
    CHECK_FALSE(clamped);
}

TEST_CASE("plan totals against the calibrated reference point") {
    const RamanProfile profile = load_raman_profile(bundled);
    const LinkConfig config = preset("paper-default", QKLINK_DATA_DIR);
    FibreSpec fibre = config.fibre;
    fibre.length_km = 25.0;

    const RamanResult nf = total_raman_probability(config.plan, fibre, config.detector,
                                                   config.protocol.bob_internal_loss_db, profile,
                                                   config.raman_scale, nullptr);
    CHECK(nf.prob_forward_per_gate == doctest::Approx(1.387695425856e-04).epsilon(1e-9));
    CHECK(nf.prob_backward_per_gate == doctest::Approx(1.231988845423e-04).epsilon(1e-9));
    CHECK_FALSE(nf.clamped);

    FilterSpec filter;
    const RamanResult wf = total_raman_probability(config.plan, fibre, config.detector,
                                                   config.protocol.bob_internal_loss_db, profile,
                                                   config.raman_scale, &filter);
    CHECK(wf.prob_forward_per_gate + wf.prob_backward_per_gate ==
          doctest::Approx(2.479363546774e-05).epsilon(1e-9));
    // The filter leaves (1 - rejection) * insertion of the noise.
    CHECK(wf.prob_forward_per_gate ==
          doctest::Approx(nf.prob_forward_per_gate * 0.15 * db_to_linear(-2.0)).epsilon(1e-12));
}

TEST_CASE("scale is linear and directions split") {
    const RamanProfile profile = load_raman_profile(bundled);
    const LinkConfig config = preset("paper-default", QKLINK_DATA_DIR);
    FibreSpec fibre = config.fibre;
    fibre.length_km = 10.0;

    const RamanResult base = total_raman_probability(config.plan, fibre, config.detector, 2.65,
                                                     profile, 1.0, nullptr);
    const RamanResult twice = total_raman_probability(config.plan, fibre, config.detector, 2.65,
                                                      profile, 2.0, nullptr);
    CHECK(twice.prob_forward_per_gate ==
          doctest::Approx(2.0 * base.prob_forward_per_gate).epsilon(1e-12));
    CHECK(twice.prob_backward_per_gate ==
          doctest::Approx(2.0 * base.prob_backward_per_gate).epsilon(1e-12));

    ChannelPlan alice_only = config.plan;
    alice_only.channels = {{400.0, Direction::toward_alice, -28.0, 0.0},
                           {500.0, Direction::toward_alice, -28.0, 0.0}};
    const RamanResult b = total_raman_probability(alice_only, fibre, config.detector, 2.65,
                                                  profile, 1.0, nullptr);
    CHECK(b.prob_forward_per_gate == 0.0);
    CHECK(b.prob_backward_per_gate > 0.0);

    fibre.length_km = 0.0;
    const RamanResult zero = total_raman_probability(config.plan, fibre, config.detector, 2.65,
                                                     profile, 1.0, nullptr);
    CHECK(zero.prob_forward_per_gate == 0.0);
    CHECK(zero.prob_backward_per_gate == 0.0);
}
