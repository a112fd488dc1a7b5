#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "snsqkd/channel.hpp"

using namespace snsqkd;

namespace {

ChannelModel test_channel(double L, double e_a) {
    ChannelModel ch = ChannelModel::paper_channel(L, e_a);
    return ch;
}

// Test-side photon sampler for a lone sender: Poisson source, arm loss,
// 50/50 routing, then dark counts. Kept independent of the click model
// it cross-checks.
double mc_click_fraction_single_sender(double intensity, const ChannelModel& ch,
                                       int n, std::mt19937_64& rng) {
    std::poisson_distribution<int> source(intensity);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double eta = ch.arm_transmittance();
    int clicks = 0;
    for (int i = 0; i < n; ++i) {
        int at_d0 = 0;
        const int photons = source(rng);
        for (int k = 0; k < photons; ++k)
            if (unit(rng) < eta && unit(rng) < 0.5) ++at_d0;
        if (at_d0 > 0 || unit(rng) < ch.p_d) ++clicks;
    }
    return static_cast<double>(clicks) / n;
}

}  // namespace

TEST_CASE("channel model: presets and transmittance") {
    const ChannelModel paper = ChannelModel::paper_channel(100.0, 0.1);
    CHECK(paper.channel_transmittance() == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(paper.arm_transmittance() ==
          doctest::Approx(0.8 * std::sqrt(0.1)).epsilon(1e-13));
    const ChannelModel fiber = ChannelModel::standard_fiber(100.0, 0.1);
    CHECK(fiber.channel_transmittance() == doctest::Approx(0.01).epsilon(1e-13));
    CHECK(channel_transmittance(50.0, paper) ==
          doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-13));

    ChannelModel bad = paper;
    bad.e_a = 0.7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("click probabilities: vacuum gives dark counts only") {
    const ChannelModel ch = test_channel(80.0, 0.1);
    const ClickProbabilities p = click_probabilities(0.0, 0.0, 1.0, ch);
    CHECK(p.p_d0 == doctest::Approx(ch.p_d).epsilon(1e-9));
    CHECK(p.p_d1 == doctest::Approx(ch.p_d).epsilon(1e-9));
    CHECK_THROWS_AS(click_probabilities(-0.1, 0.0, 0.0, ch), std::domain_error);
}

TEST_CASE("click probabilities: dark port vanishes at perfect visibility") {
    ChannelModel ch = test_channel(0.0, 0.0);
    ch.p_d = 0.0;
    ch.eta_d = 1.0;
    const ClickProbabilities p = click_probabilities(0.2, 0.2, 0.0, ch);
    CHECK(p.p_d1 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p.p_d0 > 0.0);
}

TEST_CASE("click probabilities: lone sender splits evenly, MC cross-check") {
    const double mu = 0.4;
    ChannelModel ch = test_channel(50.0, 0.1);
    ch.p_d = 1e-3;
    const ClickProbabilities p = click_probabilities(0.5 * mu, 0.0, 0.7, ch);
    const double mean = 0.25 * mu * ch.arm_transmittance();
    const double expected = 1.0 - (1.0 - ch.p_d) * std::exp(-mean);
    CHECK(p.p_d0 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(p.p_d1 == doctest::Approx(expected).epsilon(1e-12));

    std::mt19937_64 rng(2024);
    const int n = 400'000;
    const double freq = mc_click_fraction_single_sender(0.5 * mu, ch, n, rng);
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::abs(freq - p.p_d0) <= 4.0 * sigma);
}

TEST_CASE("click probabilities: energy conservation and pi-shift swap") {
    ChannelModel ch = test_channel(40.0, 0.17);
    ch.p_d = 0.0;  // so intensities can be recovered from probabilities
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    for (int i = 0; i < 300; ++i) {
        const double ia = unit(rng), ib = unit(rng), d = phase(rng);
        ch.e_a = 0.5 * unit(rng);
        const ClickProbabilities p = click_probabilities(ia, ib, d, ch);
        const double i0 = -std::log1p(-p.p_d0);
        const double i1 = -std::log1p(-p.p_d1);
        CHECK(i0 + i1 ==
              doctest::Approx((ia + ib) * ch.arm_transmittance()).epsilon(1e-11));

        const ClickProbabilities q = click_probabilities(ia, ib, d + M_PI, ch);
        CHECK(q.p_d0 == doctest::Approx(p.p_d1).epsilon(1e-11));
        CHECK(q.p_d1 == doctest::Approx(p.p_d0).epsilon(1e-11));
    }
}

TEST_CASE("click probabilities: monotone in intensity and dark rate") {
    ChannelModel ch = test_channel(60.0, 0.2);
    double prev = -1.0;
    for (double ia = 0.0; ia <= 2.0; ia += 0.1) {
        const ClickProbabilities p = click_probabilities(ia, 0.3, 0.4, ch);
        CHECK(p.p_d0 >= prev);
        CHECK(p.p_d0 <= 1.0);
        CHECK(p.p_d1 <= 1.0);
        prev = p.p_d0;
    }
    ChannelModel darker = ch;
    darker.p_d = 1e-3;
    CHECK(click_probabilities(0.1, 0.1, 0.2, darker).p_d0 >
          click_probabilities(0.1, 0.1, 0.2, ch).p_d0);
}

TEST_CASE("expected observables: no light and no darks means silent Z side") {
    ProtocolParams p;
    p.mu = 0.4;
    p.epsilon = 0.0;
    p.p_x = 0.1;
    p.lambda = 0.3;
    ChannelModel ch = test_channel(50.0, 0.1);
    ch.p_d = 0.0;
    const ObservedCounts c = expected_observables(p, ch);
    CHECK(c.N_C == 0.0);
    CHECK(c.n_Z0 == 0.0);
    CHECK(c.n_Z1 == 0.0);
    CHECK(c.n_t == 0.0);
    CHECK(c.n_err_Z == 0.0);
    CHECK(c.k_00_0 == 0.0);
    CHECK(c.N_00 > 0.0);
    // X side still clicks.
    CHECK(c.n_X0 > 0.0);
}

TEST_CASE("expected observables: X error ratio is capped by the slice average") {
    ProtocolParams p;
    p.mu = 1e-3;  // near-single-photon regime
    p.epsilon = 0.05;
    p.p_x = 0.3;
    ChannelModel ch = test_channel(0.0, 0.0);
    ch.eta_d = 1.0;
    ch.p_d = 0.0;

    double prev_ratio = 1.0;
    for (double lambda : {0.8, 0.3, 0.1, 0.02}) {
        p.lambda = lambda;
        const ObservedCounts c = expected_observables(p, ch);
        const double ratio = c.n_X1 / (c.n_X0 + c.n_X1);

        // Average of sin^2(delta/2) over the accepted slice, by direct
        // Riemann sum.
        const double theta = std::acos(1.0 - lambda);
        const int steps = 20000;
        double sinsq = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double d = theta * (i + 0.5) / steps;
            sinsq += std::sin(0.5 * d) * std::sin(0.5 * d);
        }
        sinsq /= steps;

        CHECK(ratio <= sinsq * (1.0 + 1e-6) + 1e-15);
        CHECK(ratio < prev_ratio);
        prev_ratio = ratio;
    }
    // At lambda = 0.02 the slice average is ~theta^2/12 = 3.3e-3.
    CHECK(prev_ratio < 4e-3);
}

TEST_CASE("expected observables: bookkeeping identities") {
    ProtocolParams p;
    p.mu = 0.4;
    p.epsilon = 0.05;
    p.p_x = 0.1;
    p.lambda = 0.3;
    const ChannelModel ch = test_channel(50.0, 0.1);
    const ObservedCounts c = expected_observables(p, ch);
    CHECK_NOTHROW(c.validate());
    CHECK(c.N_Z == c.N_C);
    CHECK(c.n_t >= c.n_Z0 + c.n_Z1);
    CHECK(c.n_err_Z == doctest::Approx(c.n_t - c.n_Z0 - c.n_Z1).epsilon(1e-12));
    const double N = c.n_windows;
    const double pools = c.N_X / slice_acceptance_probability(p.lambda) +
                         c.N_C + c.N_00 +
                         N * p.p_z() * p.p_z() * p.epsilon * p.epsilon;
    // X pairs (before the slice), all Z-Z windows, plus mixed-basis
    // windows account for every window.
    CHECK(pools + 2.0 * N * p.p_x * p.p_z() ==
          doctest::Approx(N).epsilon(1e-12));
}
