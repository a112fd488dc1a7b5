#include <cmath>

#include <doctest.h>

#include "snsqkd/montecarlo.hpp"

using namespace snsqkd;

namespace {

ProtocolParams mc_params(std::uint64_t windows) {
    ProtocolParams p;
    p.mu = 0.4;
    p.epsilon = 0.05;
    p.p_x = 0.1;
    p.lambda = 0.3;
    p.n_windows = windows;
    return p;
}

bool same_counts(const ObservedCounts& a, const ObservedCounts& b) {
    return a.N_X == b.N_X && a.n_X0 == b.n_X0 && a.n_X1 == b.n_X1 &&
           a.N_C == b.N_C && a.n_Z0 == b.n_Z0 && a.n_Z1 == b.n_Z1 &&
           a.n_t == b.n_t && a.n_err_Z == b.n_err_Z && a.N_00 == b.N_00 &&
           a.k_00_0 == b.k_00_0 && a.k_00_1 == b.k_00_1;
}

}  // namespace

TEST_CASE("monte carlo: identical seed, identical output, any thread count") {
    const ProtocolParams p = mc_params(3'000'000);
    const ChannelModel ch = ChannelModel::paper_channel(50.0, 0.1);

    McOptions a;
    a.seed = 7;
    a.threads = 1;
    McOptions b = a;
    b.threads = 3;

    const McResult ra1 = monte_carlo_observables(p, ch, a);
    const McResult ra2 = monte_carlo_observables(p, ch, a);
    const McResult rb = monte_carlo_observables(p, ch, b);

    CHECK(same_counts(ra1.counts, ra2.counts));
    CHECK(same_counts(ra1.counts, rb.counts));
    CHECK(ra1.truth.true_n1 == rb.truth.true_n1);
    CHECK(ra1.truth.tilde_n_plus0 == rb.truth.tilde_n_plus0);

    McOptions other = a;
    other.seed = 8;
    const McResult rc = monte_carlo_observables(p, ch, other);
    CHECK(!same_counts(ra1.counts, rc.counts));
}

TEST_CASE("monte carlo: no darks, no vacuum clicks") {
    ProtocolParams p = mc_params(500'000);
    ChannelModel ch = ChannelModel::paper_channel(30.0, 0.1);
    ch.p_d = 0.0;
    const McResult r = monte_carlo_observables(p, ch, 99);
    CHECK(r.counts.k_00_0 == 0.0);
    CHECK(r.counts.k_00_1 == 0.0);
    CHECK(r.counts.N_00 > 0.0);
    // With no darks every error comes from both-send windows.
    CHECK(r.counts.n_err_Z <= r.counts.n_t);
}

TEST_CASE("monte carlo: tallies within 4 sigma of the analytic expectations") {
    const ProtocolParams p = mc_params(2'000'000);
    ChannelModel ch = ChannelModel::paper_channel(50.0, 0.1);
    ch.p_d = 1e-6;  // make the vacuum tallies statistically visible
    const McResult mc = monte_carlo_observables(p, ch, 12345);
    const ObservedCounts exp = expected_observables(p, ch);

    const double N = exp.n_windows;
    const struct {
        const char* name;
        double observed, expected;
    } tallies[] = {
        {"N_X", mc.counts.N_X, exp.N_X},     {"n_X0", mc.counts.n_X0, exp.n_X0},
        {"n_X1", mc.counts.n_X1, exp.n_X1},  {"N_C", mc.counts.N_C, exp.N_C},
        {"n_Z0", mc.counts.n_Z0, exp.n_Z0},  {"n_Z1", mc.counts.n_Z1, exp.n_Z1},
        {"n_t", mc.counts.n_t, exp.n_t},     {"n_err_Z", mc.counts.n_err_Z, exp.n_err_Z},
        {"N_00", mc.counts.N_00, exp.N_00},  {"k_00_0", mc.counts.k_00_0, exp.k_00_0},
        {"k_00_1", mc.counts.k_00_1, exp.k_00_1},
    };
    for (const auto& t : tallies) {
        CAPTURE(t.name);
        const double prob = t.expected / N;
        const double sigma = std::sqrt(N * prob * (1.0 - prob));
        CHECK(std::abs(t.observed - t.expected) <= 4.0 * sigma + 1.0);
    }
}

TEST_CASE("monte carlo: consistent with the click model across parameter grid") {
    const struct {
        double mu, eps, px, lambda, L, ea;
    } grid[] = {
        {0.1, 0.02, 0.05, 0.1, 20.0, 0.0},  {0.1, 0.02, 0.05, 0.1, 80.0, 0.1},
        {0.2, 0.05, 0.1, 0.3, 40.0, 0.1},   {0.2, 0.10, 0.2, 0.5, 60.0, 0.2},
        {0.4, 0.05, 0.1, 0.3, 50.0, 0.1},   {0.4, 0.20, 0.3, 1.0, 30.0, 0.3},
        {0.6, 0.10, 0.1, 0.8, 50.0, 0.25},  {0.8, 0.05, 0.2, 1.5, 20.0, 0.05},
        {1.0, 0.15, 0.25, 2.0, 40.0, 0.4},  {1.2, 0.30, 0.15, 0.7, 10.0, 0.15},
        {0.3, 0.08, 0.4, 0.4, 70.0, 0.1},   {0.5, 0.12, 0.35, 1.2, 90.0, 0.2},
    };
    std::uint64_t seed = 500;
    for (const auto& g : grid) {
        ProtocolParams p;
        p.mu = g.mu;
        p.epsilon = g.eps;
        p.p_x = g.px;
        p.lambda = g.lambda;
        p.n_windows = 300'000;
        ChannelModel ch = ChannelModel::paper_channel(g.L, g.ea);
        ch.p_d = 1e-6;
        const McResult mc = monte_carlo_observables(p, ch, seed++);
        const ObservedCounts exp = expected_observables(p, ch);
        const double N = exp.n_windows;
        const double effective[][2] = {
            {mc.counts.n_X0, exp.n_X0}, {mc.counts.n_X1, exp.n_X1},
            {mc.counts.n_Z0, exp.n_Z0}, {mc.counts.n_Z1, exp.n_Z1},
            {mc.counts.n_t, exp.n_t},   {mc.counts.n_err_Z, exp.n_err_Z},
        };
        for (const auto& t : effective) {
            const double prob = t[1] / N;
            const double sigma = std::sqrt(N * prob * (1.0 - prob));
            CHECK(std::abs(t[0] - t[1]) <= 4.0 * sigma + 1.0);
        }
    }
}

TEST_CASE("monte carlo: ground truth stays inside the observed tallies") {
    const ProtocolParams p = mc_params(2'000'000);
    const ChannelModel ch = ChannelModel::paper_channel(25.0, 0.1);
    const McResult r = monte_carlo_observables(p, ch, 31);
    CHECK(r.truth.tilde_n_plus0 <= r.counts.n_X0);
    CHECK(r.truth.tilde_n_plus1 <= r.counts.n_X1);
    CHECK(r.truth.tilde_n_Z0 <= r.counts.n_Z0);
    CHECK(r.truth.tilde_n_Z1 <= r.counts.n_Z1);
    CHECK(r.truth.true_n1 ==
          doctest::Approx(r.truth.tilde_n_Z0 + r.truth.tilde_n_Z1));
    CHECK(r.truth.true_n1 <= r.counts.n_Z0 + r.counts.n_Z1);
}

TEST_CASE("monte carlo: forced single photons make every set-C click untagged") {
    ProtocolParams p = mc_params(400'000);
    ChannelModel ch = ChannelModel::paper_channel(25.0, 0.1);
    ch.p_d = 0.0;
    McOptions opt;
    opt.seed = 5;
    opt.force_single_photon = true;
    const McResult r = monte_carlo_observables(p, ch, opt);
    CHECK(r.truth.tilde_n_Z0 == r.counts.n_Z0);
    CHECK(r.truth.tilde_n_Z1 == r.counts.n_Z1);
    CHECK(r.truth.tilde_n_plus0 == r.counts.n_X0);
    CHECK(r.truth.tilde_n_plus1 == r.counts.n_X1);
}
