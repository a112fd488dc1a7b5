// Command-line front end: sweep / optimize / simulate / verify.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snsqkd/math.hpp"
#include "snsqkd/montecarlo.hpp"
#include "snsqkd/optimize.hpp"
#include "snsqkd/protocol.hpp"
#include "snsqkd/security.hpp"

namespace {

using namespace snsqkd;

struct CliConfig {
    // channel
    double L = 50.0;
    double lmin = 0.0, lmax = 400.0, lstep = 10.0;
    double ea = 0.1;
    double loss_exponent = 0.01;
    double eta_d = 0.8;
    double p_d = 1e-11;
    // protocol
    double mu = 0.4, epsilon = 0.05, lambda = 0.3, px = 0.1;
    double f = 1.16, test_fraction = 0.0;
    double mu_max = 0.0;  // mu_M; 0 = unset
    std::uint64_t windows = 0;  // 0 = per-command default
    // search space
    double s_mu_min = 1e-4, s_mu_max = 1.5;
    double s_eps_min = 1e-3, s_eps_max = 0.5;
    double s_lambda_min = 0.05, s_lambda_max = 2.0;
    double s_px_min = 0.025, s_px_max = 0.5;
    unsigned grid = 20;
    // run control
    std::uint64_t seed = 42;
    unsigned trials = 100;
    unsigned threads = 0;
    double per_second = 0.0;  // repetition rate; 0 = per-window rates
    std::string out;
    bool inject_n1_bias = false;
};

ChannelModel make_channel(const CliConfig& c, double L) {
    ChannelModel ch;
    ch.length_km = L;
    ch.loss_exponent_per_km = c.loss_exponent;
    ch.eta_d = c.eta_d;
    ch.p_d = c.p_d;
    ch.e_a = c.ea;
    return ch;
}

ProtocolParams make_params(const CliConfig& c, std::uint64_t default_windows) {
    ProtocolParams p;
    p.mu = c.mu;
    p.epsilon = c.epsilon;
    p.lambda = c.lambda;
    p.p_x = c.px;
    p.f = c.f;
    p.test_fraction = c.test_fraction;
    p.n_windows = c.windows != 0 ? c.windows : default_windows;
    if (c.mu_max > 0.0) p.mu_M = c.mu_max;
    return p;
}

SearchSpace make_space(const CliConfig& c) {
    SearchSpace s;
    s.mu_min = c.s_mu_min;
    s.mu_max = c.s_mu_max;
    s.eps_min = c.s_eps_min;
    s.eps_max = c.s_eps_max;
    s.lambda_min = c.s_lambda_min;
    s.lambda_max = c.s_lambda_max;
    s.px_min = c.s_px_min;
    s.px_max = c.s_px_max;
    s.grid_points = c.grid;
    return s;
}

OptimizeOptions make_opt_options(const CliConfig& c) {
    OptimizeOptions o;
    o.threads = c.threads;
    o.f = c.f;
    o.test_fraction = c.test_fraction;
    if (c.windows != 0) o.n_windows = c.windows;
    if (c.mu_max > 0.0) o.mu_M = c.mu_max;
    return o;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10e", v);
    return buf;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int run_sweep(const CliConfig& cfg) {
    std::vector<double> distances;
    for (double L = cfg.lmin; L <= cfg.lmax + 1e-9; L += cfg.lstep)
        distances.push_back(L);

    const std::string path = cfg.out.empty() ? "sweep.csv" : cfg.out;
    std::ofstream file(path);
    if (!file) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return 2;
    }

    const double rate_scale = cfg.per_second > 0.0 ? cfg.per_second : 1.0;
    file << "L_km,mu,epsilon,lambda,p_x,key_rate,e1ph_upper,EZ,n1_lower\n";
    const auto rows = sweep(distances, make_channel(cfg, 0.0), make_space(cfg),
                            make_opt_options(cfg));
    for (const auto& row : rows) {
        file << num(row.length_km) << ',' << sci(row.params.mu) << ','
             << sci(row.params.epsilon) << ',' << sci(row.params.lambda) << ','
             << sci(row.params.p_x) << ',' << sci(row.bounds.R * rate_scale)
             << ',' << sci(row.bounds.e1ph_U) << ',' << sci(row.bounds.EZ)
             << ',' << sci(row.bounds.n1_L) << '\n';
    }
    if (!file.good()) {
        std::cerr << "error: write failed for '" << path << "'\n";
        return 2;
    }
    std::cerr << "wrote " << rows.size() << " rows to " << path << "\n";
    return 0;
}

void print_bounds(const SecurityBounds& b, double rate_scale) {
    std::cout << "n_plus0_L = " << sci(b.n_plus0_L) << "\n"
              << "n_plus1_U = " << sci(b.n_plus1_U) << "\n"
              << "n_tilde_Z_L = " << sci(b.n_tilde_Z_L) << "\n"
              << "e1ph_U = " << sci(b.e1ph_U) << "\n"
              << "n1_L = " << sci(b.n1_L) << "\n"
              << "EZ = " << sci(b.EZ) << "\n"
              << "N_f = " << sci(b.N_f) << "\n"
              << "key_rate = " << sci(b.R * rate_scale) << "\n";
    if (!b.diagnostic.empty()) std::cout << "diagnostic = " << b.diagnostic << "\n";
}

int run_optimize(const CliConfig& cfg) {
    const auto result =
        optimize(make_channel(cfg, cfg.L), make_space(cfg), make_opt_options(cfg));
    const double rate_scale = cfg.per_second > 0.0 ? cfg.per_second : 1.0;
    std::cout << "L_km = " << num(cfg.L) << "\n"
              << "mu = " << sci(result.params.mu) << "\n"
              << "epsilon = " << sci(result.params.epsilon) << "\n"
              << "lambda = " << sci(result.params.lambda) << "\n"
              << "p_x = " << sci(result.params.p_x) << "\n";
    print_bounds(result.bounds, rate_scale);
    return 0;
}

int run_simulate(const CliConfig& cfg) {
    const ProtocolParams params = make_params(cfg, 10'000'000ULL);
    const ChannelModel ch = make_channel(cfg, cfg.L);
    McOptions opt;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    const McResult mc = monte_carlo_observables(params, ch, opt);

    std::cout << "L_km = " << num(cfg.L) << "\n"
              << "windows = " << params.n_windows << "\n"
              << "seed = " << cfg.seed << "\n"
              << "N_X = " << num(mc.counts.N_X) << "\n"
              << "n_X0 = " << num(mc.counts.n_X0) << "\n"
              << "n_X1 = " << num(mc.counts.n_X1) << "\n"
              << "N_C = " << num(mc.counts.N_C) << "\n"
              << "n_Z0 = " << num(mc.counts.n_Z0) << "\n"
              << "n_Z1 = " << num(mc.counts.n_Z1) << "\n"
              << "n_t = " << num(mc.counts.n_t) << "\n"
              << "n_err_Z = " << num(mc.counts.n_err_Z) << "\n"
              << "N_00 = " << num(mc.counts.N_00) << "\n"
              << "k_00_0 = " << num(mc.counts.k_00_0) << "\n"
              << "k_00_1 = " << num(mc.counts.k_00_1) << "\n"
              << "true_n1 = " << num(mc.truth.true_n1) << "\n";
    const double rate_scale = cfg.per_second > 0.0 ? cfg.per_second : 1.0;
    print_bounds(analyze(mc.counts, params), rate_scale);
    return 0;
}

// ---------------------------------------------------------------------
// verify: executable form of the cross-cutting invariants.

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

CheckResult check_source_equivalence_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto eq = check_source_equivalence(phase(rng), phase(rng));
        worst = std::max(worst, eq.max_deviation());
    }
    CheckResult r;
    r.name = "source-equivalence";
    r.pass = worst < 1e-12;
    r.detail = "max deviation " + sci(worst) + " over 1000 phase pairs (tol 1e-12)";
    return r;
}

CheckResult check_mc_vs_analytic(const CliConfig& cfg) {
    ProtocolParams params = make_params(cfg, 4'000'000ULL);
    const ChannelModel ch = make_channel(cfg, cfg.L);
    McOptions opt;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    const McResult mc = monte_carlo_observables(params, ch, opt);
    const ObservedCounts exp = expected_observables(params, ch);

    const double N = exp.n_windows;
    const struct {
        const char* name;
        double observed, expected;
    } tallies[] = {
        {"N_X", mc.counts.N_X, exp.N_X},       {"n_X0", mc.counts.n_X0, exp.n_X0},
        {"n_X1", mc.counts.n_X1, exp.n_X1},    {"N_C", mc.counts.N_C, exp.N_C},
        {"n_Z0", mc.counts.n_Z0, exp.n_Z0},    {"n_Z1", mc.counts.n_Z1, exp.n_Z1},
        {"n_t", mc.counts.n_t, exp.n_t},       {"n_err_Z", mc.counts.n_err_Z, exp.n_err_Z},
        {"N_00", mc.counts.N_00, exp.N_00},    {"k_00_0", mc.counts.k_00_0, exp.k_00_0},
        {"k_00_1", mc.counts.k_00_1, exp.k_00_1},
    };

    double worst_z = 0.0;
    std::string worst_name = "-";
    bool pass = true;
    for (const auto& t : tallies) {
        const double p = t.expected / N;
        const double sigma = std::sqrt(N * p * (1.0 - p));
        const double diff = std::abs(t.observed - t.expected);
        // Tiny expectations: a 4-sigma gate is meaningless below one
        // event, so allow a one-count slack.
        const double tol = 4.0 * sigma + 1.0;
        if (diff > tol) pass = false;
        const double z = diff / (sigma > 0.0 ? sigma : 1.0);
        if (z > worst_z) {
            worst_z = z;
            worst_name = t.name;
        }
    }
    CheckResult r;
    r.name = "mc-vs-analytic";
    r.pass = pass;
    r.detail = "worst tally " + worst_name + " at " + num(worst_z) +
               " sigma over " + std::to_string(std::size(tallies)) +
               " tallies (tol 4 sigma + 1 count)";
    return r;
}

CheckResult check_bound_soundness(const CliConfig& cfg) {
    ProtocolParams params = make_params(cfg, 8'000'000ULL);
    const ChannelModel ch = make_channel(cfg, cfg.L);

    unsigned sound = 0;
    for (unsigned trial = 0; trial < cfg.trials; ++trial) {
        McOptions opt;
        opt.seed = cfg.seed + trial;
        opt.threads = cfg.threads;
        const McResult mc = monte_carlo_observables(params, ch, opt);
        SecurityBounds b = analyze(mc.counts, params);
        if (cfg.inject_n1_bias) b.n1_L *= 1.1;
        if (b.collapsed()) {
            // A collapsed analysis claims nothing, hence bounds nothing.
            ++sound;
            continue;
        }
        const GroundTruth gt =
            scale_to_matched(mc.truth, mc.counts, b);
        const double true_e1 = single_photon_e1ph(gt);
        const bool n1_ok = b.n1_L <= mc.truth.true_n1;
        const bool e1_ok = b.e1ph_U >= true_e1;
        if (n1_ok && e1_ok) ++sound;
    }
    CheckResult r;
    r.name = "bound-soundness";
    const double frac = static_cast<double>(sound) / cfg.trials;
    r.pass = frac >= 0.99;
    r.detail = std::to_string(sound) + "/" + std::to_string(cfg.trials) +
               " trials sound (require >= 99%)";
    return r;
}

int run_verify(const CliConfig& cfg) {
    std::vector<CheckResult> results;
    results.push_back(check_source_equivalence_suite(cfg.seed));
    results.push_back(check_mc_vs_analytic(cfg));
    results.push_back(check_bound_soundness(cfg));

    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
                  << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sending-or-not-sending twin-field QKD simulator and "
                 "security analysis"};
    app.fallthrough(true);
    CliConfig cfg;

    app.set_config("--config", "", "Read options from a key = value file");

    app.add_option("--L", cfg.L, "Alice-Bob distance in km");
    app.add_option("--lmin", cfg.lmin, "Sweep start distance (km)");
    app.add_option("--lmax", cfg.lmax, "Sweep end distance (km)");
    app.add_option("--lstep", cfg.lstep, "Sweep step (km)")
        ->check(CLI::PositiveNumber);
    app.add_option("--ea", cfg.ea, "Single-photon misalignment error");
    app.add_option("--loss-exponent", cfg.loss_exponent,
                   "Channel loss, decades per km");
    app.add_flag_callback(
        "--paper-channel", [&cfg] { cfg.loss_exponent = 0.01; },
        "Use the 0.1 dB/km channel (10^{-L/100})");
    app.add_flag_callback(
        "--standard-fiber", [&cfg] { cfg.loss_exponent = 0.02; },
        "Use standard 0.2 dB/km fiber");
    app.add_option("--eta-d", cfg.eta_d, "Detector efficiency");
    app.add_option("--pd", cfg.p_d, "Dark count probability per detector");

    app.add_option("--mu", cfg.mu, "Pair intensity (each side sends mu/2)");
    app.add_option("--epsilon", cfg.epsilon, "Z-window send probability");
    app.add_option("--lambda", cfg.lambda, "Phase slice parameter");
    app.add_option("--px", cfg.px, "X-window probability per side");
    app.add_option("--f", cfg.f, "Error-correction efficiency");
    app.add_option("--test-fraction", cfg.test_fraction,
                   "Fraction of Z-windows revealed as test bits");
    app.add_option("--mu-max", cfg.mu_max,
                   "Intensity upper bound mu_M for fluctuation analysis");
    app.add_option("--windows", cfg.windows, "Window count (0 = command default)");

    app.add_option("--space-mu-min", cfg.s_mu_min, "Search: min mu");
    app.add_option("--space-mu-max", cfg.s_mu_max, "Search: max mu");
    app.add_option("--space-eps-min", cfg.s_eps_min, "Search: min epsilon");
    app.add_option("--space-eps-max", cfg.s_eps_max, "Search: max epsilon");
    app.add_option("--space-lambda-min", cfg.s_lambda_min, "Search: min lambda");
    app.add_option("--space-lambda-max", cfg.s_lambda_max, "Search: max lambda");
    app.add_option("--space-px-min", cfg.s_px_min, "Search: min p_x");
    app.add_option("--space-px-max", cfg.s_px_max, "Search: max p_x");
    app.add_option("--grid", cfg.grid, "Grid points per search axis");

    app.add_option("--seed", cfg.seed, "Master RNG seed");
    app.add_option("--trials", cfg.trials, "Monte Carlo repetitions for verify");
    app.add_option("--threads", cfg.threads, "Worker threads (0 = auto)");
    app.add_option("--per-second", cfg.per_second,
                   "Repetition rate; report key bits per second");
    app.add_option("--out", cfg.out, "Output path for sweep CSV");
    app.add_flag("--inject-n1-bias", cfg.inject_n1_bias,
                 "Testing hook: inflate the n1 lower bound by 10%");

    auto* cmd_sweep =
        app.add_subcommand("sweep", "Optimize per distance, write a CSV table");
    auto* cmd_optimize =
        app.add_subcommand("optimize", "Optimize parameters at one distance");
    auto* cmd_simulate =
        app.add_subcommand("simulate", "Seeded Monte Carlo run plus analysis");
    auto* cmd_verify =
        app.add_subcommand("verify", "Run the invariant checks");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cmd_sweep->parsed()) return run_sweep(cfg);
        if (cmd_optimize->parsed()) return run_optimize(cfg);
        if (cmd_simulate->parsed()) return run_simulate(cfg);
        if (cmd_verify->parsed()) return run_verify(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
