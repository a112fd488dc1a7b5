#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace snsqkd {

enum class Basis : std::uint8_t { X, Z };
enum class Party : std::uint8_t { Alice, Bob };

// Source-side protocol parameters. Each party emits coherent pulses of
// intensity mu/2; the pair intensity is mu.
struct ProtocolParams {
    double mu = 0.1;          // mean photon number per pulse pair
    double epsilon = 0.05;    // send probability in a Z-window
    double p_x = 0.1;         // X-window probability per side
    double lambda = 0.3;      // phase-slice half-width parameter, (0, 2]
    double f = 1.16;          // error-correction efficiency
    std::uint64_t n_windows = 10'000'000'000ULL;
    std::optional<double> mu_M;  // intensity upper bound (fluctuation fix)
    double test_fraction = 0.0;  // fraction of Z-windows revealed as tests

    double p_z() const { return 1.0 - p_x; }
    // Intensity the security analysis must assume (mu_M when set).
    double analysis_mu() const { return mu_M.value_or(mu); }

    // Throws std::invalid_argument on any violated range.
    void validate() const;
};

// One time window as seen from the source side. Phases:
//   rho: global phase of the QKD coherent pulse,
//   delta: offset between the QKD laser and the reference laser
//          (known to its owner, post-announced for X windows only).
struct WindowOutcome {
    Basis alice_basis = Basis::Z;
    Basis bob_basis = Basis::Z;
    bool alice_sent = false;
    bool bob_sent = false;
    double rho_a = 0.0;
    double rho_b = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
};

enum class WindowClass : std::uint8_t {
    XxPair,        // both X: candidate for phase post-selection
    SetCAliceSent, // both Z, only Alice sent
    SetCBobSent,   // both Z, only Bob sent
    ZzBothSent,    // both Z, both sent (error source)
    ZzNoneSent,    // both Z, neither sent (vacuum-yield source)
    MixedBasis,    // one X one Z: discarded
};

// Draws one window. X-window parties always send; Z-window parties send
// with probability epsilon. All four phases are uniform on [0, 2pi).
WindowOutcome sample_window(const ProtocolParams& params, std::mt19937_64& rng);

WindowClass classify_window(const WindowOutcome& w);

// Post-selection criterion 1 - cos(delta_a - delta_b) <= |lambda|.
bool phase_slice_accept(double delta_a, double delta_b, double lambda);

// Measure of accepted delta = delta_a - delta_b under the uniform phase
// model: arccos(1 - lambda) / pi. Throws outside (0, 2].
double slice_acceptance_probability(double lambda);

// Z-basis bit convention: Alice maps not-sent -> 0, sent -> 1; Bob maps
// not-sent -> 1, sent -> 0, so the two set-C cases give agreeing bits.
// Throws std::logic_error when the window is not Z for both parties.
int bit_value(const WindowOutcome& w, Party party);

struct SourceEquivalence {
    // Trace distance between (|x+><x+| + |x-><x-|)/2 and
    // (|z0><z0| + |z1><z1|)/2 with x-states built from the given phases.
    double mixture_distance = 0.0;
    // Deviation of the phase map diag(e^{i d0}, e^{i d1}) from unitarity.
    double unitarity_deviation = 0.0;

    double max_deviation() const;
};

// Why the announced X states leak nothing: averaged over the +/- sign
// they are indistinguishable from the Z mixture, and the phase map is
// unitary on the two-mode subspace. Both deviations should be ~0.
SourceEquivalence check_source_equivalence(double rho_a, double rho_b);

}  // namespace snsqkd
