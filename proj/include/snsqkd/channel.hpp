#pragma once

#include "snsqkd/protocol.hpp"

namespace snsqkd {

// Charlie sits midway: each arm spans half of length_km. Detector
// efficiency folds into the arm transmittance; dark counts fire per
// detector per window.
struct ChannelModel {
    double length_km = 0.0;
    double loss_exponent_per_km = 0.01;  // decades/km; 0.01 = 0.1 dB/km
    double eta_d = 0.8;                  // detector efficiency
    double p_d = 1e-11;                  // dark count probability
    double e_a = 0.0;                    // single-photon misalignment error

    double channel_transmittance() const;  // full-distance eta
    double arm_transmittance() const;      // sqrt(eta) * eta_d
    double visibility() const { return 1.0 - 2.0 * e_a; }

    void validate() const;

    static ChannelModel paper_channel(double length_km, double e_a);
    static ChannelModel standard_fiber(double length_km, double e_a);
};

double channel_transmittance(double length_km, const ChannelModel& model);

struct ClickProbabilities {
    double p_d0 = 0.0;
    double p_d1 = 0.0;
};

// Threshold-detector click probabilities for source intensities i_a, i_b
// interfering at phase difference delta. Mean photons at D0/D1:
//   (i_a + i_b) eta/2 +- V sqrt(i_a i_b) eta cos(delta),
// eta the arm transmittance, V = 1 - 2 E_a. Detectors are independent;
// each also fires darkly with probability p_d.
ClickProbabilities click_probabilities(double i_a, double i_b, double delta,
                                       const ChannelModel& ch);

// Everything the parties can tally without breaking the announcement
// rules. Real-valued: expectations in analytic mode, integer counts from
// the Monte Carlo. Producers fill the full pools (every slice-accepted
// X-X pair, every set-C window); the security analysis trims them to the
// matched-subset sizes itself.
struct ObservedCounts {
    double n_windows = 0;  // total windows behind these tallies
    double N_X = 0;        // slice-accepted X-X pairs (pool for c_X)
    double n_X0 = 0;       // D0-only effective events in that pool
    double n_X1 = 0;       // D1-only effective events in that pool
    double N_Z = 0;        // set-C pulses available for c_Z (= N_C here)
    double n_Z0 = 0;       // D0-only effective events in set C
    double n_Z1 = 0;       // D1-only effective events in set C
    double n_t = 0;        // all effective Z-Z events (the sifted bits)
    double n_err_Z = 0;    // erroneous effective Z-Z events
    double N_C = 0;        // set-C windows
    double N_00 = 0;       // Z-Z windows where neither sent
    double k_00_0 = 0;     // D0-only events among N_00
    double k_00_1 = 0;     // D1-only events among N_00

    void validate() const;
};

// Tallies only a simulation can know: per-window photon numbers at the
// source. Used to check that the worst-case bounds really bound.
struct GroundTruth {
    double tilde_n_plus0 = 0;  // single-photon accepted X-X, D0-only
    double tilde_n_plus1 = 0;  // single-photon accepted X-X, D1-only
    double tilde_n_Z0 = 0;     // single-photon set-C, D0-only
    double tilde_n_Z1 = 0;     // single-photon set-C, D1-only
    double true_n1 = 0;        // single-photon effective set-C events
};

// Expected tallies over params.n_windows windows, computed by phase-space
// integration of the click model. X-X pairs are restricted to the
// accepted slice (D0 treated as the correct detector after frame
// rotation); Z-Z both-send events average over the unannounced phase.
ObservedCounts expected_observables(const ProtocolParams& params,
                                    const ChannelModel& ch);

}  // namespace snsqkd
