#pragma once

#include <string>

#include "snsqkd/channel.hpp"

namespace snsqkd {

// Result of the worst-case estimation chain. A collapsed bound (no
// usable denominator, no vacuum windows, ...) is reported as rate = 0
// with a diagnostic rather than an exception so sweeps degrade smoothly.
struct SecurityBounds {
    double n_plus0_L = 0;   // lower bound on single-photon correct X counts
    double n_plus1_U = 0;   // upper bound on single-photon wrong X counts
    double n_tilde_Z_L = 0; // lower bound on single-photon c_Z counts
    double e1ph_U = 1.0;    // upper bound on the phase-flip error rate
    double n1_L = 0;        // lower bound on untagged bits in set C
    double EZ = 0;          // observed Z-basis bit error rate
    double N_f = 0;         // key length, bits
    double R = 0;           // key rate, bits per window
    double matched_N_X = 0; // subset sizes actually used
    double matched_N_Z = 0;
    std::string diagnostic; // empty when the chain completed

    bool collapsed() const { return !diagnostic.empty(); }
};

struct VacuumYields {
    double y00_0 = 0;
    double y00_1 = 0;
    double total() const { return y00_0 + y00_1; }
};

// Two-mode vacuum yield per detector, estimated from the Z-Z windows in
// which neither party sent. Throws std::domain_error when no such
// windows were observed.
VacuumYields vacuum_yields(const ObservedCounts& counts);

struct SubsetSizes {
    double N_X = 0;  // integer-valued
    double N_Z = 0;
};

// Largest integer pair with N_Z = round(4 N_X e^{-mu/2}) that fits in
// both pools. The condition equates the expected single-photon
// populations needed by the phase-error transfer (c_Z twice c_X).
SubsetSizes subset_sizes(double avail_X, double avail_Z, double mu);

// Worst-case single-photon bounds. All inputs refer to the matched
// subsets; every multi-photon pulse is conceded to the adversary.
double bound_n_plus0(double n_X0, double N_X, double y00_0, double mu);
double bound_n_plus1(double n_X1, double N_X, double y00_1, double mu);
double bound_n_tilde_Z(double n_Z0, double n_Z1, double N_Z, double y00,
                       double mu);

// Phase-flip bound (n_X1 + n_Z0 - n_plus0_L) / n_tilde_Z_L clamped to
// [0, 1]. Throws std::domain_error when the denominator is not positive
// (no-key condition).
double bound_e1ph(double n_X1, double n_Z0, double n_plus0_L,
                  double n_tilde_Z_L);

// Single-photon phase-flip rate evaluated on ground-truth tallies:
// (n~_{+1} + n~_{-0}) / (n~_{Z0} + n~_{Z1}) with n~_{-0} = n~_{Z0} - n~_{+0}.
// Oracle counterpart of bound_e1ph for simulated data.
double single_photon_e1ph(const GroundTruth& gt);

// Untagged-bit extrapolation (n_tilde_Z_L / N_Z) * N_C.
double bound_n1(double n_tilde_Z_L, double N_Z, double N_C);

// N_f = n1 (1 - H(e1ph)) - n_t f H(EZ), clamped at zero. A phase-flip
// rate at or above 1/2 contributes no privacy, so the first term is
// evaluated with e1ph capped at 1/2.
double key_length(double n1, double e1ph, double n_t, double EZ, double f);

// The full chain: vacuum yields -> subset matching -> single-photon
// bounds -> phase-error bound -> key length. Uses params.analysis_mu()
// (mu_M when set) for every source-fraction term and scales n1 and n_t
// by (1 - test_fraction).
SecurityBounds analyze(const ObservedCounts& counts,
                       const ProtocolParams& params);

// Ground-truth tallies trimmed proportionally to the matched subsets an
// analysis actually used, so that single_photon_e1ph(gt) is comparable
// with that analysis' e1ph_U. true_n1 refers to the whole set C and is
// left untouched.
GroundTruth scale_to_matched(const GroundTruth& gt,
                             const ObservedCounts& counts,
                             const SecurityBounds& bounds);

}  // namespace snsqkd
