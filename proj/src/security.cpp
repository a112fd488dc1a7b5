#include "snsqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snsqkd/math.hpp"

namespace snsqkd {

VacuumYields vacuum_yields(const ObservedCounts& counts) {
    if (!(counts.N_00 > 0.0))
        throw std::domain_error("vacuum_yields: no vacuum windows observed");
    return {counts.k_00_0 / counts.N_00, counts.k_00_1 / counts.N_00};
}

SubsetSizes subset_sizes(double avail_X, double avail_Z, double mu) {
    if (!(mu > 0.0)) throw std::domain_error("subset_sizes: mu must be > 0");
    if (!(avail_X >= 1.0) || !(avail_Z >= 1.0))
        throw std::domain_error("subset_sizes: empty pool");
    const double ratio = 4.0 * std::exp(-0.5 * mu);  // N_Z per N_X
    double nx = std::floor(avail_X);
    double nz = std::round(nx * ratio);
    if (nz > std::floor(avail_Z)) {
        nz = std::floor(avail_Z);
        nx = std::floor(nz / ratio);
        nz = std::round(nx * ratio);
    }
    return {nx, nz};
}

double bound_n_plus0(double n_X0, double N_X, double y00_0, double mu) {
    const double vac = y00_0 * N_X * std::exp(-mu);
    const double multi = N_X * (1.0 - std::exp(-mu) - mu * std::exp(-mu));
    return std::max(0.0, n_X0 - vac - multi);
}

double bound_n_plus1(double n_X1, double N_X, double y00_1, double mu) {
    return std::max(0.0, n_X1 - y00_1 * N_X * std::exp(-mu));
}

double bound_n_tilde_Z(double n_Z0, double n_Z1, double N_Z, double y00,
                       double mu) {
    const double half = 0.5 * mu;
    const double multi = N_Z * (1.0 - std::exp(-half) - half * std::exp(-half));
    const double vac = y00 * N_Z * std::exp(-half);
    return std::max(0.0, n_Z0 + n_Z1 - multi - vac);
}

double bound_e1ph(double n_X1, double n_Z0, double n_plus0_L,
                  double n_tilde_Z_L) {
    if (!(n_tilde_Z_L > 0.0))
        throw std::domain_error("bound_e1ph: no single-photon counts left (no key)");
    const double e = (n_X1 + n_Z0 - n_plus0_L) / n_tilde_Z_L;
    return std::clamp(e, 0.0, 1.0);
}

double single_photon_e1ph(const GroundTruth& gt) {
    const double denom = gt.tilde_n_Z0 + gt.tilde_n_Z1;
    if (!(denom > 0.0))
        throw std::domain_error("single_photon_e1ph: no single-photon Z counts");
    const double n_minus0 = gt.tilde_n_Z0 - gt.tilde_n_plus0;
    return (gt.tilde_n_plus1 + n_minus0) / denom;
}

double bound_n1(double n_tilde_Z_L, double N_Z, double N_C) {
    if (!(N_Z > 0.0)) throw std::domain_error("bound_n1: N_Z must be > 0");
    return (n_tilde_Z_L / N_Z) * N_C;
}

double key_length(double n1, double e1ph, double n_t, double EZ, double f) {
    // e1ph >= 1/2 means the untagged bits carry no extractable privacy.
    const double e = std::min(e1ph, 0.5);
    const double secret = n1 * (1.0 - binary_entropy(e));
    const double correction = n_t * f * binary_entropy(EZ);
    return std::max(0.0, secret - correction);
}

SecurityBounds analyze(const ObservedCounts& counts,
                       const ProtocolParams& params) {
    params.validate();
    counts.validate();

    SecurityBounds out;
    const auto collapse = [&](const char* why) {
        out.e1ph_U = 1.0;
        out.N_f = 0.0;
        out.R = 0.0;
        out.diagnostic = why;
        return out;
    };

    const double mu = params.analysis_mu();

    if (!(counts.N_00 > 0.0)) return collapse("no vacuum windows observed");
    const VacuumYields y = vacuum_yields(counts);

    if (!(counts.N_X >= 1.0)) return collapse("no post-selected X-X pairs");
    if (!(counts.N_Z >= 1.0)) return collapse("no set-C pulses");
    const SubsetSizes sizes = subset_sizes(counts.N_X, counts.N_Z, mu);
    if (!(sizes.N_X > 0.0 && sizes.N_Z > 0.0))
        return collapse("matched subsets are empty");
    out.matched_N_X = sizes.N_X;
    out.matched_N_Z = sizes.N_Z;

    // Observed clicks trimmed proportionally to the matched subsets.
    const double s_X = sizes.N_X / counts.N_X;
    const double s_Z = sizes.N_Z / counts.N_Z;
    const double n_X0 = counts.n_X0 * s_X;
    const double n_X1 = counts.n_X1 * s_X;
    const double n_Z0 = counts.n_Z0 * s_Z;
    const double n_Z1 = counts.n_Z1 * s_Z;

    out.n_plus0_L = bound_n_plus0(n_X0, sizes.N_X, y.y00_0, mu);
    out.n_plus1_U = bound_n_plus1(n_X1, sizes.N_X, y.y00_1, mu);
    out.n_tilde_Z_L = bound_n_tilde_Z(n_Z0, n_Z1, sizes.N_Z, y.total(), mu);
    if (!(out.n_tilde_Z_L > 0.0))
        return collapse("single-photon Z bound collapsed");

    out.e1ph_U = bound_e1ph(n_X1, n_Z0, out.n_plus0_L, out.n_tilde_Z_L);
    out.n1_L = bound_n1(out.n_tilde_Z_L, sizes.N_Z, counts.N_C);

    if (!(counts.n_t > 0.0)) return collapse("no effective Z-Z events");
    out.EZ = counts.n_err_Z / counts.n_t;

    const double kept = 1.0 - params.test_fraction;
    out.N_f = key_length(out.n1_L * kept, out.e1ph_U, counts.n_t * kept,
                         out.EZ, params.f);
    out.R = out.N_f / counts.n_windows;
    return out;
}

GroundTruth scale_to_matched(const GroundTruth& gt,
                             const ObservedCounts& counts,
                             const SecurityBounds& bounds) {
    if (!(counts.N_X > 0.0) || !(counts.N_Z > 0.0))
        throw std::domain_error("scale_to_matched: empty pools");
    const double s_X = bounds.matched_N_X / counts.N_X;
    const double s_Z = bounds.matched_N_Z / counts.N_Z;
    GroundTruth out = gt;
    out.tilde_n_plus0 = gt.tilde_n_plus0 * s_X;
    out.tilde_n_plus1 = gt.tilde_n_plus1 * s_X;
    out.tilde_n_Z0 = gt.tilde_n_Z0 * s_Z;
    out.tilde_n_Z1 = gt.tilde_n_Z1 * s_Z;
    return out;
}

}  // namespace snsqkd
