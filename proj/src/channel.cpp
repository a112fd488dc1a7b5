#include "snsqkd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snsqkd/math.hpp"

namespace snsqkd {

double ChannelModel::channel_transmittance() const {
    return transmittance(length_km, loss_exponent_per_km);
}

double ChannelModel::arm_transmittance() const {
    // Each arm spans half the distance: sqrt of the end-to-end loss.
    return eta_d * transmittance(0.5 * length_km, loss_exponent_per_km);
}

void ChannelModel::validate() const {
    if (!(length_km >= 0.0)) throw std::invalid_argument("channel: negative length");
    if (!(loss_exponent_per_km >= 0.0))
        throw std::invalid_argument("channel: negative loss exponent");
    if (!(eta_d >= 0.0 && eta_d <= 1.0))
        throw std::invalid_argument("channel: eta_d outside [0,1]");
    if (!(p_d >= 0.0 && p_d <= 1.0))
        throw std::invalid_argument("channel: p_d outside [0,1]");
    if (!(e_a >= 0.0 && e_a <= 0.5))
        throw std::invalid_argument("channel: e_a outside [0,0.5]");
}

ChannelModel ChannelModel::paper_channel(double length_km, double e_a) {
    ChannelModel ch;
    ch.length_km = length_km;
    ch.loss_exponent_per_km = 0.01;  // 0.1 dB/km
    ch.e_a = e_a;
    return ch;
}

ChannelModel ChannelModel::standard_fiber(double length_km, double e_a) {
    ChannelModel ch;
    ch.length_km = length_km;
    ch.loss_exponent_per_km = 0.02;  // 0.2 dB/km
    ch.e_a = e_a;
    return ch;
}

double channel_transmittance(double length_km, const ChannelModel& model) {
    return transmittance(length_km, model.loss_exponent_per_km);
}

namespace {

// No-click probability (1 - p_d) e^{-intensity} and its complement,
// both accurate when the result is dominated by tiny terms.
inline double no_click(double intensity, double p_d) {
    return std::exp(std::log1p(-p_d) - intensity);
}

inline double click(double intensity, double p_d) {
    return -std::expm1(std::log1p(-p_d) - intensity);
}

struct DetectorMeans {
    double d0 = 0;
    double d1 = 0;
};

inline DetectorMeans detector_means(double i_a, double i_b, double delta,
                                    const ChannelModel& ch) {
    const double eta = ch.arm_transmittance();
    const double direct = 0.5 * (i_a + i_b) * eta;
    const double cross = ch.visibility() * std::sqrt(i_a * i_b) * eta * std::cos(delta);
    return {direct + cross, direct - cross};
}

// Probability that exactly D0 (resp. D1) clicks.
struct EffectiveProbs {
    double d0_only = 0;
    double d1_only = 0;
};

inline EffectiveProbs effective_probs(double i_a, double i_b, double delta,
                                      const ChannelModel& ch) {
    const DetectorMeans m = detector_means(i_a, i_b, delta, ch);
    const double c0 = click(m.d0, ch.p_d), q0 = no_click(m.d0, ch.p_d);
    const double c1 = click(m.d1, ch.p_d), q1 = no_click(m.d1, ch.p_d);
    return {c0 * q1, c1 * q0};
}

}  // namespace

ClickProbabilities click_probabilities(double i_a, double i_b, double delta,
                                       const ChannelModel& ch) {
    if (i_a < 0.0 || i_b < 0.0)
        throw std::domain_error("click_probabilities: negative intensity");
    const DetectorMeans m = detector_means(i_a, i_b, delta, ch);
    return {click(m.d0, ch.p_d), click(m.d1, ch.p_d)};
}

void ObservedCounts::validate() const {
    const double tallies[] = {n_windows, N_X,  n_X0,   n_X1, N_Z,    n_Z0,  n_Z1,
                              n_t,       n_err_Z, N_C, N_00, k_00_0, k_00_1};
    for (double t : tallies) {
        if (!(t >= 0.0)) throw std::invalid_argument("counts: negative tally");
    }
    if (n_X0 + n_X1 > N_X * (1.0 + 1e-9) + 1e-9)
        throw std::invalid_argument("counts: X clicks exceed pool");
    if (n_Z0 + n_Z1 > N_Z * (1.0 + 1e-9) + 1e-9)
        throw std::invalid_argument("counts: Z clicks exceed pool");
    if (n_err_Z > n_t * (1.0 + 1e-9) + 1e-9)
        throw std::invalid_argument("counts: errors exceed total bits");
}

ObservedCounts expected_observables(const ProtocolParams& params,
                                    const ChannelModel& ch) {
    params.validate();
    ch.validate();

    const double N = static_cast<double>(params.n_windows);
    const double px = params.p_x, pz = params.p_z();
    const double eps = params.epsilon;
    const double half_mu = 0.5 * params.mu;
    const double pi = std::numbers::pi;

    ObservedCounts out;
    out.n_windows = N;

    // --- X-X pairs, post-selected on the phase slice -------------------
    // Accepted delta is uniform on [-theta*, theta*]; the integrands are
    // even, so average over [0, theta*].
    const double theta = std::acos(1.0 - params.lambda);
    const double p_slice = theta / pi;
    out.N_X = N * px * px * p_slice;
    if (theta > 0.0) {
        const Quadrature& q = gauss_legendre(64);
        double sum0 = 0.0, sum1 = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const double d = 0.5 * theta * (1.0 + q.nodes[i]);
            const EffectiveProbs p = effective_probs(half_mu, half_mu, d, ch);
            sum0 += q.weights[i] * p.d0_only;
            sum1 += q.weights[i] * p.d1_only;
        }
        out.n_X0 = out.N_X * 0.5 * sum0;  // weights sum to 2
        out.n_X1 = out.N_X * 0.5 * sum1;
    }

    // --- Z-Z windows ----------------------------------------------------
    const double p_zz = pz * pz;
    out.N_C = N * p_zz * 2.0 * eps * (1.0 - eps);
    out.N_Z = out.N_C;  // the full set C is the pool for c_Z

    // One sender: no interference term, both detectors identical.
    const EffectiveProbs single = effective_probs(half_mu, 0.0, 0.0, ch);
    out.n_Z0 = out.N_C * single.d0_only;
    out.n_Z1 = out.N_C * single.d1_only;

    // Both senders: the pair phase is never announced; average the
    // effective-event probability over the whole circle.
    const double N_bb = N * p_zz * eps * eps;
    const Quadrature& qb = gauss_legendre(64);
    double p_both = 0.0;
    for (std::size_t i = 0; i < qb.nodes.size(); ++i) {
        const double d = 0.5 * pi * (1.0 + qb.nodes[i]);
        const EffectiveProbs p = effective_probs(half_mu, half_mu, d, ch);
        p_both += qb.weights[i] * (p.d0_only + p.d1_only);
    }
    p_both *= 0.5;

    // Neither sender: dark counts only.
    out.N_00 = N * p_zz * (1.0 - eps) * (1.0 - eps);
    const double p_dark_only = ch.p_d * (1.0 - ch.p_d);
    out.k_00_0 = out.N_00 * p_dark_only;
    out.k_00_1 = out.N_00 * p_dark_only;

    out.n_t = out.n_Z0 + out.n_Z1 + N_bb * p_both + out.k_00_0 + out.k_00_1;
    // Set-C bits agree by construction; both-sent and none-sent disagree.
    out.n_err_Z = N_bb * p_both + out.k_00_0 + out.k_00_1;

    return out;
}

}  // namespace snsqkd
