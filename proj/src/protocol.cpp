#include "snsqkd/protocol.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "snsqkd/density.hpp"

namespace snsqkd {

void ProtocolParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("params: mu must be > 0");
    // epsilon = 0 is allowed as a degenerate simulation point (nothing is
    // ever sent in Z windows); key extraction then collapses downstream.
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("params: epsilon must be in [0,1]");
    if (!(p_x >= 0.0 && p_x < 1.0))
        throw std::invalid_argument("params: p_x must be in [0,1)");
    if (!(lambda > 0.0 && lambda <= 2.0))
        throw std::invalid_argument("params: lambda must be in (0,2]");
    if (!(f >= 1.0)) throw std::invalid_argument("params: f must be >= 1");
    if (n_windows == 0) throw std::invalid_argument("params: n_windows must be > 0");
    if (mu_M && !(*mu_M >= mu))
        throw std::invalid_argument("params: mu_M must be >= mu");
    if (!(test_fraction >= 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("params: test_fraction must be in [0,1)");
}

WindowOutcome sample_window(const ProtocolParams& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    WindowOutcome w;
    w.alice_basis = unit(rng) < params.p_x ? Basis::X : Basis::Z;
    w.bob_basis = unit(rng) < params.p_x ? Basis::X : Basis::Z;
    // X-window parties send unconditionally.
    w.alice_sent = w.alice_basis == Basis::X || unit(rng) < params.epsilon;
    w.bob_sent = w.bob_basis == Basis::X || unit(rng) < params.epsilon;
    w.rho_a = phase(rng);
    w.rho_b = phase(rng);
    w.delta_a = phase(rng);
    w.delta_b = phase(rng);
    return w;
}

WindowClass classify_window(const WindowOutcome& w) {
    if (w.alice_basis != w.bob_basis) return WindowClass::MixedBasis;
    if (w.alice_basis == Basis::X) return WindowClass::XxPair;
    if (w.alice_sent && w.bob_sent) return WindowClass::ZzBothSent;
    if (w.alice_sent) return WindowClass::SetCAliceSent;
    if (w.bob_sent) return WindowClass::SetCBobSent;
    return WindowClass::ZzNoneSent;
}

bool phase_slice_accept(double delta_a, double delta_b, double lambda) {
    return 1.0 - std::cos(delta_a - delta_b) <= std::abs(lambda);
}

double slice_acceptance_probability(double lambda) {
    if (!(lambda > 0.0 && lambda <= 2.0))
        throw std::domain_error("slice_acceptance_probability: lambda outside (0,2]");
    return std::acos(1.0 - lambda) / std::numbers::pi;
}

int bit_value(const WindowOutcome& w, Party party) {
    if (w.alice_basis != Basis::Z || w.bob_basis != Basis::Z)
        throw std::logic_error("bit_value: window is not a Z-Z window");
    if (party == Party::Alice) return w.alice_sent ? 1 : 0;
    return w.bob_sent ? 0 : 1;
}

double SourceEquivalence::max_deviation() const {
    return mixture_distance > unitarity_deviation ? mixture_distance
                                                  : unitarity_deviation;
}

SourceEquivalence check_source_equivalence(double rho_a, double rho_b) {
    using namespace std::complex_literals;
    const std::complex<double> ea = std::exp(1i * rho_a);
    const std::complex<double> eb = std::exp(1i * rho_b);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // x~+- = (e^{i rho_b} |z0> +- e^{i rho_a} |z1>) / sqrt(2)
    Density2 mix_x = Density2::zero();
    mix_x.add_scaled(Density2::pure(eb * inv_sqrt2, ea * inv_sqrt2), 0.5);
    mix_x.add_scaled(Density2::pure(eb * inv_sqrt2, -ea * inv_sqrt2), 0.5);

    Density2 mix_z = Density2::zero();
    mix_z.add_scaled(Density2::pure(1.0, 0.0), 0.5);
    mix_z.add_scaled(Density2::pure(0.0, 1.0), 0.5);

    SourceEquivalence result;
    result.mixture_distance = density_distance(mix_x, mix_z);

    // Map |z_k> -> e^{i delta_k} |Z_k> is diag(e^{i d0}, e^{i d1});
    // U^dag U - I should vanish identically.
    const std::complex<double> u00 = eb, u11 = ea;
    const double dev00 = std::abs(std::conj(u00) * u00 - 1.0);
    const double dev11 = std::abs(std::conj(u11) * u11 - 1.0);
    result.unitarity_deviation = dev00 > dev11 ? dev00 : dev11;
    return result;
}

}  // namespace snsqkd
