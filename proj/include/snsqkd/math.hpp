#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace snsqkd {

// Binary entropy in bits, H(x) = -x log2 x - (1-x) log2(1-x).
// Endpoints 0 and 1 return 0 (limit value). Throws std::domain_error
// outside [0,1].
double binary_entropy(double x);

// Poisson probability mass e^{-mu} mu^k / k!. Throws std::domain_error
// for mu < 0 or k < 0. Evaluated in log space so large k stays finite.
double poisson_pmf(long long k, double mu);

// Power-of-ten channel transmittance 10^{-exponent_per_km * L}.
// exponent_per_km is in decades per km (0.2 dB/km fiber = 0.02).
double transmittance(double length_km, double exponent_per_km);

struct Quadrature {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre nodes/weights of order n (Newton on the Legendre
// recurrence). Results for a given n are cached.
const Quadrature& gauss_legendre(std::size_t n);

// Integral of f over [a, b] with order-n Gauss-Legendre.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t n = 32);

}  // namespace snsqkd
