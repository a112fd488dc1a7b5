#include "snsqkd/math.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace snsqkd {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    // log2(1-x) via log1p keeps precision for x near 0.
    const double log2e = std::numbers::log2e;
    return -x * std::log2(x) - (1.0 - x) * std::log1p(-x) * log2e;
}

double poisson_pmf(long long k, double mu) {
    if (k < 0) throw std::domain_error("poisson_pmf: negative k");
    if (mu < 0.0) throw std::domain_error("poisson_pmf: negative mu");
    if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(mu) - mu - std::lgamma(kd + 1.0));
}

double transmittance(double length_km, double exponent_per_km) {
    if (length_km < 0.0) throw std::domain_error("transmittance: negative length");
    return std::pow(10.0, -exponent_per_km * length_km);
}

namespace {

Quadrature make_gauss_legendre(std::size_t n) {
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
        // Tricomi-style initial guess, then Newton on P_n.
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double jf = static_cast<double>(j);
                const double p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = x;
        q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace

const Quadrature& gauss_legendre(std::size_t n) {
    if (n == 0) throw std::domain_error("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<std::size_t, Quadrature> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t n) {
    const Quadrature& q = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        sum += q.weights[i] * f(mid + half * q.nodes[i]);
    }
    return sum * half;
}

}  // namespace snsqkd
