#include "snsqkd/density.hpp"

#include <algorithm>
#include <cmath>

namespace snsqkd {

namespace {

// Eigenvalues of a Hermitian 2x2 [[p, q], [conj(q), r]].
void hermitian_eigenvalues(const Density2& d, double& lo, double& hi) {
    const double p = d.m[0][0].real();
    const double r = d.m[1][1].real();
    const double mid = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), std::abs(d.m[0][1]));
    lo = mid - rad;
    hi = mid + rad;
}

}  // namespace

Density2 Density2::zero() { return Density2{}; }

Density2 Density2::pure(std::complex<double> c0, std::complex<double> c1) {
    const double norm2 = std::norm(c0) + std::norm(c1);
    Density2 d;
    if (norm2 == 0.0) return d;
    d.m[0][0] = std::norm(c0) / norm2;
    d.m[1][1] = std::norm(c1) / norm2;
    d.m[0][1] = c0 * std::conj(c1) / norm2;
    d.m[1][0] = std::conj(d.m[0][1]);
    return d;
}

Density2& Density2::add_scaled(const Density2& other, double weight) {
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m[r][c] += weight * other.m[r][c];
    return *this;
}

double Density2::trace() const { return (m[0][0] + m[1][1]).real(); }

double Density2::validity_defect() const {
    double defect = std::abs(m[0][1] - std::conj(m[1][0]));
    defect = std::max(defect, std::abs(m[0][0].imag()));
    defect = std::max(defect, std::abs(m[1][1].imag()));
    defect = std::max(defect, std::abs(trace() - 1.0));
    double lo, hi;
    hermitian_eigenvalues(*this, lo, hi);
    defect = std::max(defect, std::max(0.0, -lo));
    (void)hi;
    return defect;
}

double density_distance(const Density2& a, const Density2& b) {
    Density2 diff = a;
    diff.add_scaled(b, -1.0);
    double lo, hi;
    hermitian_eigenvalues(diff, lo, hi);
    return 0.5 * (std::abs(lo) + std::abs(hi));
}

}  // namespace snsqkd
