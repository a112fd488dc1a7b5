#pragma once

#include <complex>

namespace snsqkd {

// Density operator on the single-photon two-mode subspace spanned by
// {|01>, |10>}. The two modes are orthogonal in photon-number space, so
// every source state relevant to the equivalence checks lives here.
//
// Layout: m[r][c], basis index 0 = |01> (Bob's mode), 1 = |10> (Alice's).
struct Density2 {
    std::complex<double> m[2][2]{};

    static Density2 zero();
    // |psi><psi| for psi = c0|01> + c1|10>, normalized internally.
    static Density2 pure(std::complex<double> c0, std::complex<double> c1);

    Density2& add_scaled(const Density2& other, double weight);

    double trace() const;
    // Largest violation of Hermiticity / unit trace / positivity;
    // 0 for a valid state up to rounding.
    double validity_defect() const;
};

// Trace distance (1/2)||a - b||_1, in [0,1] for valid states.
double density_distance(const Density2& a, const Density2& b);

}  // namespace snsqkd
