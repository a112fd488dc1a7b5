#pragma once

#include <vector>

#include "snsqkd/security.hpp"

namespace snsqkd {

// Box constraints and grid resolution for the free protocol parameters.
// mu and epsilon are scanned log-spaced, lambda and p_x linearly.
struct SearchSpace {
    double mu_min = 1e-4, mu_max = 1.5;
    double eps_min = 1e-3, eps_max = 0.5;
    double lambda_min = 0.05, lambda_max = 2.0;
    double px_min = 0.025, px_max = 0.5;
    unsigned grid_points = 20;

    void validate() const;
};

struct OptimizeResult {
    ProtocolParams params;
    SecurityBounds bounds;
};

struct OptimizeOptions {
    unsigned threads = 0;       // 0 = hardware concurrency
    double refine_rel_tol = 1e-4;
    unsigned refine_max_iter = 200;
    std::uint64_t n_windows = 1'000'000'000'000ULL;
    double f = 1.16;
    double test_fraction = 0.0;
    std::optional<double> mu_M;
};

// Coarse grid scan over the search space followed by a bounded
// Nelder-Mead refinement started at the best grid point. The returned
// rate is never below the best grid value, and identical inputs give
// identical results for any thread count (ties break toward the
// lexicographically smallest parameter tuple).
OptimizeResult optimize(const ChannelModel& ch, const SearchSpace& space,
                        const OptimizeOptions& options = {});

struct SweepRow {
    double length_km = 0;
    ProtocolParams params;
    SecurityBounds bounds;
};

// Per-distance optimization. Rows come back in input order and zero-rate
// distances are kept.
std::vector<SweepRow> sweep(const std::vector<double>& distances_km,
                            const ChannelModel& channel_template,
                            const SearchSpace& space,
                            const OptimizeOptions& options = {});

}  // namespace snsqkd
