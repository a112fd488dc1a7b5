#pragma once

#include <cstdint>
#include <utility>

#include "snsqkd/channel.hpp"

namespace snsqkd {

struct McOptions {
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = hardware concurrency
    // Windows per RNG substream. Fixed batch decomposition keeps the
    // output identical for any thread count.
    std::uint64_t batch_size = 1u << 20;
    // Emit exactly one photon per sent pulse instead of the Poisson
    // mixture (single-photon oracle runs).
    bool force_single_photon = false;
};

struct McResult {
    ObservedCounts counts;
    GroundTruth truth;
};

// Samples params.n_windows windows, propagates photons through loss,
// interference and misalignment, applies dark counts, and tallies both
// the observable counts and the photon-number ground truth. Marginal
// click statistics match click_probabilities() exactly (Poisson
// thinning). Identical seed gives bit-identical results regardless of
// the worker count.
McResult monte_carlo_observables(const ProtocolParams& params,
                                 const ChannelModel& ch,
                                 const McOptions& options);

inline McResult monte_carlo_observables(const ProtocolParams& params,
                                        const ChannelModel& ch,
                                        std::uint64_t seed) {
    McOptions opt;
    opt.seed = seed;
    return monte_carlo_observables(params, ch, opt);
}

}  // namespace snsqkd
