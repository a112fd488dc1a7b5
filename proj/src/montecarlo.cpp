#include "snsqkd/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <vector>

namespace snsqkd {

namespace {

struct Tally {
    std::uint64_t N_X = 0, n_X0 = 0, n_X1 = 0;
    std::uint64_t N_C = 0, n_Z0 = 0, n_Z1 = 0;
    std::uint64_t n_t = 0, n_err_Z = 0;
    std::uint64_t N_00 = 0, k_00_0 = 0, k_00_1 = 0;
    std::uint64_t gt_plus0 = 0, gt_plus1 = 0, gt_Z0 = 0, gt_Z1 = 0;

    void merge(const Tally& o) {
        N_X += o.N_X; n_X0 += o.n_X0; n_X1 += o.n_X1;
        N_C += o.N_C; n_Z0 += o.n_Z0; n_Z1 += o.n_Z1;
        n_t += o.n_t; n_err_Z += o.n_err_Z;
        N_00 += o.N_00; k_00_0 += o.k_00_0; k_00_1 += o.k_00_1;
        gt_plus0 += o.gt_plus0; gt_plus1 += o.gt_plus1;
        gt_Z0 += o.gt_Z0; gt_Z1 += o.gt_Z1;
    }
};

struct Detected {
    int d0 = 0;
    int d1 = 0;
};

// Each source photon independently survives the arm loss and is routed
// to D0 with probability q0. Thinning a Poisson source this way
// reproduces the coherent-state detector marginals exactly.
inline Detected propagate(int n_photons, double eta, double q0,
                          std::mt19937_64& rng,
                          std::uniform_real_distribution<double>& unit) {
    Detected det;
    for (int i = 0; i < n_photons; ++i) {
        if (unit(rng) >= eta) continue;
        if (unit(rng) < q0) ++det.d0; else ++det.d1;
    }
    return det;
}

struct BatchContext {
    const ProtocolParams& params;
    const ChannelModel& ch;
    const McOptions& opt;
    double eta;       // arm transmittance
    double vis;       // 1 - 2 E_a
};

void run_batch(const BatchContext& ctx, std::uint64_t batch_index,
               std::uint64_t count, Tally& tally) {
    const auto lo32 = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi32 = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo32(ctx.opt.seed), hi32(ctx.opt.seed),
                      lo32(batch_index), hi32(batch_index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> pois_pair(ctx.params.mu);
    std::poisson_distribution<int> pois_single(0.5 * ctx.params.mu);

    const double p_d = ctx.ch.p_d;

    for (std::uint64_t i = 0; i < count; ++i) {
        const WindowOutcome w = sample_window(ctx.params, rng);
        const WindowClass cls = classify_window(w);
        if (cls == WindowClass::MixedBasis) continue;

        if (cls == WindowClass::ZzNoneSent) {
            ++tally.N_00;
            const bool dark0 = unit(rng) < p_d;
            const bool dark1 = unit(rng) < p_d;
            if (dark0 != dark1) {
                ++tally.n_t;
                ++tally.n_err_Z;
                if (dark0) ++tally.k_00_0; else ++tally.k_00_1;
            }
            continue;
        }

        bool accepted_xx = false;
        if (cls == WindowClass::XxPair) {
            accepted_xx = phase_slice_accept(w.delta_a, w.delta_b, ctx.params.lambda);
            if (!accepted_xx) continue;
        }

        const bool both_sent = w.alice_sent && w.bob_sent;
        const int n_src = ctx.opt.force_single_photon
                              ? 1
                              : (both_sent ? pois_pair(rng) : pois_single(rng));
        // Equal intensities interfere with visibility V; a lone sender
        // splits evenly.
        const double q0 =
            both_sent ? 0.5 * (1.0 + ctx.vis * std::cos(w.delta_a - w.delta_b))
                      : 0.5;
        const Detected det = propagate(n_src, ctx.eta, q0, rng, unit);
        const bool click0 = det.d0 > 0 || unit(rng) < p_d;
        const bool click1 = det.d1 > 0 || unit(rng) < p_d;
        const bool d0_only = click0 && !click1;
        const bool d1_only = click1 && !click0;

        switch (cls) {
            case WindowClass::XxPair:
                ++tally.N_X;
                if (d0_only) {
                    ++tally.n_X0;
                    if (n_src == 1) ++tally.gt_plus0;
                } else if (d1_only) {
                    ++tally.n_X1;
                    if (n_src == 1) ++tally.gt_plus1;
                }
                break;
            case WindowClass::SetCAliceSent:
            case WindowClass::SetCBobSent:
                ++tally.N_C;
                if (d0_only) {
                    ++tally.n_Z0;
                    ++tally.n_t;
                    if (n_src == 1) ++tally.gt_Z0;
                } else if (d1_only) {
                    ++tally.n_Z1;
                    ++tally.n_t;
                    if (n_src == 1) ++tally.gt_Z1;
                }
                break;
            case WindowClass::ZzBothSent:
                if (d0_only || d1_only) {
                    ++tally.n_t;
                    ++tally.n_err_Z;
                }
                break;
            default:
                break;
        }
    }
}

}  // namespace

McResult monte_carlo_observables(const ProtocolParams& params,
                                 const ChannelModel& ch,
                                 const McOptions& options) {
    params.validate();
    ch.validate();
    if (options.batch_size == 0)
        throw std::invalid_argument("monte carlo: batch_size must be > 0");

    const std::uint64_t total = params.n_windows;
    const std::uint64_t batch = options.batch_size;
    const std::uint64_t n_batches = (total + batch - 1) / batch;

    BatchContext ctx{params, ch, options, ch.arm_transmittance(), ch.visibility()};

    unsigned threads = options.threads != 0 ? options.threads
                                            : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (threads > n_batches) threads = static_cast<unsigned>(n_batches);

    Tally global;
    std::mutex merge_mutex;
    std::atomic<std::uint64_t> next{0};

    const auto worker = [&] {
        Tally local;
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_batches) break;
            const std::uint64_t begin = b * batch;
            const std::uint64_t count = std::min(batch, total - begin);
            run_batch(ctx, b, count, local);
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        global.merge(local);
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    McResult result;
    ObservedCounts& c = result.counts;
    c.n_windows = static_cast<double>(total);
    c.N_X = static_cast<double>(global.N_X);
    c.n_X0 = static_cast<double>(global.n_X0);
    c.n_X1 = static_cast<double>(global.n_X1);
    c.N_C = static_cast<double>(global.N_C);
    c.N_Z = c.N_C;
    c.n_Z0 = static_cast<double>(global.n_Z0);
    c.n_Z1 = static_cast<double>(global.n_Z1);
    c.n_t = static_cast<double>(global.n_t);
    c.n_err_Z = static_cast<double>(global.n_err_Z);
    c.N_00 = static_cast<double>(global.N_00);
    c.k_00_0 = static_cast<double>(global.k_00_0);
    c.k_00_1 = static_cast<double>(global.k_00_1);

    GroundTruth& g = result.truth;
    g.tilde_n_plus0 = static_cast<double>(global.gt_plus0);
    g.tilde_n_plus1 = static_cast<double>(global.gt_plus1);
    g.tilde_n_Z0 = static_cast<double>(global.gt_Z0);
    g.tilde_n_Z1 = static_cast<double>(global.gt_Z1);
    g.true_n1 = g.tilde_n_Z0 + g.tilde_n_Z1;
    return result;
}

}  // namespace snsqkd
