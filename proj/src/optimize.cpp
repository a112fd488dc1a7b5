#include "snsqkd/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace snsqkd {

void SearchSpace::validate() const {
    if (!(mu_min > 0.0 && mu_min <= mu_max && mu_max <= 1.5))
        throw std::invalid_argument("search space: mu interval invalid");
    if (!(eps_min > 0.0 && eps_min <= eps_max && eps_max <= 0.5))
        throw std::invalid_argument("search space: epsilon interval invalid");
    if (!(lambda_min > 0.0 && lambda_min <= lambda_max && lambda_max <= 2.0))
        throw std::invalid_argument("search space: lambda interval invalid");
    if (!(px_min > 0.0 && px_min <= px_max && px_max <= 0.5))
        throw std::invalid_argument("search space: p_x interval invalid");
    if (grid_points < 2)
        throw std::invalid_argument("search space: need at least 2 grid points");
}

namespace {

// Parameter tuple in optimizer coordinates: mu and epsilon move on a log
// scale, lambda and p_x linearly.
struct Point {
    std::array<double, 4> t{};  // {ln mu, ln eps, lambda, p_x}

    double mu() const { return std::exp(t[0]); }
    double eps() const { return std::exp(t[1]); }
    double lambda() const { return t[2]; }
    double px() const { return t[3]; }
};

struct Box {
    std::array<double, 4> lo{}, hi{};

    void clamp(Point& p) const {
        for (int i = 0; i < 4; ++i) p.t[i] = std::clamp(p.t[i], lo[i], hi[i]);
    }
};

ProtocolParams make_params(const Point& p, const OptimizeOptions& opt) {
    ProtocolParams params;
    params.mu = p.mu();
    params.epsilon = p.eps();
    params.lambda = p.lambda();
    params.p_x = p.px();
    params.f = opt.f;
    params.n_windows = opt.n_windows;
    params.test_fraction = opt.test_fraction;
    params.mu_M = opt.mu_M;
    return params;
}

OptimizeResult evaluate(const Point& p, const ChannelModel& ch,
                        const OptimizeOptions& opt) {
    OptimizeResult r;
    r.params = make_params(p, opt);
    r.bounds = analyze(expected_observables(r.params, ch), r.params);
    return r;
}

std::vector<double> grid_axis(double lo, double hi, unsigned n, bool log_scale) {
    std::vector<double> axis(n);
    if (log_scale) {
        const double l0 = std::log(lo), l1 = std::log(hi);
        for (unsigned i = 0; i < n; ++i)
            axis[i] = std::exp(l0 + (l1 - l0) * i / (n - 1.0));
    } else {
        for (unsigned i = 0; i < n; ++i) axis[i] = lo + (hi - lo) * i / (n - 1.0);
    }
    return axis;
}

// Bounded Nelder-Mead on the transformed coordinates. Deterministic:
// no randomness, vertices clamped into the box.
Point nelder_mead(Point start, const Box& box, const ChannelModel& ch,
                  const OptimizeOptions& opt) {
    constexpr int dim = 4;
    const auto f = [&](const Point& p) { return -evaluate(p, ch, opt).bounds.R; };

    std::array<Point, dim + 1> simplex;
    simplex[0] = start;
    for (int i = 0; i < dim; ++i) {
        Point p = start;
        const double span = box.hi[i] - box.lo[i];
        double step = 0.05 * span;
        if (step == 0.0) step = 1e-6;
        p.t[i] = p.t[i] + step <= box.hi[i] ? p.t[i] + step : p.t[i] - step;
        box.clamp(p);
        simplex[i + 1] = p;
    }
    std::array<double, dim + 1> value;
    for (int i = 0; i <= dim; ++i) value[i] = f(simplex[i]);

    std::array<int, dim + 1> order;
    for (unsigned iter = 0; iter < opt.refine_max_iter; ++iter) {
        for (int i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return value[a] < value[b]; });
        const int best = order[0], worst = order[dim], second = order[dim - 1];

        const double spread = std::abs(value[worst] - value[best]);
        if (spread <= opt.refine_rel_tol * std::max(std::abs(value[best]), 1e-300))
            break;

        Point centroid;
        for (int i = 0; i < dim; ++i) {
            double s = 0.0;
            for (int j = 0; j <= dim; ++j)
                if (j != worst) s += simplex[j].t[i];
            centroid.t[i] = s / dim;
        }

        const auto blend = [&](double coeff) {
            Point p;
            for (int i = 0; i < dim; ++i)
                p.t[i] = centroid.t[i] + coeff * (simplex[worst].t[i] - centroid.t[i]);
            box.clamp(p);
            return p;
        };

        const Point reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < value[best]) {
            const Point expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                value[worst] = fe;
            } else {
                simplex[worst] = reflected;
                value[worst] = fr;
            }
        } else if (fr < value[second]) {
            simplex[worst] = reflected;
            value[worst] = fr;
        } else {
            const Point contracted = blend(0.5);
            const double fc = f(contracted);
            if (fc < value[worst]) {
                simplex[worst] = contracted;
                value[worst] = fc;
            } else {
                for (int j = 0; j <= dim; ++j) {
                    if (j == best) continue;
                    for (int i = 0; i < dim; ++i)
                        simplex[j].t[i] =
                            simplex[best].t[i] + 0.5 * (simplex[j].t[i] - simplex[best].t[i]);
                    box.clamp(simplex[j]);
                    value[j] = f(simplex[j]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (value[i] < value[best]) best = i;
    return simplex[best];
}

}  // namespace

OptimizeResult optimize(const ChannelModel& ch, const SearchSpace& space,
                        const OptimizeOptions& options) {
    space.validate();
    ch.validate();

    double mu_hi = space.mu_max;
    if (options.mu_M) mu_hi = std::min(mu_hi, *options.mu_M);
    if (!(space.mu_min <= mu_hi))
        throw std::invalid_argument("optimize: mu_M below the mu search range");

    const unsigned n = space.grid_points;
    const auto mu_axis = grid_axis(space.mu_min, mu_hi, n, true);
    const auto eps_axis = grid_axis(space.eps_min, space.eps_max, n, true);
    const auto lam_axis = grid_axis(space.lambda_min, space.lambda_max, n, false);
    const auto px_axis = grid_axis(space.px_min, space.px_max, n, false);

    const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
    std::vector<double> rate(total);

    // Index order is lexicographic in (mu, eps, lambda, p_x), so the
    // first argmax below is the smallest optimal tuple.
    const auto point_at = [&](std::size_t idx) {
        Point p;
        p.t[3] = px_axis[idx % n];
        idx /= n;
        p.t[2] = lam_axis[idx % n];
        idx /= n;
        p.t[1] = std::log(eps_axis[idx % n]);
        idx /= n;
        p.t[0] = std::log(mu_axis[idx]);
        return p;
    };

    unsigned threads = options.threads != 0 ? options.threads
                                            : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

    const auto scan = [&](unsigned tid) {
        for (std::size_t idx = tid; idx < total; idx += threads)
            rate[idx] = evaluate(point_at(idx), ch, options).bounds.R;
    };
    if (threads == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(scan, t);
        for (auto& t : pool) t.join();
    }

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < total; ++i)
        if (rate[i] > rate[best_idx]) best_idx = i;

    Box box;
    box.lo = {std::log(space.mu_min), std::log(space.eps_min), space.lambda_min,
              space.px_min};
    box.hi = {std::log(mu_hi), std::log(space.eps_max), space.lambda_max,
              space.px_max};

    const Point grid_best = point_at(best_idx);
    OptimizeResult result = evaluate(grid_best, ch, options);

    if (result.bounds.R > 0.0) {
        const Point refined = nelder_mead(grid_best, box, ch, options);
        OptimizeResult refined_result = evaluate(refined, ch, options);
        if (refined_result.bounds.R > result.bounds.R) result = refined_result;
    }
    return result;
}

std::vector<SweepRow> sweep(const std::vector<double>& distances_km,
                            const ChannelModel& channel_template,
                            const SearchSpace& space,
                            const OptimizeOptions& options) {
    std::vector<SweepRow> rows;
    rows.reserve(distances_km.size());
    for (double L : distances_km) {
        ChannelModel ch = channel_template;
        ch.length_km = L;
        OptimizeResult r = optimize(ch, space, options);
        rows.push_back({L, r.params, r.bounds});
    }
    return rows;
}

}  // namespace snsqkd
