#include "betalab/sine.hpp"

#include "betalab/rng.hpp"
#include "betalab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace betalab::sine {

using cplx = std::complex<double>;

namespace {

std::vector<double> build_grid(double t_end, long long steps, double delta0) {
    // geometric refinement on [delta0, t_end/10] (>= steps/2 points), uniform after
    const long long ng = steps / 2;
    const long long nu = steps - ng;
    std::vector<double> t;
    t.reserve(steps + 2);
    t.push_back(0.0);
    const double mid = t_end / 10.0;
    const double ratio = std::pow(mid / delta0, 1.0 / static_cast<double>(ng));
    double v = delta0;
    for (long long j = 0; j <= ng; ++j) {
        t.push_back(v);
        v *= ratio;
    }
    t.back() = mid;
    for (long long j = 1; j <= nu; ++j)
        t.push_back(mid + (t_end - mid) * static_cast<double>(j) / static_cast<double>(nu));
    t.back() = t_end;
    return t;
}

void validate(double beta, const std::vector<double>& lambdas, double t_end, long long steps) {
    if (!(beta > 0.0) || std::isinf(beta))
        throw std::invalid_argument("sine: beta must be positive and finite");
    if (!(t_end > 0.0)) throw std::invalid_argument("sine: t_end must be positive");
    if (steps < 1000) throw std::invalid_argument("sine: steps must be >= 1000");
    std::set<double> uniq(lambdas.begin(), lambdas.end());
    if (uniq.size() != lambdas.size())
        throw std::invalid_argument("sine: lambda list must not contain duplicates");
}

} // namespace

SinePath solve_sine(double beta, std::vector<double> lambdas, double t_end, long long steps,
                    std::uint64_t seed) {
    validate(beta, lambdas, t_end, steps);
    SinePath p;
    p.beta = beta;
    p.lambdas = std::move(lambdas);
    p.delta0 = t_end * 1e-6;
    p.t = build_grid(t_end, steps, p.delta0);
    const std::size_t M = p.t.size();
    p.omega.assign(p.lambdas.size(), std::vector<cplx>(M, cplx(0.0, 0.0)));
    p.dz_re.assign(M, 0.0);
    p.dz_im.assign(M, 0.0);
    SeqRng rng(CounterRng::derive_key(seed, 0x5ebe5ebeull));
    for (std::size_t j = 1; j < M; ++j) {
        const double t0 = p.t[j - 1], t1 = p.t[j];
        const double dt = t1 - t0;
        if (t0 < p.delta0) continue; // omega frozen at 0 on [0, delta0]
        const double sq = std::sqrt(dt);
        p.dz_re[j] = sq * rng.normal();
        p.dz_im[j] = sq * rng.normal();
        const cplx dZ(p.dz_re[j], p.dz_im[j]);
        const double diff = std::sqrt(2.0 / (beta * t0));
        // drift integrated exactly over the step: int pi/sqrt(t) dt = 2 pi d(sqrt t)
        const double drift = 2.0 * specfun::kPi * (std::sqrt(t1) - std::sqrt(t0));
        for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
            const cplx o = p.omega[i][j - 1];
            const cplx noise = diff * (1.0 - std::exp(cplx(0.0, -o.imag()))) * dZ;
            p.omega[i][j] = o + cplx(0.0, p.lambdas[i] * drift) + noise;
        }
    }
    return p;
}

double im_omega_on_noise(const SinePath& path, double lambda) {
    double im = 0.0;
    for (std::size_t j = 1; j < path.t.size(); ++j) {
        const double t0 = path.t[j - 1], t1 = path.t[j];
        if (t0 < path.delta0) continue;
        const double diff = std::sqrt(2.0 / (path.beta * t0));
        // Im of (1 - e^{-i a})(dx + i dy) = sin(a) dx + (1 - cos(a)) dy
        im += 2.0 * specfun::kPi * lambda * (std::sqrt(t1) - std::sqrt(t0)) +
              diff * (std::sin(im) * path.dz_re[j] + (1.0 - std::cos(im)) * path.dz_im[j]);
    }
    return im;
}

std::vector<double> sine_points(double beta, double window_end, std::uint64_t seed) {
    if (!(window_end > 0.0)) throw std::invalid_argument("sine: window_end must be positive");
    constexpr long long kSteps = 4000;
    SinePath path = solve_sine(beta, {0.0}, 1.0, kSteps, seed);
    SeqRng arng(CounterRng::derive_key(seed, 0xa1fa0ull));
    const double alpha = 2.0 * specfun::kPi * arng.uniform();

    // lambda -> Im omega_1(lambda) is non-decreasing pathwise on shared noise
    auto im_at = [&](double lam) { return im_omega_on_noise(path, lam); };

    std::vector<double> grid;
    for (double g = 0.0; g < window_end + 0.25; g += 0.25) grid.push_back(std::min(g, window_end));
    grid.back() = window_end;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = im_at(grid[i]);

    std::vector<double> points;
    const double top = vals.back() + alpha;
    for (long long k = 1; 2.0 * specfun::kPi * static_cast<double>(k) <= top; ++k) {
        const double level = 2.0 * specfun::kPi * static_cast<double>(k) - alpha;
        if (level < vals.front() || level > vals.back()) continue;
        // bracket on the grid, then bisect
        std::size_t i = 0;
        while (i + 1 < grid.size() && vals[i + 1] < level) ++i;
        double lo = grid[i], hi = grid[std::min(i + 1, grid.size() - 1)];
        if (hi <= lo) continue;
        for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (im_at(mid) < level)
                lo = mid;
            else
                hi = mid;
        }
        points.push_back(0.5 * (lo + hi));
    }
    std::sort(points.begin(), points.end());
    return points;
}

std::vector<double> zeta_eval(const SinePath& path, double alpha) {
    if (std::fabs(std::cos(alpha)) < 1e-8)
        throw std::invalid_argument("sine: zeta_eval rejects alpha too close to pi/2 mod pi");
    std::vector<double> out;
    out.reserve(path.lambdas.size());
    for (std::size_t i = 0; i < path.lambdas.size(); ++i) {
        // The polynomial-ratio exponent is omega/2: each point of the process
        // advances Im omega by 2 pi but flips the ratio's sign only once
        // (phase pi). The half factor keeps zeta consistent with both the
        // counting normalization and the finite-N ratio law.
        const cplx w = 0.5 * path.at_end(i);
        out.push_back(std::real(std::exp(cplx(0.0, alpha) + w)) / std::cos(alpha));
    }
    return out;
}

SinePath solve_sine_timechanged(double beta, std::vector<double> lambdas, double t_end,
                                long long steps, std::uint64_t seed) {
    validate(beta, lambdas, t_end, steps);
    SinePath p;
    p.beta = beta;
    p.lambdas = std::move(lambdas);
    p.delta0 = t_end * 1e-6;
    p.t = build_grid(t_end, steps, p.delta0);
    const std::size_t M = p.t.size();
    p.omega.assign(p.lambdas.size(), std::vector<cplx>(M, cplx(0.0, 0.0)));
    p.dz_re.assign(M, 0.0);
    p.dz_im.assign(M, 0.0);
    SeqRng rng(CounterRng::derive_key(seed, 0x7c4a9ull));
    for (std::size_t j = 1; j < M; ++j) {
        const double t0 = p.t[j - 1], t1 = p.t[j];
        const double dt = t1 - t0;
        if (t0 < p.delta0) continue;
        const double sq = std::sqrt(dt);
        p.dz_re[j] = sq * rng.normal();
        p.dz_im[j] = sq * rng.normal();
        const cplx dZ(p.dz_re[j], p.dz_im[j]);
        const double diff = 2.0 / std::sqrt(beta * t0);
        for (std::size_t i = 0; i < p.lambdas.size(); ++i) {
            const cplx o = p.omega[i][j - 1];
            p.omega[i][j] = o + cplx(0.0, p.lambdas[i] * dt) +
                            diff * (1.0 - std::exp(cplx(0.0, -o.imag()))) * dZ;
        }
    }
    return p;
}

} // namespace betalab::sine
