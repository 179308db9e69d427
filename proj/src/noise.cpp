#include "betalab/noise.hpp"

#include "betalab/specfun.hpp"

#include <cmath>

namespace betalab {

namespace {
// Counter layout per index k: slots are sub-counters of a 2^20 block.
// slot 0..1: X_k normal; slot 2: boost uniform (shape < 1);
// slots 8 + 3i: gamma attempt i (two for the normal, one for the accept test).
constexpr std::uint64_t kSlotBits = 20;
constexpr std::uint64_t kSlotsPerIndex = std::uint64_t(1) << kSlotBits;

std::uint64_t slot(std::uint64_t k, std::uint64_t j) { return (k << kSlotBits) | j; }
} // namespace

double NoiseStream::b1() const {
    if (params_.infinite_beta()) return 0.0;
    double v = std::sqrt(2.0) * rng_.normal(slot(0, 0));
    return flip_ ? -v : v;
}

// Marsaglia-Tsang with deterministic per-attempt sub-counters. The attempt
// count is unbounded in principle; acceptance is ~96% per attempt so the 2^20
// slot budget is never remotely approached.
double NoiseStream::gamma_sample(double shape, std::uint64_t ctr_base) const {
    double boost = 1.0;
    if (shape < 1.0) {
        double u = rng_.uniform(ctr_base + 2);
        boost = std::pow(u, 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (std::uint64_t attempt = 0;; ++attempt) {
        const std::uint64_t base = ctr_base + 8 + 3 * attempt;
        double x = rng_.normal(base);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng_.uniform(base + 2);
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
    }
}

NoiseEntry NoiseStream::entry(std::uint64_t k) const {
    if (k < 1) throw std::invalid_argument("noise: entry index must be >= 1");
    NoiseEntry e;
    if (params_.infinite_beta()) {
        e.a_sq = std::numeric_limits<double>::infinity();
        e.a_sq_over_beta = static_cast<double>(k);
        return e;
    }
    const double beta = params_.beta;
    const double bk = beta * static_cast<double>(k);
    double x = rng_.normal(slot(k, 0));
    double a_sq = 2.0 * gamma_sample(0.5 * bk, slot(k, 0)); // chi^2_{beta k}
    double y = (a_sq - bk) / std::sqrt(2.0 * bk);
    if (params_.truncation_threshold && k >= params_.kappa) {
        const double c = *params_.truncation_threshold;
        x = std::clamp(x, -c, c);
        y = std::clamp(y, -c, c);
        a_sq = bk + std::sqrt(2.0 * bk) * y;
    }
    if (flip_) x = -x;
    e.x = x;
    e.y = y;
    e.b = std::sqrt(2.0) * x;
    e.a_sq = a_sq;
    e.a_sq_over_beta = static_cast<double>(k) + std::sqrt(2.0 * static_cast<double>(k) / beta) * y;
    return e;
}

std::complex<double> NoiseStream::z_field(std::uint64_t k, double z, double N) const {
    const NoiseEntry e = entry(k);
    const std::complex<double> J = specfun::joukowsky(z * std::sqrt(N / static_cast<double>(k)));
    return (e.x + J * e.y) / std::sqrt(2.0);
}

} // namespace betalab
