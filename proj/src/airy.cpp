#include "betalab/airy.hpp"

#include "betalab/charpoly.hpp"
#include "betalab/fields.hpp"
#include "betalab/rng.hpp"
#include "betalab/specfun.hpp"
#include "betalab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace betalab::airy {

namespace {

double interp(const std::vector<double>& t, const std::vector<double>& v, double s) {
    if (s > t.front() || s < t.back())
        throw std::invalid_argument("airy: time outside the integrated range");
    // t is uniformly decreasing
    const double h = t.front() - t[1];
    const std::size_t j = std::min(
        t.size() - 2, static_cast<std::size_t>(std::max(0.0, (t.front() - s) / h)));
    const double w = (t[j] - s) / (t[j] - t[j + 1]);
    return v[j] * (1.0 - w) + v[j + 1] * w;
}

} // namespace

double AiryPath::sai_at(double s) const { return interp(t, sai, s); }
double AiryPath::saip_at(double s) const { return interp(t, saip, s); }

AiryPath solve_sai(double beta, double lambda, double t_max, double t_min, long long steps,
                   std::uint64_t seed) {
    if (t_max < 8.0) throw std::invalid_argument("airy: t_max must be >= 8");
    if (t_min < -10.0) throw std::invalid_argument("airy: t_min must be >= -10");
    if (t_min >= t_max) throw std::invalid_argument("airy: t_min must be below t_max");
    if (steps < 10000) throw std::invalid_argument("airy: steps must be >= 1e4");
    const bool inf = std::isinf(beta);
    if (!inf && !(beta > 0.0)) throw std::invalid_argument("airy: beta must be positive");

    AiryPath p;
    p.beta = beta;
    p.lambda = lambda;
    p.t_max = t_max;
    p.t_min = t_min;
    p.t.resize(steps + 1);
    p.sai.resize(steps + 1);
    p.saip.resize(steps + 1);
    p.bm.assign(steps + 1, 0.0);

    const double h = (t_max - t_min) / static_cast<double>(steps);
    const auto a0 = specfun::airy_ai(t_max + lambda);
    double f = a0.ai, fp = a0.ai_prime, t = t_max;
    p.t[0] = t;
    p.sai[0] = f;
    p.saip[0] = fp;
    SeqRng rng(CounterRng::derive_key(seed, 0xa117ull));
    const double dt = -h;
    const double noise_coef = inf ? 0.0 : 2.0 / std::sqrt(beta);
    for (long long j = 1; j <= steps; ++j) {
        const double t1 = t_max - h * static_cast<double>(j);
        const double dB = inf ? 0.0 : rng.normal() * std::sqrt(h);
        p.bm[j] = dB;
        const double b1 = f + 0.5 * dt * fp;
        const double b2 = fp + 0.5 * dt * (t + lambda) * f + noise_coef * f * dB;
        const double det = 1.0 - 0.25 * dt * dt * (t1 + lambda);
        const double f1 = (b1 + 0.5 * dt * b2) / det;
        const double fp1 = (0.5 * dt * (t1 + lambda) * b1 + b2) / det;
        f = f1;
        fp = fp1;
        t = t1;
        p.t[j] = t;
        p.sai[j] = f;
        p.saip[j] = fp;
    }
    return p;
}

VarpiPair varpi_phase(const AiryPath& path, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("airy: varpi_phase requires t > 0");
    const double s = path.sai_at(-t);
    const double sp = path.saip_at(-t);
    if (std::fabs(s) < 1e-300 && std::fabs(sp) < 1e-300)
        throw std::runtime_error("airy: degenerate path (SAi and SAi' both vanish)");
    const std::complex<double> plus(s, sp / std::sqrt(t));
    return {plus, std::conj(plus)};
}

std::vector<EdgeRow> edge_compare(long long N, int sign, const std::vector<double>& lambdas,
                                  long long replicates, double beta, std::uint64_t seed) {
    if (N < 10000) throw std::invalid_argument("airy: edge_compare requires N >= 1e4");
    if (sign != 1 && sign != -1) throw std::invalid_argument("airy: sign must be +-1");
    const double Nd = static_cast<double>(N);
    const double n23 = std::pow(Nd, 2.0 / 3.0);
    const double sd = static_cast<double>(sign);
    const double parity = (N % 2 == 0) ? 1.0 : sd; // (+-1)^N

    std::vector<EdgeRow> rows;
    NoiseParams inf_params;
    inf_params.beta = std::numeric_limits<double>::infinity();
    NoiseStream inf_stream(inf_params, 0);
    // [G_N(+-1)]: deterministic bracket at the edge, excluded window T = 1
    const auto gb = fields::bracket_G_pair(sd, sd, N, 1.0);
    for (double lam : lambdas) {
        EdgeRow r;
        r.lambda = lam;
        const double z = sd * (1.0 + lam / (2.0 * n23));
        const auto det = charpoly::log_charpoly(inf_stream, N, z);
        r.deterministic = parity * det.sign * std::exp(det.log_abs - std::log(Nd) / 6.0);
        r.airy = specfun::airy_ai(lam).ai;
        r.rel_err = std::fabs(r.deterministic - r.airy) / std::fabs(r.airy);
        if (replicates > 0 && !std::isinf(beta)) {
            stats::Welford mc, pre;
            for (long long rep = 0; rep < replicates; ++rep) {
                NoiseParams params;
                params.beta = beta;
                params.seed = seed;
                NoiseStream stream(params, static_cast<std::uint64_t>(rep));
                const auto lp = charpoly::log_charpoly(stream, N, z);
                mc.add(parity * lp.sign * std::exp(lp.log_abs - std::log(Nd) / 6.0));
                // prefactor proxy exp(G_N(+-1)/sqrt(beta) - [G_N]/(2 beta))
                double G = 0.0;
                for (long long k = 1; k <= N; ++k) {
                    const double kd = static_cast<double>(k);
                    if (std::fabs(kd - Nd) < std::cbrt(Nd)) continue;
                    const auto e = stream.entry(static_cast<std::uint64_t>(k));
                    const double w = sd * std::sqrt(Nd / kd);
                    const double J = std::real(specfun::joukowsky(w));
                    const double den = std::sqrt(kd) * (w - J);
                    G += (e.x + J * e.y) / std::sqrt(2.0) / den;
                }
                pre.add(std::exp(G / std::sqrt(beta) - std::real(gb.bracket) / (2.0 * beta)));
            }
            r.mc_mean = mc.mean();
            r.mc_se = mc.stderr_mean();
            r.prefactor_mean = pre.mean();
        }
        rows.push_back(r);
    }
    return rows;
}

} // namespace betalab::airy
