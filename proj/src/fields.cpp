#include "betalab/fields.hpp"

#include "betalab/specfun.hpp"
#include "bulk_core.hpp"

#include <cmath>
#include <stdexcept>

namespace betalab::fields {

MartingaleLedger accumulate_fields(const NoiseStream& stream, double z, long long N, double T,
                                   const prufer::PhaseTrajectory& phase) {
    if (phase.stream_key != stream.identity_key())
        throw std::invalid_argument("fields: trajectory was built from a different stream");
    if (phase.N != N || phase.z != z)
        throw std::invalid_argument("fields: trajectory does not match (z, N)");
    const double Nd = static_cast<double>(N);
    const double nz2 = Nd * z * z;
    const double L = std::cbrt(std::max(1.0, std::ceil(nz2)));

    MartingaleLedger led;
    led.z = z;
    led.N = N;
    led.beta = stream.params().beta;
    led.T = T;
    led.excluded_lo = static_cast<long long>(std::floor(nz2 - T * L)) + 1;
    led.excluded_hi = static_cast<long long>(std::ceil(nz2 + T * L));
    if (stream.params().infinite_beta()) return led; // all fields vanish

    detail::KahanCplx G, W, bGG, bWW;
    detail::KahanSum bGGbar, bWWbar;
    for (long long k = 1; k <= N; ++k) {
        if (std::fabs(static_cast<double>(k) - nz2) < T * L) continue;
        const NoiseEntry e = stream.entry(static_cast<std::uint64_t>(k));
        const double w = z * std::sqrt(Nd / static_cast<double>(k));
        const cplx Jk = specfun::joukowsky(w);
        const cplx den = std::sqrt(static_cast<double>(k)) * (w - Jk);
        const cplx Zk = (e.x + Jk * e.y) / std::sqrt(2.0);
        G.add(Zk / den);
        bGG.add((1.0 + Jk * Jk) * 0.5 / (den * den));
        bGGbar.add((1.0 + std::norm(Jk)) * 0.5 / std::norm(den));
        if (static_cast<double>(k) > nz2 && k - 1 >= phase.n_start && k <= phase.N) {
            const double phi_prev = phase.phi(k - 1);
            const cplx e2i = std::exp(cplx(0.0, 2.0 * (std::acos(w) + phi_prev)));
            W.add(Zk * e2i / den);
            bWW.add((1.0 + Jk * Jk) * 0.5 * e2i * e2i / (den * den));
            bWWbar.add(1.0 / std::norm(den));
        }
    }
    led.G = G.value();
    led.W = W.value();
    led.M = led.G + std::conj(led.W);
    led.bracket_GG = bGG.value();
    led.bracket_GGbar = bGGbar.s;
    led.bracket_WW = bWW.value();
    led.bracket_WWbar = bWWbar.s;
    return led;
}

GBracketPair bracket_G_pair(double z, double x, long long N, double T, long long n_max) {
    if (n_max < 0) n_max = N;
    const double Nd = static_cast<double>(N);
    const double nz2 = Nd * z * z, nx2 = Nd * x * x;
    const double Lz = std::cbrt(std::max(1.0, std::ceil(nz2)));
    const double Lx = std::cbrt(std::max(1.0, std::ceil(nx2)));
    detail::KahanCplx s, sc;
    for (long long k = 1; k <= n_max; ++k) {
        const double kd = static_cast<double>(k);
        if (std::fabs(kd - nz2) < T * Lz || std::fabs(kd - nx2) < T * Lx) continue;
        const double wz = z * std::sqrt(Nd / kd);
        const double wx = x * std::sqrt(Nd / kd);
        const cplx Jz = specfun::joukowsky(wz), Jx = specfun::joukowsky(wx);
        const cplx dz = std::sqrt(kd) * (wz - Jz), dx = std::sqrt(kd) * (wx - Jx);
        s.add((1.0 + Jz * Jx) * 0.5 / (dz * dx));
        sc.add((1.0 + Jz * std::conj(Jx)) * 0.5 / (dz * std::conj(dx)));
    }
    return {s.value(), sc.value()};
}

CovarianceTheory covariance_theory(double z, double x, long long N) {
    if (std::fabs(x) > std::fabs(z)) std::swap(x, z);
    CovarianceTheory out;
    const double Nd = static_cast<double>(N);
    const double zN = std::max(std::fabs(z), 1.0 / std::sqrt(Nd));
    out.boundary = std::pow(Nd, -2.0 / 3.0) * std::pow(zN, -1.0 / 3.0);
    out.global_regime = (std::fabs(z) > 1.0 && (std::fabs(z) - 1.0) * std::pow(Nd, 2.0 / 3.0) > 1.0)
                        || std::fabs(x - z) > out.boundary;
    const cplx Jz = specfun::joukowsky(z), Jx = specfun::joukowsky(x);
    if (out.global_regime) {
        out.MM = -2.0 * std::log(1.0 - Jz * Jx);
        out.MMbar = -2.0 * std::log(1.0 - Jz * std::conj(Jx));
    } else {
        const auto g = specfun::SpectrumGeometry::at(N, z);
        const double eps = g.epsN;
        out.MM = -2.0 * std::log(std::max(g.rho, eps));
        out.MMbar = -2.0 * std::log(std::max(std::fabs(x - z) / std::max(g.rho, eps), eps));
    }
    return out;
}

ScanSummary scan_summary(const NoiseStream& stream, double z, long long N, double T) {
    detail::BulkOptions opt;
    opt.T = T;
    opt.want_fields = true;
    auto r = detail::bulk_pass(stream, z, N, opt);
    ScanSummary s;
    s.psi_N = r.psi_N;
    s.sturm_N = r.sturm_N;
    s.sign_phi_N = r.sign_phi_N;
    s.log_abs_phi_N = r.log_abs_phi_N;
    s.max_exactness_err = r.max_exactness_err;
    s.counting_checks = r.counting_checks;
    s.n_start = r.n_start;
    MartingaleLedger& led = s.ledger;
    led.z = z;
    led.N = N;
    led.beta = stream.params().beta;
    led.T = T;
    led.excluded_lo = r.excluded_lo;
    led.excluded_hi = r.excluded_hi;
    led.G = r.G;
    led.W = r.W;
    led.M = r.G + std::conj(r.W);
    led.bracket_GG = r.bracket_GG;
    led.bracket_GGbar = r.bracket_GGbar;
    led.bracket_WW = r.bracket_WW;
    led.bracket_WWbar = r.bracket_WWbar;
    return s;
}

} // namespace betalab::fields
