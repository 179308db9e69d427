#pragma once

// Single-pass engine for the elliptic stretch: advances the scaled polynomial
// recursion, anchors and unwinds the complex Prufer phase, and accumulates the
// martingale fields. Shared by prufer.cpp, fields.cpp and experiments.cpp.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "betalab/charpoly.hpp"
#include "betalab/noise.hpp"
#include "betalab/prufer.hpp"
#include "betalab/specfun.hpp"

namespace betalab::detail {

using cplx = std::complex<double>;

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct KahanCplx {
    KahanSum re, im;
    void add(cplx x) {
        re.add(x.real());
        im.add(x.imag());
    }
    cplx value() const { return {re.s, im.s}; }
};

inline double wrap_pi(double x) {
    // wrap to (-pi, pi]
    double w = std::remainder(x, 2.0 * specfun::kPi);
    if (w <= -specfun::kPi) w += 2.0 * specfun::kPi;
    return w;
}

struct BulkOptions {
    double T = 1.0;
    std::optional<long long> n_start{};
    bool want_fields = false;
    bool track_exactness = true;
    bool store_psi = false;
    bool keep_ratio_log = false;
};

struct BulkResult {
    long long n_start = 0;
    long long anchor_sturm = 0;
    cplx psi_N{};
    long long sturm_N = 0;
    int sign_phi_N = 0;
    double log_abs_phi_N = 0.0;
    double max_exactness_err = 0.0;
    long long counting_checks = 0;
    // fields
    cplx G{}, W{};
    cplx bracket_GG{};
    double bracket_GGbar = 0.0;
    cplx bracket_WW{};
    double bracket_WWbar = 0.0;
    long long excluded_lo = 0, excluded_hi = 0;
    // optional storage
    std::vector<cplx> psi;
    std::vector<cplx> ratio_log;
};

// Throws prufer::BranchError when principal-branch unwrapping is unsafe or a
// counting checkpoint fails.
inline BulkResult bulk_pass(const NoiseStream& stream, double z, long long N,
                            const BulkOptions& opt) {
    using specfun::kPi;
    if (N < 2) throw std::invalid_argument("bulk_pass: N must be >= 2");
    const double Nd = static_cast<double>(N);
    const double nz2 = Nd * z * z;
    if (!(nz2 < Nd)) throw std::invalid_argument("bulk_pass: need N z^2 < N (|z| < 1)");
    const long long N0 = static_cast<long long>(std::floor(nz2));
    const double L = std::cbrt(std::max(1.0, std::ceil(nz2)));
    const long long n_start =
        opt.n_start ? *opt.n_start : N0 + static_cast<long long>(std::ceil(L));
    if (n_start <= N0 || static_cast<double>(n_start) <= nz2)
        throw std::invalid_argument("bulk_pass: n_start must be beyond the turning point");
    if (n_start + 1 > N)
        throw std::invalid_argument("bulk_pass: n_start + 1 must not exceed N");

    const bool inf_beta = stream.params().infinite_beta();
    const double beta = stream.params().beta;
    const double inv_sqrt_2beta = inf_beta ? 0.0 : 1.0 / std::sqrt(2.0 * beta);

    // exclusion window Gamma_T = {k : |k - N z^2| < T L}
    auto excluded = [&](long long k) {
        return std::fabs(static_cast<double>(k) - nz2) < opt.T * L;
    };
    const long long ex_lo = static_cast<long long>(std::floor(nz2 - opt.T * L)) + 1;
    const long long ex_hi = static_cast<long long>(std::ceil(nz2 + opt.T * L));

    BulkResult out;
    out.n_start = n_start;
    out.excluded_lo = ex_lo;
    out.excluded_hi = ex_hi;
    if (opt.store_psi) out.psi.reserve(N - n_start + 1);

    charpoly::detail::ScaledRecursion rec;
    double logw = specfun::log_weight(0, N, z); // log w_k, updated incrementally

    // phase state
    bool have_psi = false;
    KahanSum rho_sum, phi_sum; // compensated psi accumulation
    cplx u{1.0, 0.0};          // e^{i phi_n}, kept in lockstep with phi_sum
    double delta_prev = 0.0;
    cplx eith_prev{};

    // fields accumulators
    KahanCplx G, W, bGG, bWW;
    KahanSum bGGbar, bWWbar;

    // counting checkpoints: n_start * 2^j and N
    long long next_checkpoint = 2 * n_start;

    const double sqNz = z * std::sqrt(Nd);

    for (long long k = 0; k <= N; ++k) {
        const long long cnt_k = rec.sign_changes; // Sturm count for minor k
        NoiseEntry e;
        if (k >= 1 && !inf_beta) e = stream.entry(static_cast<std::uint64_t>(k));
        if (k >= 1 && inf_beta) e.a_sq_over_beta = static_cast<double>(k);

        // ---- phase step psi_{k-1} -> psi_k ----
        if (have_psi) {
            const double kd = static_cast<double>(k);
            const double cth = sqNz / std::sqrt(kd);
            const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
            const double theta = std::acos(cth);
            const double delta = 1.0 / std::sqrt(kd - nz2);
            const double Delta = 0.5 * (1.0 - delta / delta_prev);
            const cplx eith{cth, sth};
            cplx zprime = 0.0;
            if (!inf_beta) {
                const cplx core = std::sqrt((kd - 1.0) / kd) * eith_prev * e.x + e.y;
                zprime = cplx(0.0, delta * inv_sqrt_2beta) * core * std::conj(eith);
            }
            const cplx em2iphi = std::conj(u) * std::conj(u);
            const cplx em2ith = std::conj(eith) * std::conj(eith);
            const cplx zeta =
                (1.0 - Delta + zprime) + (Delta - std::conj(zprime) * em2ith) * em2iphi;
            const double zr = zeta.real(), zi = zeta.imag();
            const double arg = std::atan2(zi, zr);
            if (std::fabs(arg) > 0.9 * kPi)
                throw prufer::BranchError(
                    "prufer: principal-branch increment too large near the turning point");
            const double n2 = zr * zr + zi * zi;
            rho_sum.add(0.5 * std::log(n2));
            phi_sum.add(theta + arg);
            u *= eith * zeta;
            u /= std::abs(u);
            if (opt.keep_ratio_log) out.ratio_log.push_back(cplx(0.5 * std::log(n2), arg));

            // W field at index k (phi_{k-1} entered through em2iphi's source u)
            if (opt.want_fields && !inf_beta && !excluded(k)) {
                const cplx Jk{cth, -sth}; // e^{-i theta_k}
                const cplx Zk = (e.x + Jk * e.y) / std::sqrt(2.0);
                // den = sqrt(k) i sin(theta) = i/delta
                const cplx inv_den{0.0, -delta}; // 1/(i/delta)
                // e^{2i(theta_k + phi_{k-1})}: u still holds phi_k now, so use
                // the saved pre-step e^{-2i phi_{k-1}} conjugated.
                const cplx e2i = (eith * eith) * std::conj(em2iphi);
                W.add(Zk * e2i * inv_den);
                const cplx EZ2 = (1.0 + Jk * Jk) * 0.5;
                bWW.add(EZ2 * e2i * e2i * (inv_den * inv_den));
                bWWbar.add(delta * delta);
            }

            // exactness: cos(phi_k) vs Phi_k / |exp psi_k|
            if (opt.track_exactness) {
                const double scale = rec.expo + logw - rho_sum.s;
                if (scale > -30.0) {
                    const double rhs = rec.p_cur * std::exp(scale);
                    const double err = std::fabs(u.real() - rhs);
                    if (err > out.max_exactness_err) out.max_exactness_err = err;
                }
            }


            delta_prev = delta;
            eith_prev = eith;

            // counting checkpoint (phi_k against Sturm count of minor k)
            if (k == next_checkpoint || k == N) {
                const double dev = wrap_pi(phi_sum.s - kPi * static_cast<double>(cnt_k));
                ++out.counting_checks;
                if (std::fabs(dev) > 0.5 * kPi + 1e-6)
                    throw prufer::BranchError("prufer: counting identity failed at checkpoint");
                while (next_checkpoint <= k) next_checkpoint *= 2;
            }
            if (opt.store_psi) out.psi.push_back(cplx(rho_sum.s, phi_sum.s));
        }

        // ---- G field at index k ----
        if (opt.want_fields && !inf_beta && k >= 1 && !excluded(k)) {
            const double w = z * std::sqrt(Nd / static_cast<double>(k));
            const cplx Jk = specfun::joukowsky(w);
            const cplx den = std::sqrt(static_cast<double>(k)) * (w - Jk);
            const cplx Zk = (e.x + Jk * e.y) / std::sqrt(2.0);
            G.add(Zk / den);
            bGG.add((1.0 + Jk * Jk) * 0.5 / (den * den));
            bGGbar.add((1.0 + std::norm(Jk)) * 0.5 / std::norm(den));
        }

        // ---- recursion step: p_k -> p_{k+1} ----
        double diag = z;
        if (!inf_beta)
            diag -= (k == 0) ? stream.b1() / (2.0 * std::sqrt(Nd * beta))
                             : e.x / std::sqrt(2.0 * Nd * beta);
        const double off = (k == 0) ? 0.0 : e.a_sq_over_beta / (4.0 * Nd);
        if (k == N) {
            // record Phi_N before the final step overwrites the pair
            out.sturm_N = cnt_k;
            out.sign_phi_N = (rec.p_cur > 0.0) ? 1 : (rec.p_cur < 0.0 ? -1 : 0);
            out.log_abs_phi_N = (rec.p_cur == 0.0)
                                    ? -std::numeric_limits<double>::infinity()
                                    : std::log(std::fabs(rec.p_cur)) + rec.expo + logw;
        }
        rec.step(diag, off);
        logw += 0.5 * std::log(4.0 * Nd / static_cast<double>(k + 1));

        // ---- anchor at n_start (needs p_{n_start}, p_{n_start+1}) ----
        if (k == n_start) {
            const double nd = static_cast<double>(n_start);
            const double cth = sqNz / std::sqrt(nd);
            const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
            const double delta = 1.0 / std::sqrt(nd - nz2);
            // xi scaled by e^{-(expo + log w_n)}:
            // xi = i delta sqrt(n) (e^{-i th} p_n - sqrt(4N/n) p_{n+1}) * e^{expo} w_n
            // logw has already advanced to log w_{n_start+1}
            const double logw_n = logw - 0.5 * std::log(4.0 * Nd / (nd + 1.0));
            const cplx xi_scaled = cplx(0.0, delta * std::sqrt(nd)) *
                                   (cplx(cth, -sth) * rec.p_prev -
                                    std::sqrt(4.0 * Nd / nd) * rec.p_cur);
            const double rho0 = std::log(std::abs(xi_scaled)) + rec.expo + logw_n;
            const double arg0 = std::arg(xi_scaled);
            const double dev = wrap_pi(arg0 - kPi * static_cast<double>(cnt_k));
            if (std::fabs(dev) > 0.5 * kPi + 1e-6)
                throw prufer::BranchError("prufer: anchor violates the counting identity");
            const double phi0 = kPi * static_cast<double>(cnt_k) + dev;
            rho_sum = KahanSum{rho0, 0.0};
            phi_sum = KahanSum{phi0, 0.0};
            u = std::polar(1.0, phi0);

            delta_prev = delta;
            eith_prev = cplx(cth, sth);
            out.anchor_sturm = cnt_k;
            have_psi = true;
            ++out.counting_checks;
            if (opt.store_psi) out.psi.push_back(cplx(rho0, phi0));
        }
    }

    out.psi_N = cplx(rho_sum.s, phi_sum.s);
    out.G = G.value();
    out.W = W.value();
    out.bracket_GG = bGG.value();
    out.bracket_GGbar = bGGbar.s;
    out.bracket_WW = bWW.value();
    out.bracket_WWbar = bWWbar.s;
    return out;
}

} // namespace betalab::detail
