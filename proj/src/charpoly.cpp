#include "betalab/charpoly.hpp"

#include "betalab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace betalab::charpoly {

namespace detail {

StepCoeffs step_coeffs(const NoiseStream& stream, long long n, long long N, double z) {
    const double Nd = static_cast<double>(N);
    if (n == 0) {
        if (stream.params().infinite_beta()) return {z, 0.0};
        return {z - stream.b1() / (2.0 * std::sqrt(Nd * stream.params().beta)), 0.0};
    }
    const NoiseEntry e = stream.entry(static_cast<std::uint64_t>(n));
    double diag = z;
    if (!stream.params().infinite_beta())
        diag -= e.x / std::sqrt(2.0 * Nd * stream.params().beta);
    return {diag, e.a_sq_over_beta / (4.0 * Nd)};
}

} // namespace detail

double CharPolyTrajectory::log_norm_w(long long n) const { return specfun::log_weight(n, N, z); }

double CharPolyTrajectory::phi(long long n) const {
    return mantissa.at(n) * std::exp(exponent.at(n) + log_norm_w(n));
}

double CharPolyTrajectory::log_abs_phi(long long n) const {
    const double m = mantissa.at(n);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(m)) + exponent.at(n) + log_norm_w(n);
}

int CharPolyTrajectory::sign_phi(long long n) const {
    const double m = mantissa.at(n);
    return (m > 0.0) ? 1 : (m < 0.0 ? -1 : 0);
}

long long CharPolyTrajectory::count_at_or_above(long long n) const { return sturm.at(n); }

CharPolyTrajectory run_recursion(const NoiseStream& stream, long long N, double z) {
    if (N < 1) throw std::invalid_argument("charpoly: N must be >= 1");
    CharPolyTrajectory t;
    t.N = N;
    t.z = z;
    t.beta = stream.params().beta;
    t.mantissa.resize(N + 2);
    t.exponent.resize(N + 2);
    t.sturm.resize(N + 2);
    detail::ScaledRecursion rec;
    t.mantissa[0] = rec.p_cur;
    t.exponent[0] = 0.0;
    t.sturm[0] = 0;
    for (long long n = 0; n <= N; ++n) {
        const auto c = detail::step_coeffs(stream, n, N, z);
        rec.step(c.diag, c.off);
        t.mantissa[n + 1] = rec.p_cur;
        t.exponent[n + 1] = rec.expo;
        t.sturm[n + 1] = rec.sign_changes;
    }
    return t;
}

long long sturm_count(const CharPolyTrajectory& trajectory, long long n) {
    if (n < 1 || n > trajectory.N)
        throw std::invalid_argument("charpoly: sturm_count index outside [1, N]");
    return trajectory.sturm[n];
}

namespace {

// Sturm count of the n x n minor at parameter z for fixed raw coefficients.
long long count_ge(const std::vector<double>& diag, const std::vector<double>& off, double z) {
    detail::ScaledRecursion rec;
    for (std::size_t k = 0; k < diag.size(); ++k)
        rec.step(z - diag[k], k == 0 ? 0.0 : off[k - 1]);
    return rec.sign_changes;
}

} // namespace

std::vector<double> eigen_oracle(const NoiseStream& stream, long long n, long long N) {
    if (n < 1 || n > 64) throw std::invalid_argument("charpoly: eigen_oracle supports n <= 64");
    const double Nd = static_cast<double>(N);
    const double beta = stream.params().beta;
    const bool inf = stream.params().infinite_beta();
    const double scale = 2.0 * std::sqrt(Nd * beta); // b_k / scale on the diagonal
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0); // off[k] = a_{k+1}^2/(4 N beta)
    for (long long k = 0; k < n; ++k) {
        if (k == 0)
            diag[0] = inf ? 0.0 : stream.b1() / scale;
        else
            diag[k] = inf ? 0.0
                          : std::sqrt(2.0) * stream.entry(static_cast<std::uint64_t>(k)).x / scale;
        if (k + 1 < n) {
            const NoiseEntry e = stream.entry(static_cast<std::uint64_t>(k + 1));
            off[k] = e.a_sq_over_beta / (4.0 * Nd);
        }
    }
    // Gershgorin bound with a_k/sqrt(4 N beta) = sqrt(off)
    double lo = 0.0, hi = 0.0;
    for (long long k = 0; k < n; ++k) {
        double r = 0.0;
        if (k > 0) r += std::sqrt(off[k - 1]);
        if (k + 1 < n) r += std::sqrt(off[k]);
        lo = std::min(lo, diag[k] - r);
        hi = std::max(hi, diag[k] + r);
    }
    lo -= 1.0;
    hi += 1.0;
    std::vector<double> ev(n);
    for (long long j = 1; j <= n; ++j) {
        // j-th smallest: boundary of {z : count_ge(z) >= n - j + 1}
        double a = lo, b = hi;
        while (b - a > 1e-12) {
            const double mid = 0.5 * (a + b);
            if (count_ge(diag, off, mid) >= n - j + 1)
                a = mid;
            else
                b = mid;
        }
        ev[j - 1] = 0.5 * (a + b);
    }
    return ev;
}

double hatted_charpoly(const NoiseStream& stream, long long n, double mu) {
    if (n < 1) throw std::invalid_argument("charpoly: hatted_charpoly requires n >= 1");
    const bool inf = stream.params().infinite_beta();
    const double beta = stream.params().beta;
    double q_prev = 0.0, q_cur = 1.0, expo = 0.0;
    for (long long k = 0; k < n; ++k) {
        double diag, off;
        if (k == 0) {
            diag = mu - (inf ? 0.0 : stream.b1() / std::sqrt(beta));
            off = 0.0;
        } else {
            const NoiseEntry e = stream.entry(static_cast<std::uint64_t>(k));
            diag = mu - (inf ? 0.0 : std::sqrt(2.0) * e.x / std::sqrt(beta));
            off = e.a_sq_over_beta / std::sqrt(static_cast<double>(k));
        }
        const double q_new = (diag * q_cur - off * q_prev) / std::sqrt(static_cast<double>(k + 1));
        q_prev = q_cur;
        q_cur = q_new;
        const double m = std::max(std::fabs(q_prev), std::fabs(q_cur));
        if (m > 1e2 || (m > 0.0 && m < 1e-2)) {
            const double sh = std::floor(std::log(m));
            const double f = std::exp(-sh);
            q_prev *= f;
            q_cur *= f;
            expo += sh;
        }
    }
    return q_cur * std::exp(expo);
}

SignedLog log_charpoly(const NoiseStream& stream, long long N, double z) {
    detail::ScaledRecursion rec;
    for (long long n = 0; n < N; ++n) {
        const auto c = detail::step_coeffs(stream, n, N, z);
        rec.step(c.diag, c.off);
    }
    SignedLog out;
    out.sign = (rec.p_cur > 0.0) ? 1 : (rec.p_cur < 0.0 ? -1 : 0);
    out.log_abs = (rec.p_cur == 0.0)
                      ? -std::numeric_limits<double>::infinity()
                      : std::log(std::fabs(rec.p_cur)) + rec.expo + specfun::log_weight(N, N, z);
    return out;
}

double charpoly_ratio(const NoiseStream& stream, long long N, double z_num, double z_den) {
    detail::ScaledRecursion num, den;
    const double Nd = static_cast<double>(N);
    const bool inf = stream.params().infinite_beta();
    const double beta = stream.params().beta;
    for (long long n = 0; n < N; ++n) {
        double bshift = 0.0, off = 0.0;
        if (n == 0) {
            if (!inf) bshift = stream.b1() / (2.0 * std::sqrt(Nd * beta));
        } else {
            const NoiseEntry e = stream.entry(static_cast<std::uint64_t>(n));
            if (!inf) bshift = e.x / std::sqrt(2.0 * Nd * beta);
            off = e.a_sq_over_beta / (4.0 * Nd);
        }
        num.step(z_num - bshift, off);
        den.step(z_den - bshift, off);
    }
    const double lw = specfun::log_weight(N, N, z_num) - specfun::log_weight(N, N, z_den);
    return (num.p_cur / den.p_cur) * std::exp(num.expo - den.expo + lw);
}

} // namespace betalab::charpoly
