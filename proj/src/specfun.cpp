#include "betalab/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace betalab::specfun {

SpectrumGeometry SpectrumGeometry::at(long long N, double z) {
    if (N < 1) throw std::invalid_argument("specfun: N must be >= 1");
    SpectrumGeometry g;
    g.N = N;
    g.z = z;
    const double nz2 = static_cast<double>(N) * z * z;
    g.N0 = static_cast<long long>(std::floor(nz2));
    g.L = std::cbrt(std::max(1.0, std::ceil(nz2)));
    const Semicircle s = semicircle(z);
    g.rho = s.density;
    g.F = s.tail;
    const double n13 = std::cbrt(static_cast<double>(N));
    g.epsN = 1.0 / std::max(n13, static_cast<double>(N) * g.rho * g.rho);
    return g;
}

Semicircle semicircle(double x) {
    Semicircle s{0.0, 0.0};
    if (x <= -1.0) {
        s.tail = 1.0;
        return s;
    }
    if (x >= 1.0) return s;
    const double r = std::sqrt(1.0 - x * x);
    s.density = (2.0 / kPi) * r;
    // antiderivative: int_z^1 (2/pi) sqrt(1-x^2) dx = 1/2 - (z sqrt(1-z^2) + arcsin z)/pi
    s.tail = 0.5 - (x * r + std::asin(x)) / kPi;
    if (s.tail < 0.0) s.tail = 0.0;
    if (s.tail > 1.0) s.tail = 1.0;
    return s;
}

std::complex<double> joukowsky(double w) {
    if (w >= 1.0) return {w - std::sqrt(w * w - 1.0), 0.0};
    if (w <= -1.0) return {w + std::sqrt(w * w - 1.0), 0.0};
    // e^{-i arccos w} = w - i sqrt(1-w^2)
    return {w, -std::sqrt(1.0 - w * w)};
}

std::complex<double> sqrt_j_branch(double w) { return w - joukowsky(w); }

double angle_theta(long long n, double z, long long N) {
    const double nz2 = static_cast<double>(N) * z * z;
    if (!(static_cast<double>(n) > nz2))
        throw std::invalid_argument("specfun: angle_theta requires n > N z^2");
    return std::acos(z * std::sqrt(static_cast<double>(N) / static_cast<double>(n)));
}

double scale_delta(long long n, double z, long long N) {
    const double nz2 = static_cast<double>(N) * z * z;
    if (!(static_cast<double>(n) > nz2))
        throw std::invalid_argument("specfun: scale_delta requires n > N z^2");
    return 1.0 / std::sqrt(static_cast<double>(n) - nz2);
}

double log_weight(long long n, long long N, double z) {
    const double Nd = static_cast<double>(N);
    // (1/2) sum_{k<=n} log(4N/k) = (n/2) log(4N) - (1/2) log(n!)
    const double half_sum =
        0.5 * (static_cast<double>(n) * std::log(4.0 * Nd) - std::lgamma(static_cast<double>(n) + 1.0));
    return 0.25 * std::log(Nd / (2.0 * kPi)) - Nd * z * z + half_sum;
}

double ScaledValue::value() const { return mantissa * std::exp(log_scale); }

ScaledValue hermite_normalized_scaled(long long n, long long N, double z) {
    if (n < 0) throw std::invalid_argument("specfun: hermite degree must be >= 0");
    // monic beta=infinity recursion p_{k+1} = z p_k - (k/4N) p_{k-1}, scaled pair
    double p_prev = 0.0, p_cur = 1.0, expo = 0.0;
    const double N4 = 4.0 * static_cast<double>(N);
    for (long long k = 0; k < n; ++k) {
        const double p_new = z * p_cur - (static_cast<double>(k) / N4) * p_prev;
        p_prev = p_cur;
        p_cur = p_new;
        const double m = std::max(std::fabs(p_prev), std::fabs(p_cur));
        if (m > 1e2 || (m > 0.0 && m < 1e-2)) {
            const double s = std::floor(std::log(m));
            const double f = std::exp(-s);
            p_prev *= f;
            p_cur *= f;
            expo += s;
        }
    }
    return {p_cur, expo + log_weight(n, N, z)};
}

double hermite_normalized(long long n, long long N, double z) {
    return hermite_normalized_scaled(n, N, z).value();
}

namespace {

// Maclaurin solutions of y'' = t y:  f = 1 + t^3/6 + ...,  g = t + t^4/12 + ...
void airy_series(double t, double& ai, double& aip) {
    constexpr double kAi0 = 0.35502805388781723926; // 3^{-2/3} / Gamma(2/3)
    constexpr double kAip0 = -0.25881940379280679840; // -3^{-1/3} / Gamma(1/3)
    if (t == 0.0) {
        ai = kAi0;
        aip = kAip0;
        return;
    }
    const double t3 = t * t * t;
    double af = 1.0, ag = t; // term k of f and g
    double f = af, g = ag;
    double fp = 0.0, gp = 1.0; // term-wise derivatives: 3k af/t and (3k+1) ag/t
    for (int k = 1; k < 80; ++k) {
        const double k3 = 3.0 * k;
        af *= t3 / ((k3 - 1.0) * k3);
        ag *= t3 / (k3 * (k3 + 1.0));
        f += af;
        g += ag;
        fp += k3 * af / t;
        gp += (k3 + 1.0) * ag / t;
        if (std::fabs(af) < 1e-22 && std::fabs(ag) < 1e-22) break;
    }
    ai = kAi0 * f + kAip0 * g;
    aip = kAi0 * fp + kAip0 * gp;
}

// DLMF 9.7 asymptotic expansions, |t| >= ~7.
void airy_asymptotic(double t, double& ai, double& aip) {
    constexpr int kTerms = 14;
    double u[kTerms], v[kTerms];
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
        u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
               (216.0 * k * (2.0 * k - 1.0));
        v[k] = u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    }
    const double at = std::fabs(t);
    const double zeta = (2.0 / 3.0) * at * std::sqrt(at);
    const double q = std::sqrt(kPi);
    if (t > 0.0) {
        double se = 0.0, so = 0.0, term = 1.0, best = 1e300;
        double sp = 0.0, term_p;
        for (int k = 0; k < kTerms; ++k) {
            term = u[k] / std::pow(zeta, k);
            if (std::fabs(term) > best) break; // divergent tail
            best = std::fabs(term);
            se += (k % 2 == 0 ? term : -term);
            term_p = v[k] / std::pow(zeta, k);
            sp += (k % 2 == 0 ? term_p : -term_p);
        }
        (void)so;
        const double pref = std::exp(-zeta) / (2.0 * q * std::pow(t, 0.25));
        ai = pref * se;
        aip = -std::pow(t, 0.25) * std::exp(-zeta) / (2.0 * q) * sp;
    } else {
        double ce = 0.0, co = 0.0, de = 0.0, dob = 0.0;
        for (int k = 0; 2 * k < kTerms; ++k) {
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            ce += sgn * u[2 * k] / std::pow(zeta, 2 * k);
            de += sgn * v[2 * k] / std::pow(zeta, 2 * k);
            if (2 * k + 1 < kTerms) {
                co += sgn * u[2 * k + 1] / std::pow(zeta, 2 * k + 1);
                dob += sgn * v[2 * k + 1] / std::pow(zeta, 2 * k + 1);
            }
        }
        const double w = zeta - kPi / 4.0;
        const double cw = std::cos(w), sw = std::sin(w);
        ai = (cw * ce + sw * co) / (q * std::pow(at, 0.25));
        aip = std::pow(at, 0.25) / q * (sw * de - cw * dob);
    }
}

} // namespace

AiryPair airy_ai(double t) {
    // validated range; asymptotic error only shrinks toward the ends
    if (std::fabs(t) > 30.0)
        throw std::invalid_argument("specfun: airy_ai supports t in [-30, 30]");
    AiryPair p{};
    if (std::fabs(t) <= 7.0)
        airy_series(t, p.ai, p.ai_prime);
    else
        airy_asymptotic(t, p.ai, p.ai_prime);
    return p;
}

std::complex<double> pr_bulk(long long N, double z, double lambda) {
    const double edge = 4.0 * std::pow(static_cast<double>(N), -2.0 / 3.0);
    if (std::fabs(z) > 1.0 - edge)
        throw std::invalid_argument("specfun: pr_bulk rejects the edge regime");
    const Semicircle s = semicircle(z);
    const double mod = std::sqrt(1.0 / kPi) * std::pow(1.0 - z * z, -0.25);
    const double phase = kPi * (static_cast<double>(N) * s.tail - std::asin(z) / (2.0 * kPi) + lambda);
    return mod * std::exp(std::complex<double>(0.0, phase));
}

std::complex<double> log_trunc(double eps, std::complex<double> w) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("specfun: eps must be in (0,1]");
    if (std::abs(w) > 1.0 + 1e-12) throw std::invalid_argument("specfun: log_trunc needs |w| <= 1");
    std::complex<double> sum = 0.0, pw = 1.0;
    for (long long k = 1; static_cast<double>(k) * eps < 1.0; ++k) {
        pw *= w;
        sum += pw / static_cast<double>(k);
    }
    return -sum;
}

double theta_sum(long long N, double z, long long m, long long n) {
    const double nz2 = static_cast<double>(N) * z * z;
    // every summand theta_k, k = m+1..n, must be in the elliptic range
    if (m < 0 || !(static_cast<double>(m) + 1.0 > nz2))
        throw std::invalid_argument("specfun: theta_sum requires m + 1 > N z^2");
    if (m > n || n > N) throw std::invalid_argument("specfun: theta_sum requires m <= n <= N");
    const double sq = z * std::sqrt(static_cast<double>(N));
    double sum = 0.0, comp = 0.0;
    for (long long k = m + 1; k <= n; ++k) {
        const double th = std::acos(sq / std::sqrt(static_cast<double>(k)));
        const double y = th - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

long long parabolic_index(long long N, double z, double T) {
    const double nz2 = static_cast<double>(N) * z * z;
    const double L = std::cbrt(std::max(1.0, std::ceil(nz2)));
    return static_cast<long long>(std::floor(nz2 + T * L));
}

double theta_sum_prediction(long long N, double z, double T) {
    const double pm = (z >= 0.0) ? 1.0 : -1.0;
    const long long NT = parabolic_index(N, z, T);
    double v = -pm * ((2.0 / 3.0) * std::pow(T, 1.5) - kPi / 4.0) - 0.5 * std::asin(z);
    if (z < 0.0) v -= kPi * static_cast<double>(NT);
    return v;
}

} // namespace betalab::specfun
