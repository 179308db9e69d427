#pragma once

#include <complex>
#include <cstdint>

namespace betalab::specfun {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Model geometry at spectral parameter z: turning point, parabolic scale,
// semicircle density/tail and the mesoscopic scale eps_N.
struct SpectrumGeometry {
    long long N = 0;
    double z = 0.0;
    long long N0 = 0;  // floor(N z^2)
    double L = 1.0;    // ceil(N z^2)^{1/3}
    double rho = 0.0;  // semicircle density at z
    double F = 0.0;    // semicircle tail integral on [z, 1]
    double epsN = 0.0; // 1 / max(N^{1/3}, N rho^2)

    static SpectrumGeometry at(long long N, double z);
};

// density (2/pi) sqrt(1-x^2) on [-1,1]  and tail F(x) = int_x^1 density, clamped to [0,1]
struct Semicircle {
    double density;
    double tail;
};
Semicircle semicircle(double x);

// J(w) = w -+ sqrt(w^2-1) for +-w >= 1, e^{-i arccos w} on [-1,1]; maps R into the
// closed unit disk, |J| = 1 iff |w| <= 1.
std::complex<double> joukowsky(double w);

// sqrt(w^2-1) on the branch consistent with J: equal to w - J(w).
// Real (sign of w) outside [-1,1], +i sqrt(1-w^2) inside.
std::complex<double> sqrt_j_branch(double w);

// theta_n(z) = arccos(z sqrt(N/n)); requires n > N z^2 (elliptic range).
double angle_theta(long long n, double z, long long N);

// delta_n(z) = 1/sqrt(n - N z^2); requires n > N z^2.
double scale_delta(long long n, double z, long long N);

// Hermite reference function h_n(z) = E Phi_n(z), by the beta = infinity
// recursion in log-scaled form. Exact up to rounding for n up to 1e7.
double hermite_normalized(long long n, long long N, double z);

// Same value split as mantissa * exp(log_scale); safe when h_n over/underflows.
struct ScaledValue {
    double mantissa;
    double log_scale;
    double value() const;
};
ScaledValue hermite_normalized_scaled(long long n, long long N, double z);

// log w_n(z) = (1/4) log(N/2pi) - N z^2 + (1/2) sum_{k<=n} log(4N/k)
double log_weight(long long n, long long N, double z);

// Airy function pair (Ai, Ai') for t in [-30, 30]: Maclaurin series stitched to
// the standard asymptotic expansions at |t| = 7.
struct AiryPair {
    double ai;
    double ai_prime;
};
AiryPair airy_ai(double t);

// Plancherel-Rotach leading order in the bulk:
//   sqrt(1/pi) (1-z^2)^{-1/4} exp(i pi (N F(z) - arcsin(z)/(2 pi) + lambda)).
// Its real part approximates h_N(z + lambda/(N rho(z))). Rejects the edge
// regime |z| > 1 - 4 N^{-2/3}.
std::complex<double> pr_bulk(long long N, double z, double lambda);

// Truncated logarithm log_eps(1-w) = -sum_{k eps < 1} w^k / k.
std::complex<double> log_trunc(double eps, std::complex<double> w);

// Exact partial sum  vartheta_{n,m}(z) = sum_{k=m+1}^n theta_k(z); m > N z^2.
double theta_sum(long long N, double z, long long m, long long n);

// Asymptotic prediction for vartheta_{N,N_T}(z) - pi N F(z):
//   -pi N_T(z) 1{z<0} -+ (2/3 T^{3/2} - pi/4) - arcsin(z)/2,  -+ = -sgn(z).
double theta_sum_prediction(long long N, double z, double T);

// N_T(z) = floor(N z^2 + T L(z))
long long parabolic_index(long long N, double z, double T);

} // namespace betalab::specfun
