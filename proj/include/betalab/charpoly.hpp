#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "betalab/noise.hpp"

namespace betalab::charpoly {

namespace detail {

// Scaled pair (p_{n-1}, p_n) with shared exponent: p_n = mantissa * e^{expo}.
// Mantissas are kept within [1e-2, 1e2] by power-of-e shifts, which never
// change the represented value. Sign changes of the Sturm sequence are
// tracked as we go; a zero value inherits the opposite sign of its
// predecessor (Sturm convention, measure-zero but must be deterministic).
struct ScaledRecursion {
    double p_prev = 0.0;
    double p_cur = 1.0; // p_0
    double expo = 0.0;
    int sign_prev = 1;        // sign of p_0
    long long sign_changes = 0; // changes in {p_0, ..., p_n}

    void step(double diag, double off) {
        const double p_new = diag * p_cur - off * p_prev;
        p_prev = p_cur;
        p_cur = p_new;
        int s = (p_new > 0.0) ? 1 : (p_new < 0.0 ? -1 : -sign_prev);
        if (s != sign_prev) ++sign_changes;
        sign_prev = s;
        const double m = std::max(std::fabs(p_prev), std::fabs(p_cur));
        if (m > 1e2 || (m > 0.0 && m < 1e-2)) {
            const double sh = std::floor(std::log(m));
            const double f = std::exp(-sh);
            p_prev *= f;
            p_cur *= f;
            expo += sh;
        }
    }
};

// Model coefficients for step n (producing p_{n+1}):
//   diag = z - b_{n+1}/(2 sqrt(N beta)),   off = a_n^2/(4 N beta)  (0 for n = 0).
struct StepCoeffs {
    double diag;
    double off;
};
StepCoeffs step_coeffs(const NoiseStream& stream, long long n, long long N, double z);

} // namespace detail

// Trajectory of the monic characteristic polynomials p_n(z) = det[z - A/sqrt(4 N beta)]_n
// in scaled form, n = 0..N+1, with enough bookkeeping to recover the
// normalized Phi_n = w_n p_n and Sturm counts of every minor.
class CharPolyTrajectory {
public:
    long long N = 0;
    double z = 0.0;
    double beta = 0.0;

    // p_n = mantissa[n] * exp(exponent[n]); sturm[n] = #(sign changes in p_0..p_n)
    std::vector<double> mantissa;
    std::vector<double> exponent;
    std::vector<long long> sturm;

    // normalized value Phi_n(z) = p_n(z) w_n(z); may overflow for deep
    // hyperbolic stretches, use log_abs_phi then.
    double phi(long long n) const;
    double log_abs_phi(long long n) const; // -inf at an exact zero
    int sign_phi(long long n) const;
    double log_norm_w(long long n) const;

    // number of eigenvalues of the n x n minor that are >= z
    long long count_at_or_above(long long n) const;
};

// Run the three-term recursion for n = 0..N+1 from (p_{-1}, p_0) = (0, 1).
CharPolyTrajectory run_recursion(const NoiseStream& stream, long long N, double z);

// Sturm count oracle on a stored trajectory; 1 <= n <= N.
long long sturm_count(const CharPolyTrajectory& trajectory, long long n);

// All eigenvalues of the scaled n x n Jacobi minor (n <= 64) by bisection on
// the Sturm count, to 1e-12 absolute, sorted ascending.
std::vector<double> eigen_oracle(const NoiseStream& stream, long long n, long long N);

// Near-zero normalization (independent of N):
//   hat{Phi}_n(mu) = det[mu - beta^{-1/2} A]_n * sqrt(prod_{k<=n} 1/k).
double hatted_charpoly(const NoiseStream& stream, long long n, double mu);

struct SignedLog {
    int sign;
    double log_abs;
    double value() const { return sign * std::exp(log_abs); }
};

// log |Phi_N(z)| and its sign without storing the trajectory.
SignedLog log_charpoly(const NoiseStream& stream, long long N, double z);

// Coupled ratio Phi_N(z_num) / Phi_N(z_den) on one noise stream (one entry
// fetch per index drives both recursions).
double charpoly_ratio(const NoiseStream& stream, long long N, double z_num, double z_den);

} // namespace betalab::charpoly
