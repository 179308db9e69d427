#pragma once

#include <complex>
#include <cstdint>

#include "betalab/noise.hpp"
#include "betalab/prufer.hpp"

namespace betalab::fields {

using cplx = std::complex<double>;

// Running values of the martingale fields and their predictable brackets.
// Increments with |k - N z^2| < T L(z) are excluded; W additionally needs
// phi_{k-1}, so a couple of indices right at the window edge are skipped
// when the trajectory starts there (effect O(1/L), below every tolerance
// used here).
struct MartingaleLedger {
    double z = 0.0;
    long long N = 0;
    double beta = 0.0;
    double T = 1.0;
    long long excluded_lo = 0; // window Gamma_T(z) as [lo, hi)
    long long excluded_hi = 0;

    cplx G{};
    cplx W{};
    cplx M{}; // G + conj(W)

    cplx bracket_GG{};      // [G, G]
    double bracket_GGbar = 0.0; // [G, conj G]  (real by construction)
    cplx bracket_WW{};      // [W, W]
    double bracket_WWbar = 0.0; // [W, conj W]
};

// Accumulate G, W, M and brackets along a stored phase trajectory; the stream
// must be the one the trajectory was built from.
MartingaleLedger accumulate_fields(const NoiseStream& stream, double z, long long N, double T,
                                   const prufer::PhaseTrajectory& phase);

// Exact deterministic sums [G_n(z), G_n(x)] and [G_n(z), conj G_n(x)] with the
// turning-point windows of both z and x excluded; n_max caps the summation
// index (default N).
struct GBracketPair {
    cplx bracket;
    cplx bracket_conj;
};
GBracketPair bracket_G_pair(double z, double x, long long N, double T, long long n_max = -1);

// Theoretical covariance curves for M_N and the regime classification.
struct CovarianceTheory {
    cplx MM;
    cplx MMbar;
    bool global_regime = true;
    double boundary = 0.0; // N^{-2/3} [z]_N^{-1/3}
};
CovarianceTheory covariance_theory(double z, double x, long long N);

// Fused single-pass evaluation of everything the Monte-Carlo experiments
// need: anchored psi_N, the ledger, Sturm count and log|Phi_N|.
struct ScanSummary {
    std::complex<double> psi_N{};
    MartingaleLedger ledger{};
    long long sturm_N = 0;
    int sign_phi_N = 0;
    double log_abs_phi_N = 0.0;
    double max_exactness_err = 0.0; // |cos(phi_n) - Phi_n / |exp psi_n|| along the pass
    long long counting_checks = 0;
    long long n_start = 0;
};
ScanSummary scan_summary(const NoiseStream& stream, double z, long long N, double T = 1.0);

} // namespace betalab::fields
