#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "betalab/charpoly.hpp"
#include "betalab/noise.hpp"

namespace betalab::prufer {

// Signals a step whose principal-branch increment was too large to unwrap
// safely (too close to the turning point), or a failed counting checkpoint.
// Callers may retry with a larger n_start.
struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unwrapped complex Prufer phase psi_n = rho_n + i phi_n over [n_start, N].
//
// Branch convention: exp(psi_n) = xi_n with Phi_n = Re(exp psi_n), and the
// imaginary part is anchored so that
//     floor((phi_n + pi/2) / pi) = #{ eigenvalues of the n x n minor >= z }.
struct PhaseTrajectory {
    long long N = 0;
    double z = 0.0;
    double beta = 0.0;
    long long n_start = 0;
    long long anchor_index = 0;
    long long anchor_sturm = 0;

    std::vector<std::complex<double>> psi; // psi[n - n_start], n in [n_start, N]
    std::vector<std::complex<double>> ratio_log; // per-step principal increments (audit)

    std::complex<double> psi_at(long long n) const { return psi.at(n - n_start); }
    double phi(long long n) const { return psi_at(n).imag(); }
    double rho(long long n) const { return psi_at(n).real(); }
    std::uint64_t stream_key = 0; // identity of the generating stream
};

// xi_n(z) from normalized polynomial values:
//   xi_n = i sqrt(n/(n - N z^2)) ( e^{-i theta_n} Phi_n - sqrt((n+1)/n) Phi_{n+1} ),
// satisfying Re(xi_n) = Phi_n exactly. Requires n > N z^2.
std::complex<double> xi_from_polys(double z, long long n, double phi_n, double phi_np1,
                                   long long N);

// default n_start = N0(z) + ceil(L(z))
long long default_n_start(long long N, double z);

struct TrajectoryOptions {
    std::optional<long long> n_start{};
    bool keep_ratio_log = false;
};

PhaseTrajectory phase_trajectory(const NoiseStream& stream, double z, long long N,
                                 const TrajectoryOptions& options = {});

// Coupled relative phase varphi_N(lambda; z) = 2 conj(psi_N(z + lambda/(N rho(z))) - psi_N(z)),
// all lambdas evaluated on the same noise stream. The conjugation orients the
// imaginary part to count window eigenvalues positively (non-decreasing in
// lambda, mean 2 pi lambda), matching the complex sine limit.
// Requires N^{1/3} rho(z) >= 8.
std::vector<std::complex<double>> relative_phase(const NoiseStream& stream, double z,
                                                 const std::vector<double>& lambdas, long long N);

// Omega_N(z) = psi_N(z) - i pi N F(z) + c_beta log(1-z^2) + M_N(z)/sqrt(beta),
// c_beta = 1/4 - 1/(2 beta)  (M-term absent at beta = infinity).
std::complex<double> omega_error(const PhaseTrajectory& trajectory, std::complex<double> m_field);

// Imaginary part wrapped to (-pi, pi].
std::complex<double> omega_error_wrapped(const PhaseTrajectory& trajectory,
                                         std::complex<double> m_field);

} // namespace betalab::prufer
