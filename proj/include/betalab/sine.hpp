#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace betalab::sine {

// Discretized strong solution of the complex sine SDE
//   d omega_t(lambda) = i pi lambda / sqrt(t) dt + sqrt(2/(beta t)) (1 - e^{-i Im omega}) dZ_t
// on a geometric-then-uniform grid, omega = 0 on [0, delta0]. One complex
// Brownian path drives all lambdas.
struct SinePath {
    double beta = 0.0;
    std::vector<double> lambdas;
    std::vector<double> t;                            // grid, t[0] = 0
    std::vector<std::vector<std::complex<double>>> omega; // omega[i_lambda][i_t]
    std::vector<double> dz_re, dz_im;                 // noise record per step (t[j-1] -> t[j])
    double delta0 = 0.0;

    std::complex<double> at_end(std::size_t i_lambda) const { return omega[i_lambda].back(); }
};

SinePath solve_sine(double beta, std::vector<double> lambdas, double t_end, long long steps,
                    std::uint64_t seed);

// Re-solve the Im component at a probe lambda reusing the stored noise record
// (pathwise coupling for level-crossing bisection). Returns Im omega_{t_end}(lambda).
double im_omega_on_noise(const SinePath& path, double lambda);

// Sine-beta points in [0, Lambda]: levels Im omega_1(lambda) = 2 pi k - alpha
// with alpha ~ U[0, 2 pi], located by bracketing on a lambda-grid of spacing
// 0.25 and bisection (<= 40 iterations, tolerance 1e-6).
std::vector<double> sine_points(double beta, double window_end, std::uint64_t seed);

// Stochastic zeta zeta_beta(lambda) = Re(e^{i alpha + omega_1(lambda)/2}) / Re(e^{i alpha})
// per stored lambda (the ratio exponent carries half the counting phase).
std::vector<double> zeta_eval(const SinePath& path, double alpha);

// Time-changed variant (u(t) = (t/2pi)^2): d psi = i lambda dt + (2/sqrt(beta t))(1-e^{-i Im psi}) dZ~.
// Used to cross-check the time-change consistency of the solver.
SinePath solve_sine_timechanged(double beta, std::vector<double> lambdas, double t_end,
                                long long steps, std::uint64_t seed);

} // namespace betalab::sine
