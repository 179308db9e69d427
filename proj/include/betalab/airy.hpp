#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace betalab::airy {

// Discretized stochastic Airy function: (SAi_t, SAi'_t) integrated DOWNWARD
// from deterministic Airy data at t_max (the decaying solution is stable in
// that direction and the noise is negligible where Ai is tiny).
struct AiryPath {
    double beta = 0.0;
    double lambda = 0.0;
    double t_max = 0.0;
    double t_min = 0.0;
    std::vector<double> t;    // decreasing, t[0] = t_max
    std::vector<double> sai;  // SAi_{t[j]}(lambda)
    std::vector<double> saip; // SAi'_{t[j]}(lambda)
    std::vector<double> bm;   // Brownian increments per step

    // linear interpolation at time s (t_min <= s <= t_max)
    double sai_at(double s) const;
    double saip_at(double s) const;
};

AiryPath solve_sai(double beta, double lambda, double t_max, double t_min, long long steps,
                   std::uint64_t seed);

// exp(varpi_t^+-) = SAi_{-t} +- i t^{-1/2} SAi'_{-t};  minus = conj(plus) for real input.
struct VarpiPair {
    std::complex<double> plus;
    std::complex<double> minus;
};
VarpiPair varpi_phase(const AiryPath& path, double t);

// Edge comparison of the characteristic polynomial against Ai / SAi:
// deterministic (beta = infinity) check of
//   N^{-1/6} (+-)^N Phi_N(+-(1 + lambda/(2 N^{2/3}))) vs Ai(lambda),
// plus a finite-beta Monte-Carlo mean diagnostic.
struct EdgeRow {
    double lambda = 0.0;
    double deterministic = 0.0; // beta = infinity scaled value
    double airy = 0.0;
    double rel_err = 0.0;
    double mc_mean = 0.0;   // mean of the scaled polynomial at finite beta
    double mc_se = 0.0;
    double prefactor_mean = 0.0; // mean of exp(M_N(+-)/sqrt(beta) - [M_N]/2beta)
};
std::vector<EdgeRow> edge_compare(long long N, int sign, const std::vector<double>& lambdas,
                                  long long replicates, double beta, std::uint64_t seed);

} // namespace betalab::airy
