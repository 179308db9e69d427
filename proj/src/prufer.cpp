#include "betalab/prufer.hpp"

#include "betalab/specfun.hpp"
#include "bulk_core.hpp"

#include <cmath>

namespace betalab::prufer {

using detail::cplx;

std::complex<double> xi_from_polys(double z, long long n, double phi_n, double phi_np1,
                                   long long N) {
    const double nd = static_cast<double>(n);
    const double nz2 = static_cast<double>(N) * z * z;
    if (!(nd > nz2)) throw std::invalid_argument("prufer: xi_from_polys requires n > N z^2");
    const double cth = z * std::sqrt(static_cast<double>(N) / nd);
    const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
    const cplx pref(0.0, std::sqrt(nd / (nd - nz2)));
    return pref * (cplx(cth, -sth) * phi_n - std::sqrt((nd + 1.0) / nd) * phi_np1);
}

long long default_n_start(long long N, double z) {
    const double nz2 = static_cast<double>(N) * z * z;
    const double L = std::cbrt(std::max(1.0, std::ceil(nz2)));
    return static_cast<long long>(std::floor(nz2)) + static_cast<long long>(std::ceil(L));
}

PhaseTrajectory phase_trajectory(const NoiseStream& stream, double z, long long N,
                                 const TrajectoryOptions& options) {
    detail::BulkOptions opt;
    opt.n_start = options.n_start;
    opt.store_psi = true;
    opt.keep_ratio_log = options.keep_ratio_log;
    opt.want_fields = false;
    auto r = detail::bulk_pass(stream, z, N, opt);
    PhaseTrajectory t;
    t.N = N;
    t.z = z;
    t.beta = stream.params().beta;
    t.n_start = r.n_start;
    t.anchor_index = r.n_start;
    t.anchor_sturm = r.anchor_sturm;
    t.psi = std::move(r.psi);
    t.ratio_log = std::move(r.ratio_log);
    t.stream_key = stream.identity_key();
    return t;
}

std::vector<std::complex<double>> relative_phase(const NoiseStream& stream, double z,
                                                 const std::vector<double>& lambdas,
                                                 long long N) {
    const auto g = specfun::SpectrumGeometry::at(N, z);
    if (std::cbrt(static_cast<double>(N)) * g.rho < 8.0)
        throw std::invalid_argument("prufer: relative_phase requires N^{1/3} rho(z) >= 8");
    std::vector<std::complex<double>> out;
    out.reserve(lambdas.size());
    detail::BulkOptions opt; // defaults: phase only
    const auto base = detail::bulk_pass(stream, z, N, opt);
    for (double lam : lambdas) {
        if (lam == 0.0) {
            out.emplace_back(0.0, 0.0);
            continue;
        }
        const double zl = z + lam / (static_cast<double>(N) * g.rho);
        if (!(zl > -1.0 && zl < 1.0))
            throw std::invalid_argument("prufer: shifted parameter left (-1, 1)");
        const auto shifted = detail::bulk_pass(stream, zl, N, opt);
        // Conjugate orientation: the counting-anchored phase decreases through
        // eigenvalues, so Im of the raw difference counts the window content
        // negatively. Conjugating matches the sine-limit normalization
        // (Im increasing in lambda, mean 2 pi lambda) while leaving the
        // polynomial-ratio reconstruction unchanged.
        out.push_back(2.0 * std::conj(shifted.psi_N - base.psi_N));
    }
    return out;
}

std::complex<double> omega_error(const PhaseTrajectory& trajectory, std::complex<double> m_field) {
    const auto s = specfun::semicircle(trajectory.z);
    const double cb = std::isinf(trajectory.beta) ? 0.25 : 0.25 - 0.5 / trajectory.beta;
    cplx om = trajectory.psi_at(trajectory.N) -
              cplx(0.0, specfun::kPi * static_cast<double>(trajectory.N) * s.tail) +
              cb * std::log(1.0 - trajectory.z * trajectory.z);
    if (!std::isinf(trajectory.beta)) om += m_field / std::sqrt(trajectory.beta);
    return om;
}

std::complex<double> omega_error_wrapped(const PhaseTrajectory& trajectory,
                                         std::complex<double> m_field) {
    const cplx om = omega_error(trajectory, m_field);
    return {om.real(), detail::wrap_pi(om.imag())};
}

} // namespace betalab::prufer
