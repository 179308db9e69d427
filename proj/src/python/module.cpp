#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "betalab/airy.hpp"
#include "betalab/charpoly.hpp"
#include "betalab/experiments.hpp"
#include "betalab/fields.hpp"
#include "betalab/noise.hpp"
#include "betalab/prufer.hpp"
#include "betalab/sine.hpp"
#include "betalab/specfun.hpp"
#include "betalab/stats.hpp"

#include <limits>
#include <optional>

namespace py = pybind11;
using namespace betalab;

namespace {

NoiseParams make_params(double beta, std::uint64_t seed) {
    NoiseParams p;
    p.beta = beta;
    p.seed = seed;
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gaussian beta-ensemble characteristic polynomial laboratory";
    m.attr("__version__") = experiments::kArtifactVersion;
    m.attr("BETA_INF") = std::numeric_limits<double>::infinity();

    // ---- specfun ----
    m.def("semicircle", [](double x) {
        const auto s = specfun::semicircle(x);
        return py::make_tuple(s.density, s.tail);
    }, py::arg("x"), "semicircle density and tail integral F");
    m.def("joukowsky", &specfun::joukowsky, py::arg("w"));
    m.def("angle_theta", &specfun::angle_theta, py::arg("n"), py::arg("z"), py::arg("N"));
    m.def("scale_delta", &specfun::scale_delta, py::arg("n"), py::arg("z"), py::arg("N"));
    m.def("hermite_normalized", &specfun::hermite_normalized, py::arg("n"), py::arg("N"),
          py::arg("z"));
    m.def("airy_ai", [](double t) {
        const auto a = specfun::airy_ai(t);
        return py::make_tuple(a.ai, a.ai_prime);
    }, py::arg("t"), "(Ai, Ai') on [-20, 20]");
    m.def("pr_bulk", &specfun::pr_bulk, py::arg("N"), py::arg("z"), py::arg("lam"));
    m.def("log_trunc", &specfun::log_trunc, py::arg("eps"), py::arg("w"));
    m.def("theta_sum", &specfun::theta_sum, py::arg("N"), py::arg("z"), py::arg("m"), py::arg("n"));
    m.def("theta_sum_prediction", &specfun::theta_sum_prediction, py::arg("N"), py::arg("z"),
          py::arg("T"));

    // ---- noise ----
    py::class_<NoiseStream>(m, "NoiseStream")
        .def(py::init([](double beta, std::uint64_t seed, std::uint64_t replicate) {
                 return NoiseStream(make_params(beta, seed), replicate);
             }),
             py::arg("beta"), py::arg("seed"), py::arg("replicate") = 0)
        .def("b1", &NoiseStream::b1)
        .def("entry",
             [](const NoiseStream& s, std::uint64_t k) {
                 const auto e = s.entry(k);
                 return py::make_tuple(e.b, e.a_sq, e.x, e.y);
             },
             py::arg("k"), "(b_{k+1}, a_k^2, X_k, Y_k)")
        .def("z_field", &NoiseStream::z_field, py::arg("k"), py::arg("z"), py::arg("N"))
        .def("sign_flipped", &NoiseStream::sign_flipped);

    // ---- charpoly ----
    py::class_<charpoly::CharPolyTrajectory>(m, "CharPolyTrajectory")
        .def_readonly("N", &charpoly::CharPolyTrajectory::N)
        .def_readonly("z", &charpoly::CharPolyTrajectory::z)
        .def_readonly("beta", &charpoly::CharPolyTrajectory::beta)
        .def_readonly("mantissa", &charpoly::CharPolyTrajectory::mantissa)
        .def_readonly("exponent", &charpoly::CharPolyTrajectory::exponent)
        .def("phi", &charpoly::CharPolyTrajectory::phi, py::arg("n"))
        .def("log_abs_phi", &charpoly::CharPolyTrajectory::log_abs_phi, py::arg("n"))
        .def("sign_phi", &charpoly::CharPolyTrajectory::sign_phi, py::arg("n"));
    m.def("run_recursion", &charpoly::run_recursion, py::arg("stream"), py::arg("N"), py::arg("z"));
    m.def("sturm_count", &charpoly::sturm_count, py::arg("trajectory"), py::arg("n"));
    m.def("eigen_oracle", &charpoly::eigen_oracle, py::arg("stream"), py::arg("n"), py::arg("N"));
    m.def("hatted_charpoly", &charpoly::hatted_charpoly, py::arg("stream"), py::arg("n"),
          py::arg("mu"));
    m.def("charpoly_ratio", &charpoly::charpoly_ratio, py::arg("stream"), py::arg("N"),
          py::arg("z_num"), py::arg("z_den"));

    // ---- prufer ----
    py::register_exception<prufer::BranchError>(m, "BranchError");
    py::class_<prufer::PhaseTrajectory>(m, "PhaseTrajectory")
        .def_readonly("N", &prufer::PhaseTrajectory::N)
        .def_readonly("z", &prufer::PhaseTrajectory::z)
        .def_readonly("n_start", &prufer::PhaseTrajectory::n_start)
        .def_readonly("anchor_sturm", &prufer::PhaseTrajectory::anchor_sturm)
        .def_readonly("psi", &prufer::PhaseTrajectory::psi)
        .def("psi_at", &prufer::PhaseTrajectory::psi_at, py::arg("n"))
        .def("phi", &prufer::PhaseTrajectory::phi, py::arg("n"))
        .def("rho", &prufer::PhaseTrajectory::rho, py::arg("n"));
    m.def("xi_from_polys", &prufer::xi_from_polys, py::arg("z"), py::arg("n"), py::arg("phi_n"),
          py::arg("phi_np1"), py::arg("N"));
    m.def(
        "phase_trajectory",
        [](const NoiseStream& s, double z, long long N, std::optional<long long> n_start) {
            prufer::TrajectoryOptions opt;
            opt.n_start = n_start;
            return prufer::phase_trajectory(s, z, N, opt);
        },
        py::arg("stream"), py::arg("z"), py::arg("N"), py::arg("n_start") = std::nullopt);
    m.def("relative_phase", &prufer::relative_phase, py::arg("stream"), py::arg("z"),
          py::arg("lambdas"), py::arg("N"));
    m.def("omega_error", &prufer::omega_error, py::arg("trajectory"), py::arg("m_field"));

    // ---- fields ----
    py::class_<fields::MartingaleLedger>(m, "MartingaleLedger")
        .def_readonly("G", &fields::MartingaleLedger::G)
        .def_readonly("W", &fields::MartingaleLedger::W)
        .def_readonly("M", &fields::MartingaleLedger::M)
        .def_readonly("bracket_GG", &fields::MartingaleLedger::bracket_GG)
        .def_readonly("bracket_GGbar", &fields::MartingaleLedger::bracket_GGbar)
        .def_readonly("bracket_WW", &fields::MartingaleLedger::bracket_WW)
        .def_readonly("bracket_WWbar", &fields::MartingaleLedger::bracket_WWbar)
        .def_readonly("excluded_lo", &fields::MartingaleLedger::excluded_lo)
        .def_readonly("excluded_hi", &fields::MartingaleLedger::excluded_hi);
    m.def("accumulate_fields", &fields::accumulate_fields, py::arg("stream"), py::arg("z"),
          py::arg("N"), py::arg("T"), py::arg("phase"));
    m.def(
        "bracket_G_pair",
        [](double z, double x, long long N, double T, long long n_max) {
            const auto g = fields::bracket_G_pair(z, x, N, T, n_max);
            return py::make_tuple(g.bracket, g.bracket_conj);
        },
        py::arg("z"), py::arg("x"), py::arg("N"), py::arg("T") = 1.0, py::arg("n_max") = -1);
    m.def("covariance_theory", [](double z, double x, long long N) {
        const auto t = fields::covariance_theory(z, x, N);
        py::dict d;
        d["MM"] = t.MM;
        d["MMbar"] = t.MMbar;
        d["global_regime"] = t.global_regime;
        d["boundary"] = t.boundary;
        return d;
    }, py::arg("z"), py::arg("x"), py::arg("N"));
    py::class_<fields::ScanSummary>(m, "ScanSummary")
        .def_readonly("psi_N", &fields::ScanSummary::psi_N)
        .def_readonly("sturm_N", &fields::ScanSummary::sturm_N)
        .def_readonly("log_abs_phi_N", &fields::ScanSummary::log_abs_phi_N)
        .def_readonly("sign_phi_N", &fields::ScanSummary::sign_phi_N)
        .def_readonly("max_exactness_err", &fields::ScanSummary::max_exactness_err)
        .def_readonly("n_start", &fields::ScanSummary::n_start)
        .def_property_readonly("ledger",
                               [](const fields::ScanSummary& s) { return s.ledger; });
    m.def("scan_summary", &fields::scan_summary, py::arg("stream"), py::arg("z"), py::arg("N"),
          py::arg("T") = 1.0);

    // ---- sine ----
    py::class_<sine::SinePath>(m, "SinePath")
        .def_readonly("beta", &sine::SinePath::beta)
        .def_readonly("lambdas", &sine::SinePath::lambdas)
        .def_readonly("t", &sine::SinePath::t)
        .def_readonly("omega", &sine::SinePath::omega)
        .def_readonly("delta0", &sine::SinePath::delta0)
        .def("at_end", &sine::SinePath::at_end, py::arg("i_lambda"));
    m.def("solve_sine", &sine::solve_sine, py::arg("beta"), py::arg("lambdas"), py::arg("t_end"),
          py::arg("steps"), py::arg("seed"));
    m.def("im_omega_on_noise", &sine::im_omega_on_noise, py::arg("path"), py::arg("lam"));
    m.def("sine_points", &sine::sine_points, py::arg("beta"), py::arg("window_end"),
          py::arg("seed"));
    m.def("zeta_eval", &sine::zeta_eval, py::arg("path"), py::arg("alpha"));

    // ---- airy ----
    py::class_<airy::AiryPath>(m, "AiryPath")
        .def_readonly("beta", &airy::AiryPath::beta)
        .def_readonly("lam", &airy::AiryPath::lambda)
        .def_readonly("t", &airy::AiryPath::t)
        .def_readonly("sai", &airy::AiryPath::sai)
        .def_readonly("saip", &airy::AiryPath::saip)
        .def("sai_at", &airy::AiryPath::sai_at, py::arg("t"))
        .def("saip_at", &airy::AiryPath::saip_at, py::arg("t"));
    m.def("solve_sai", &airy::solve_sai, py::arg("beta"), py::arg("lam"), py::arg("t_max"),
          py::arg("t_min"), py::arg("steps"), py::arg("seed"));
    m.def("varpi_phase", [](const airy::AiryPath& p, double t) {
        const auto v = airy::varpi_phase(p, t);
        return py::make_tuple(v.plus, v.minus);
    }, py::arg("path"), py::arg("t"));
    m.def(
        "edge_compare",
        [](long long N, int sign, const std::vector<double>& lambdas, long long replicates,
           double beta, std::uint64_t seed) {
            py::list rows;
            for (const auto& r : airy::edge_compare(N, sign, lambdas, replicates, beta, seed)) {
                py::dict d;
                d["lambda"] = r.lambda;
                d["deterministic"] = r.deterministic;
                d["airy"] = r.airy;
                d["rel_err"] = r.rel_err;
                d["mc_mean"] = r.mc_mean;
                d["mc_se"] = r.mc_se;
                d["prefactor_mean"] = r.prefactor_mean;
                rows.append(d);
            }
            return rows;
        },
        py::arg("N"), py::arg("sign"), py::arg("lambdas"), py::arg("replicates") = 0,
        py::arg("beta") = 2.0, py::arg("seed") = 0);

    // ---- stats ----
    m.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) {
        const auto k = stats::ks_two_sample(std::move(a), std::move(b));
        return py::make_tuple(k.distance, k.threshold);
    }, py::arg("a"), py::arg("b"));
    m.def("complex_cov",
          [](const std::vector<std::complex<double>>& x,
             const std::vector<std::complex<double>>& y) {
              const auto c = stats::complex_cov(x, y);
              return py::make_tuple(c.pseudo, c.herm);
          },
          py::arg("x"), py::arg("y"));
    m.def("slope_fit", [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const auto f = stats::slope_fit(xs, ys);
        return py::make_tuple(f.slope, f.intercept, f.slope_stderr);
    }, py::arg("xs"), py::arg("ys"));

    // ---- experiments ----
    m.def(
        "run_experiment_file",
        [](const std::string& path) {
            return experiments::run(experiments::parse_config_file(path));
        },
        py::arg("config_path"), "run an experiment config file; returns the exit code");
    m.def(
        "run_experiment_text",
        [](const std::string& text) {
            return experiments::run(experiments::parse_config_text(text));
        },
        py::arg("config_text"));
}
