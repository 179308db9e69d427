#include "betalab/experiments.hpp"

#include "betalab/airy.hpp"
#include "betalab/charpoly.hpp"
#include "betalab/fields.hpp"
#include "betalab/noise.hpp"
#include "betalab/prufer.hpp"
#include "betalab/rng.hpp"
#include "betalab/sine.hpp"
#include "betalab/specfun.hpp"
#include "betalab/stats.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace betalab::experiments {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr struct {
    Kind kind;
    const char* name;
} kKinds[] = {
    {Kind::HermiteCheck, "hermite-check"},
    {Kind::CharpolySample, "charpoly-sample"},
    {Kind::PhaseTrace, "phase-trace"},
    {Kind::FieldsCov, "fields-cov"},
    {Kind::VarianceSlope, "variance-slope"},
    {Kind::ZetaRatio, "zeta-ratio"},
    {Kind::SineSim, "sine-sim"},
    {Kind::SinePoints, "sine-points"},
    {Kind::AirySim, "airy-sim"},
    {Kind::EdgeCompare, "edge-compare"},
    {Kind::OmegaTightness, "omega-tightness"},
};

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    return out;
}

std::vector<double> parse_d_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// deterministic text form for doubles in CSV output
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

const char* kind_name(Kind k) {
    for (const auto& e : kKinds)
        if (e.kind == k) return e.name;
    return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
    for (const auto& e : kKinds)
        if (name == e.name) return e.kind;
    return std::nullopt;
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) {
    return CounterRng::mix(CounterRng::mix(master) ^ CounterRng::mix(index + 0x9e3779b97f4a7c15ull));
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value', got: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    ExperimentConfig c;
    c.raw = kv;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    const auto kindstr = take("kind");
    if (!kindstr) throw ConfigError("config: missing required key 'kind'");
    const auto kind = kind_from_name(*kindstr);
    if (!kind) throw ConfigError("config: unknown experiment kind '" + *kindstr + "'");
    c.kind = *kind;
    if (auto v = take("beta")) c.beta = (*v == "inf") ? std::numeric_limits<double>::infinity() : std::stod(*v);
    if (auto v = take("n")) c.n_list = {std::stoll(*v)};
    if (auto v = take("n-list")) c.n_list = parse_ll_list(*v);
    if (auto v = take("degree-list")) c.degree_list = parse_ll_list(*v);
    if (auto v = take("z")) c.z = std::stod(*v);
    if (auto v = take("x")) c.x = std::stod(*v);
    if (auto v = take("lambda")) c.lambda_list = {std::stod(*v)};
    if (auto v = take("lambda-list")) c.lambda_list = parse_d_list(*v);
    if (auto v = take("replicates")) c.replicates = std::stoll(*v);
    if (auto v = take("seed")) c.seed = std::stoull(*v);
    if (auto v = take("t-exclusion")) c.t_exclusion = std::stod(*v);
    if (c.kind == Kind::AirySim) c.steps = 10000; // airy solver floor
    if (auto v = take("steps")) c.steps = std::stoll(*v);
    if (auto v = take("t-end")) c.t_end = std::stod(*v);
    if (auto v = take("window")) c.window = std::stod(*v);
    if (auto v = take("sign")) c.sign = std::stoi(*v);
    if (auto v = take("t-max")) c.t_max = std::stod(*v);
    if (auto v = take("t-min")) c.t_min = std::stod(*v);
    if (auto v = take("out")) c.out = *v;
    if (auto v = take("threads")) c.threads = std::stoi(*v);
    if (auto v = take("fail-inject-percent")) c.fail_inject_percent = std::stoi(*v);

    if (c.replicates < 1)
        throw ConfigError("config: field 'replicates' must be >= 1");
    if (!(c.beta > 0.0)) throw ConfigError("config: field 'beta' must be positive");
    if (c.t_exclusion <= 0.0) throw ConfigError("config: field 't-exclusion' must be positive");
    if (c.threads < 0) throw ConfigError("config: field 'threads' must be >= 0");
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

// ---------- deterministic replicate farm ----------

struct NumericalFailure : std::runtime_error {
    long long replicate;
    NumericalFailure(long long r, const std::string& what)
        : std::runtime_error(what), replicate(r) {}
};

// Runs fn(r) for r in [0, total); per-replicate failures are collected and the
// whole experiment aborts if >= 1% fail. Results merge in index order.
template <typename Result>
std::pair<std::vector<std::optional<Result>>, FarmReport>
farm(long long total, int threads, const std::function<Result(long long)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    std::vector<std::optional<Result>> results(total);
    std::vector<std::pair<long long, std::string>> failures;
    std::mutex fail_mu;
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            const long long r = next.fetch_add(1);
            if (r >= total) return;
            try {
                results[r] = fn(r);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mu);
                failures.emplace_back(r, e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    FarmReport rep;
    rep.attempted = total;
    rep.failed = static_cast<long long>(failures.size());
    std::sort(failures.begin(), failures.end());
    for (auto& f : failures) rep.failed_indices.push_back(f.first);
    if (100 * rep.failed >= total && rep.failed > 0)
        throw NumericalFailure(failures.front().first,
                               "replicate " + std::to_string(failures.front().first) + ": " +
                                   failures.front().second);
    return {std::move(results), rep};
}

NoiseStream make_stream(const ExperimentConfig& c, long long replicate) {
    NoiseParams p;
    p.beta = c.beta;
    p.seed = c.seed;
    NoiseStream s(p, static_cast<std::uint64_t>(replicate));
    if (c.fail_inject_percent > 0 &&
        static_cast<int>(CounterRng::mix(c.seed ^ static_cast<std::uint64_t>(replicate)) % 100) <
            c.fail_inject_percent)
        throw prufer::BranchError("injected branch failure (test hook)");
    return s;
}

// ---------- output bundle ----------

struct RunOutput {
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    json extra; // experiment-specific summary for the manifest
    int exit_code = 0;
};

// composite Simpson on [a, b]
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

RunOutput run_hermite_check(const ExperimentConfig& c) {
    auto degrees = c.degree_list.empty() ? std::vector<long long>{0, 1, 5, 20} : c.degree_list;
    auto sizes = c.n_list.empty() ? std::vector<long long>{16, 256} : c.n_list;
    std::string csv = "n,N,integral,deviation\n";
    bool ok = true;
    for (long long N : sizes) {
        for (long long n : degrees) {
            auto f = [&](double zz) {
                const double h = specfun::hermite_normalized(n, N, zz);
                return h * h;
            };
            const double lim = std::sqrt(static_cast<double>(n + 1) / static_cast<double>(N)) + 1.0;
            const double val = simpson(f, -lim, lim, 32768);
            const double dev = std::fabs(val - 0.5);
            ok = ok && dev <= 1e-6;
            csv += std::to_string(n) + "," + std::to_string(N) + "," + fmt(val) + "," + fmt(dev) + "\n";
        }
    }
    RunOutput out;
    out.files.emplace_back("hermite_check.csv", csv);
    out.extra["all_within_tolerance"] = ok;
    if (!ok) out.exit_code = 3; // normalization identity violated
    return out;
}

RunOutput run_charpoly_sample(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 4096 : c.n_list.front();
    // per-replicate log|Phi_N| summary plus a full trajectory dump of replicate 0
    auto [res, rep] = farm<double>(c.replicates, c.threads, [&](long long r) {
        return charpoly::log_charpoly(make_stream(c, r), N, c.z).log_abs;
    });
    stats::Welford w;
    for (auto& v : res)
        if (v) w.add(*v);
    auto traj = charpoly::run_recursion(make_stream(c, 0), N, c.z);
    std::string csv = "n,mantissa,exponent\n";
    for (long long n = 0; n <= N + 1; ++n)
        csv += std::to_string(n) + "," + fmt(traj.mantissa[n]) + "," + fmt(traj.exponent[n]) + "\n";
    std::string csv2 = "N,z,beta,replicates,mean_log_abs_phi,var_log_abs_phi\n";
    csv2 += std::to_string(N) + "," + fmt(c.z) + "," + fmt(c.beta) + "," +
            std::to_string(c.replicates) + "," + fmt(w.mean()) + "," + fmt(w.variance()) + "\n";
    RunOutput out;
    out.files.emplace_back("charpoly_trajectory.csv", csv);
    out.files.emplace_back("charpoly_summary.csv", csv2);
    out.extra["failed"] = rep.failed;
    return out;
}

RunOutput run_phase_trace(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 4096 : c.n_list.front();
    auto traj = prufer::phase_trajectory(make_stream(c, 0), c.z, N);
    std::string csv = "n,re_psi,im_psi\n";
    for (long long n = traj.n_start; n <= N; ++n) {
        const auto p = traj.psi_at(n);
        csv += std::to_string(n) + "," + fmt(p.real()) + "," + fmt(p.imag()) + "\n";
    }
    RunOutput out;
    out.files.emplace_back("phase_trace.csv", csv);
    out.extra["n_start"] = traj.n_start;
    out.extra["anchor_sturm"] = traj.anchor_sturm;
    return out;
}

RunOutput run_fields_cov(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 100000 : c.n_list.front();
    struct Pair {
        std::complex<double> mz, mx;
    };
    auto [res, rep] = farm<Pair>(c.replicates, c.threads, [&](long long r) {
        const auto stream = make_stream(c, r);
        const auto sz = fields::scan_summary(stream, c.z, N, c.t_exclusion);
        const auto sx = fields::scan_summary(stream, c.x, N, c.t_exclusion);
        return Pair{sz.ledger.M, sx.ledger.M};
    });
    std::vector<std::complex<double>> mz, mx;
    for (auto& v : res)
        if (v) {
            mz.push_back(v->mz);
            mx.push_back(v->mx);
        }
    const auto cov = stats::complex_cov(mz, mx);
    const auto theory = fields::covariance_theory(c.z, c.x, N);
    const auto gb = fields::bracket_G_pair(c.z, c.x, N, c.t_exclusion);
    std::string csv =
        "z,x,N,replicates,emp_MM_re,emp_MM_im,emp_MMbar_re,emp_MMbar_im,"
        "theory_MM_re,theory_MM_im,theory_MMbar_re,theory_MMbar_im,regime,"
        "bracket_G_re,bracket_G_im\n";
    csv += fmt(c.z) + "," + fmt(c.x) + "," + std::to_string(N) + "," +
           std::to_string(c.replicates) + "," + fmt(cov.pseudo.real()) + "," +
           fmt(cov.pseudo.imag()) + "," + fmt(cov.herm.real()) + "," + fmt(cov.herm.imag()) + "," +
           fmt(theory.MM.real()) + "," + fmt(theory.MM.imag()) + "," + fmt(theory.MMbar.real()) +
           "," + fmt(theory.MMbar.imag()) + "," + (theory.global_regime ? "global" : "local") +
           "," + fmt(gb.bracket.real()) + "," + fmt(gb.bracket.imag()) + "\n";
    RunOutput out;
    out.files.emplace_back("fields_cov.csv", csv);
    out.extra["failed"] = rep.failed;
    return out;
}

RunOutput run_variance_slope(const ExperimentConfig& c) {
    auto sizes = c.n_list;
    if (sizes.empty())
        for (int p = 10; p <= 16; ++p) sizes.push_back(1ll << p);
    std::string csv = "N,var_re_M,var_im_M,var_log_abs_phi,replicates,failed\n";
    std::vector<double> lx, v_re, v_im, v_lp;
    for (long long N : sizes) {
        struct Row {
            std::complex<double> M;
            double logphi;
        };
        auto [res, rep] = farm<Row>(c.replicates, c.threads, [&](long long r) {
            const auto s = fields::scan_summary(make_stream(c, r), c.z, N, c.t_exclusion);
            return Row{s.ledger.M, s.log_abs_phi_N};
        });
        stats::ComplexWelford wm;
        stats::Welford wl;
        for (auto& v : res)
            if (v) {
                wm.add(v->M);
                wl.add(v->logphi);
            }
        const auto s = wm.summary();
        csv += std::to_string(N) + "," + fmt(s.variance_re) + "," + fmt(s.variance_im) + "," +
               fmt(wl.variance()) + "," + std::to_string(c.replicates) + "," +
               std::to_string(rep.failed) + "\n";
        lx.push_back(std::log(static_cast<double>(N)));
        v_re.push_back(s.variance_re);
        v_im.push_back(s.variance_im);
        v_lp.push_back(wl.variance());
    }
    const auto f_re = stats::slope_fit(lx, v_re);
    const auto f_im = stats::slope_fit(lx, v_im);
    const auto f_lp = stats::slope_fit(lx, v_lp);
    std::string csv2 = "quantity,slope,intercept,slope_stderr,target\n";
    csv2 += "var_re_M," + fmt(f_re.slope) + "," + fmt(f_re.intercept) + "," +
            fmt(f_re.slope_stderr) + ",1\n";
    csv2 += "var_im_M," + fmt(f_im.slope) + "," + fmt(f_im.intercept) + "," +
            fmt(f_im.slope_stderr) + ",1\n";
    csv2 += "var_log_abs_phi," + fmt(f_lp.slope) + "," + fmt(f_lp.intercept) + "," +
            fmt(f_lp.slope_stderr) + "," + fmt(1.0 / c.beta) + "\n";
    RunOutput out;
    out.files.emplace_back("variance_by_N.csv", csv);
    out.files.emplace_back("variance_slopes.csv", csv2);
    return out;
}

RunOutput run_zeta_ratio(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 100000 : c.n_list.front();
    const double lam = c.lambda_list.empty() ? 1.0 : c.lambda_list.front();
    const auto g = specfun::SpectrumGeometry::at(N, c.z);
    const double zshift = c.z + lam / (static_cast<double>(N) * g.rho);
    auto [res, rep] = farm<double>(c.replicates, c.threads, [&](long long r) {
        return charpoly::charpoly_ratio(make_stream(c, r), N, zshift, c.z);
    });
    std::vector<double> finite;
    for (auto& v : res)
        if (v) finite.push_back(*v);
    // zeta samples: one path + one alpha per replicate
    auto [zres, zrep] = farm<double>(c.replicates, c.threads, [&](long long r) {
        const auto seed = replicate_seed(c.seed ^ 0x5a5a5a5aull, static_cast<std::uint64_t>(r));
        auto path = sine::solve_sine(c.beta, {lam}, 1.0, c.steps, seed);
        SeqRng arng(CounterRng::derive_key(seed, 0xa1fa1ull));
        double alpha;
        do {
            alpha = 2.0 * specfun::kPi * arng.uniform();
        } while (std::fabs(std::cos(alpha)) < 1e-8);
        return sine::zeta_eval(path, alpha).front();
    });
    std::vector<double> zeta;
    for (auto& v : zres)
        if (v) zeta.push_back(*v);
    const auto ks = stats::ks_two_sample(finite, zeta);
    std::string csv = "N,z,lambda,beta,replicates,ks_distance,ks_threshold\n";
    csv += std::to_string(N) + "," + fmt(c.z) + "," + fmt(lam) + "," + fmt(c.beta) + "," +
           std::to_string(c.replicates) + "," + fmt(ks.distance) + "," + fmt(ks.threshold) + "\n";
    std::string samples = "ratio_finite_N,zeta_beta\n";
    for (std::size_t i = 0; i < std::min(finite.size(), zeta.size()); ++i)
        samples += fmt(finite[i]) + "," + fmt(zeta[i]) + "\n";
    RunOutput out;
    out.files.emplace_back("zeta_ratio.csv", csv);
    out.files.emplace_back("zeta_ratio_samples.csv", samples);
    out.extra["failed"] = rep.failed + zrep.failed;
    out.extra["ks_distance"] = ks.distance;
    return out;
}

RunOutput run_sine_sim(const ExperimentConfig& c) {
    auto lambdas = c.lambda_list.empty() ? std::vector<double>{0.5, 1.0, 2.0} : c.lambda_list;
    auto [res, rep] = farm<std::vector<double>>(c.replicates, c.threads, [&](long long r) {
        auto path = sine::solve_sine(c.beta, lambdas, c.t_end, c.steps,
                                     replicate_seed(c.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> ims;
        ims.reserve(lambdas.size());
        for (std::size_t i = 0; i < lambdas.size(); ++i) ims.push_back(path.at_end(i).imag());
        return ims;
    });
    std::vector<stats::Welford> per_lambda(lambdas.size());
    for (auto& v : res)
        if (v)
            for (std::size_t i = 0; i < lambdas.size(); ++i) per_lambda[i].add((*v)[i]);
    std::string csv = "lambda,mean_im_omega,se,target_2pi_lambda\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        csv += fmt(lambdas[i]) + "," + fmt(per_lambda[i].mean()) + "," +
               fmt(per_lambda[i].stderr_mean()) + "," + fmt(2.0 * specfun::kPi * lambdas[i]) + "\n";
    // replicate-0 path dump, thinned to ~1000 rows
    auto p0 = sine::solve_sine(c.beta, lambdas, c.t_end, c.steps, replicate_seed(c.seed, 0));
    std::string dump = "t,lambda,re_omega,im_omega\n";
    const std::size_t stride = std::max<std::size_t>(1, p0.t.size() / 1000);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        for (std::size_t j = 0; j < p0.t.size(); j += stride)
            dump += fmt(p0.t[j]) + "," + fmt(lambdas[i]) + "," + fmt(p0.omega[i][j].real()) + "," +
                    fmt(p0.omega[i][j].imag()) + "\n";
    RunOutput out;
    out.files.emplace_back("sine_sim.csv", csv);
    out.files.emplace_back("sine_path.csv", dump);
    out.extra["failed"] = rep.failed;
    return out;
}

RunOutput run_sine_points(const ExperimentConfig& c) {
    auto [res, rep] = farm<std::vector<double>>(c.replicates, c.threads, [&](long long r) {
        return sine::sine_points(c.beta, c.window,
                                 replicate_seed(c.seed, static_cast<std::uint64_t>(r)));
    });
    stats::Welford counts;
    std::string csv = "realization,point\n";
    for (long long r = 0; r < c.replicates; ++r)
        if (res[r]) {
            counts.add(static_cast<double>(res[r]->size()));
            for (double p : *res[r]) csv += std::to_string(r) + "," + fmt(p) + "\n";
        }
    std::string csv2 = "window,realizations,mean_count,se_count,var_count\n";
    csv2 += fmt(c.window) + "," + std::to_string(c.replicates) + "," + fmt(counts.mean()) + "," +
            fmt(counts.stderr_mean()) + "," + fmt(counts.variance()) + "\n";
    RunOutput out;
    out.files.emplace_back("sine_points.csv", csv);
    out.files.emplace_back("sine_points_summary.csv", csv2);
    out.extra["failed"] = rep.failed;
    return out;
}

RunOutput run_airy_sim(const ExperimentConfig& c) {
    auto lambdas = c.lambda_list.empty() ? std::vector<double>{-1.0, 0.0, 1.0} : c.lambda_list;
    std::string csv = "lambda,mean_sai0,se,airy,mean_saip0,se_prime,airy_prime\n";
    RunOutput out;
    long long failed = 0;
    for (double lam : lambdas) {
        auto [res, rep] = farm<std::pair<double, double>>(c.replicates, c.threads, [&](long long r) {
            auto p = airy::solve_sai(c.beta, lam, c.t_max, c.t_min, c.steps,
                                     replicate_seed(c.seed ^ 0xa1c3ull, static_cast<std::uint64_t>(r)));
            return std::make_pair(p.sai_at(0.0), p.saip_at(0.0));
        });
        stats::Welford w, wp;
        for (auto& v : res)
            if (v) {
                w.add(v->first);
                wp.add(v->second);
            }
        const auto ai = specfun::airy_ai(lam);
        csv += fmt(lam) + "," + fmt(w.mean()) + "," + fmt(w.stderr_mean()) + "," + fmt(ai.ai) +
               "," + fmt(wp.mean()) + "," + fmt(wp.stderr_mean()) + "," + fmt(ai.ai_prime) + "\n";
        failed += rep.failed;
    }
    // replicate-0 path dump for the first lambda, thinned
    auto p0 = airy::solve_sai(c.beta, lambdas.front(), c.t_max, c.t_min, c.steps,
                              replicate_seed(c.seed ^ 0xa1c3ull, 0));
    std::string dump = "t,sai,sai_prime\n";
    const std::size_t stride = std::max<std::size_t>(1, p0.t.size() / 1000);
    for (std::size_t j = 0; j < p0.t.size(); j += stride)
        dump += fmt(p0.t[j]) + "," + fmt(p0.sai[j]) + "," + fmt(p0.saip[j]) + "\n";
    out.files.emplace_back("airy_sim.csv", csv);
    out.files.emplace_back("airy_path.csv", dump);
    out.extra["failed"] = failed;
    return out;
}

RunOutput run_edge_compare(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 1000000 : c.n_list.front();
    auto lambdas = c.lambda_list;
    if (lambdas.empty())
        for (double l = -2.0; l <= 2.01; l += 0.5) lambdas.push_back(l);
    const auto rows = airy::edge_compare(N, c.sign, lambdas, c.replicates, c.beta, c.seed);
    std::string csv = "lambda,deterministic,airy,rel_err,mc_mean,mc_se,prefactor_mean\n";
    for (const auto& r : rows)
        csv += fmt(r.lambda) + "," + fmt(r.deterministic) + "," + fmt(r.airy) + "," +
               fmt(r.rel_err) + "," + fmt(r.mc_mean) + "," + fmt(r.mc_se) + "," +
               fmt(r.prefactor_mean) + "\n";
    RunOutput out;
    out.files.emplace_back("edge_compare.csv", csv);
    return out;
}

RunOutput run_omega_tightness(const ExperimentConfig& c) {
    const long long N = c.n_list.empty() ? 16384 : c.n_list.front();
    auto sample = [&](long long size, long long r) {
        const auto stream = make_stream(c, r);
        const auto s = fields::scan_summary(stream, c.z, size, c.t_exclusion);
        const auto geom = specfun::semicircle(c.z);
        const double cb = std::isinf(c.beta) ? 0.25 : 0.25 - 0.5 / c.beta;
        std::complex<double> om = s.psi_N -
                                  std::complex<double>(0.0, specfun::kPi * static_cast<double>(size) * geom.tail) +
                                  cb * std::log(1.0 - c.z * c.z);
        if (!std::isinf(c.beta)) om += s.ledger.M / std::sqrt(c.beta);
        return om;
    };
    auto [r1, rep1] = farm<std::complex<double>>(c.replicates, c.threads,
                                                 [&](long long r) { return sample(N, r); });
    auto [r2, rep2] = farm<std::complex<double>>(c.replicates, c.threads,
                                                 [&](long long r) { return sample(4 * N, r); });
    std::vector<double> re1, im1, re2, im2;
    for (auto& v : r1)
        if (v) {
            re1.push_back(v->real());
            im1.push_back(v->imag());
        }
    for (auto& v : r2)
        if (v) {
            re2.push_back(v->real());
            im2.push_back(v->imag());
        }
    const auto ks_re = stats::ks_two_sample(re1, re2);
    const auto ks_im = stats::ks_two_sample(im1, im2);
    std::string csv = "N,N4,replicates,ks_re,ks_im,ks_threshold\n";
    csv += std::to_string(N) + "," + std::to_string(4 * N) + "," + std::to_string(c.replicates) +
           "," + fmt(ks_re.distance) + "," + fmt(ks_im.distance) + "," + fmt(ks_re.threshold) + "\n";
    RunOutput out;
    out.files.emplace_back("omega_tightness.csv", csv);
    out.extra["failed"] = rep1.failed + rep2.failed;
    return out;
}

} // namespace

namespace {

// kind-specific bounds checked up front so misconfiguration is a config
// error (exit 2), not a per-replicate numerical failure
void validate_for_kind(const ExperimentConfig& c) {
    switch (c.kind) {
        case Kind::SineSim:
        case Kind::SinePoints:
        case Kind::ZetaRatio:
            if (c.steps < 1000)
                throw ConfigError("config: field 'steps' must be >= 1000 for sine experiments");
            break;
        case Kind::AirySim:
            if (c.steps < 10000)
                throw ConfigError("config: field 'steps' must be >= 10000 for airy-sim");
            if (c.t_max < 8.0) throw ConfigError("config: field 't-max' must be >= 8");
            if (c.t_min < -10.0 || c.t_min >= c.t_max)
                throw ConfigError("config: field 't-min' must be in [-10, t-max)");
            break;
        default:
            break;
    }
}

} // namespace

int run(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput out;
    try {
        validate_for_kind(config);
        switch (config.kind) {
            case Kind::HermiteCheck: out = run_hermite_check(config); break;
            case Kind::CharpolySample: out = run_charpoly_sample(config); break;
            case Kind::PhaseTrace: out = run_phase_trace(config); break;
            case Kind::FieldsCov: out = run_fields_cov(config); break;
            case Kind::VarianceSlope: out = run_variance_slope(config); break;
            case Kind::ZetaRatio: out = run_zeta_ratio(config); break;
            case Kind::SineSim: out = run_sine_sim(config); break;
            case Kind::SinePoints: out = run_sine_points(config); break;
            case Kind::AirySim: out = run_airy_sim(config); break;
            case Kind::EdgeCompare: out = run_edge_compare(config); break;
            case Kind::OmegaTightness: out = run_omega_tightness(config); break;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const prufer::BranchError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const auto t1 = std::chrono::steady_clock::now();

    std::error_code ec;
    fs::create_directories(config.out, ec);
    json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["kind"] = kind_name(config.kind);
    manifest["master_seed"] = config.seed;
    manifest["config"] = config.raw.empty() ? json::object() : json(config.raw);
    json seeds = json::array();
    for (long long r = 0; r < config.replicates; ++r)
        seeds.push_back(replicate_seed(config.seed, static_cast<std::uint64_t>(r)));
    manifest["replicate_seeds"] = seeds;
    manifest["wall_time_sec"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
    json checks = json::array();
    for (const auto& [name, content] : out.files) {
        const fs::path p = fs::path(config.out) / name;
        std::ofstream f(p, std::ios::binary);
        f << content;
        f.close();
        char hex[20];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a(content)));
        checks.push_back({{"path", p.string()}, {"checksum_fnv1a64", std::string(hex)}});
    }
    manifest["outputs"] = checks;
    if (!out.extra.is_null()) manifest["summary"] = out.extra;
    {
        std::ofstream f(fs::path(config.out) / "manifest.json");
        f << manifest.dump(2) << "\n";
    }
    return out.exit_code;
}

} // namespace betalab::experiments
