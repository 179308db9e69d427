#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betalab/rng.hpp"
#include "betalab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

using namespace betalab;
using cplx = std::complex<double>;

TEST_CASE("complex_cov on standard complex normals") {
    SeqRng rng(1);
    const int n = 100000;
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
    const auto c = stats::complex_cov(x, x);
    CHECK(std::abs(c.pseudo) <= 3.0 * std::sqrt(1.0 / n) + 0.01);
    CHECK(std::abs(c.herm - cplx(1.0, 0.0)) <= 3.0 * std::sqrt(1.0 / n) + 0.01);

    // constant samples -> (0, 0)
    std::vector<cplx> k(10, cplx(2.0, -1.0));
    const auto ck = stats::complex_cov(k, k);
    CHECK(std::abs(ck.pseudo) == 0.0);
    CHECK(std::abs(ck.herm) == 0.0);

    CHECK_THROWS_AS(stats::complex_cov(std::vector<cplx>(5), std::vector<cplx>(6)),
                    std::invalid_argument);
}

TEST_CASE("complex_cov against two-pass oracle") {
    SeqRng rng(2);
    const int n = 1000;
    std::vector<cplx> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = cplx(rng.normal(), 2.0 * rng.normal());
        y[i] = 0.5 * x[i] + cplx(rng.normal(), rng.normal());
    }
    cplx mx = std::accumulate(x.begin(), x.end(), cplx{}) / static_cast<double>(n);
    cplx my = std::accumulate(y.begin(), y.end(), cplx{}) / static_cast<double>(n);
    cplx p{}, h{};
    for (int i = 0; i < n; ++i) {
        p += (x[i] - mx) * (y[i] - my);
        h += (x[i] - mx) * std::conj(y[i] - my);
    }
    p /= (n - 1.0);
    h /= (n - 1.0);
    const auto c = stats::complex_cov(x, y);
    CHECK(std::abs(c.pseudo - p) <= 1e-12);
    CHECK(std::abs(c.herm - h) <= 1e-12);
}

TEST_CASE("ks two sample") {
    std::vector<double> a(500), b(500);
    std::iota(a.begin(), a.end(), 0.0);
    b = a;
    auto ks = stats::ks_two_sample(a, b);
    CHECK(ks.distance == 0.0);
    // disjoint supports -> 1
    for (auto& v : b) v += 1000.0;
    ks = stats::ks_two_sample(a, b);
    CHECK(ks.distance == doctest::Approx(1.0));
    CHECK_THROWS_AS(stats::ks_two_sample(std::vector<double>(10), std::vector<double>(200)),
                    std::invalid_argument);

    // null calibration: two N(0,1) batches of 2000 stay below the 1% threshold
    // in >= 95/100 repetitions
    int below = 0;
    SeqRng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> u(2000), v(2000);
        for (auto& t : u) t = rng.normal();
        for (auto& t : v) t = rng.normal();
        const auto k2 = stats::ks_two_sample(u, v);
        if (k2.distance < k2.threshold) ++below;
    }
    CHECK(below >= 95);
}

TEST_CASE("slope fit") {
    std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * x + 1.0);
    auto f = stats::slope_fit(xs, ys);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.slope_stderr <= 1e-12);

    // noisy line recovers slope within 3 stderr
    SeqRng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> yn;
        for (double x : xs) yn.push_back(-1.3 * x + 0.4 + 0.1 * rng.normal());
        auto g = stats::slope_fit(xs, yn);
        CHECK(std::fabs(g.slope + 1.3) <= 4.0 * g.slope_stderr + 0.2);
    }

    std::vector<double> deg{2.0, 2.0, 2.0, 2.0};
    CHECK_THROWS_AS(stats::slope_fit(deg, xs), std::invalid_argument);
    CHECK_THROWS_AS(stats::slope_fit(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("welford merge is partition invariant") {
    SeqRng rng(7);
    std::vector<double> xs(10000);
    for (auto& v : xs) v = rng.normal() * 3.0 + 1.0;
    stats::Welford whole;
    for (double v : xs) whole.add(v);
    // two different partitions
    for (std::size_t cut : {100ul, 5000ul, 9999ul}) {
        stats::Welford a, b;
        for (std::size_t i = 0; i < cut; ++i) a.add(xs[i]);
        for (std::size_t i = cut; i < xs.size(); ++i) b.add(xs[i]);
        a.merge(b);
        CHECK(a.mean() == doctest::Approx(whole.mean()).epsilon(1e-12));
        CHECK(a.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
    }
    // permutation invariance (up to rounding)
    std::vector<double> sh = xs;
    std::shuffle(sh.begin(), sh.end(), std::mt19937(3));
    stats::Welford perm;
    for (double v : sh) perm.add(v);
    CHECK(perm.mean() == doctest::Approx(whole.mean()).epsilon(1e-10));
    CHECK(perm.variance() == doctest::Approx(whole.variance()).epsilon(1e-10));
}

TEST_CASE("streaming vs two-pass variance on 1e6 samples") {
    SeqRng rng(8);
    const int n = 1000000;
    std::vector<double> xs(n);
    for (auto& v : xs) v = rng.normal() + 5.0;
    stats::Welford w;
    for (double v : xs) w.add(v);
    double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= (n - 1);
    CHECK(std::fabs(w.variance() - var) <= 1e-10);
}

TEST_CASE("complex welford merge matches bulk summary") {
    SeqRng rng(9);
    std::vector<cplx> xs(5000);
    for (auto& v : xs) v = cplx(rng.normal(), 2.0 + rng.normal());
    stats::ComplexWelford whole, a, b;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        whole.add(xs[i]);
        (i < 1234 ? a : b).add(xs[i]);
    }
    a.merge(b);
    const auto s1 = whole.summary(), s2 = a.summary();
    CHECK(std::abs(s1.mean - s2.mean) <= 1e-12);
    CHECK(s1.variance_re == doctest::Approx(s2.variance_re).epsilon(1e-12));
    CHECK(s1.variance_im == doctest::Approx(s2.variance_im).epsilon(1e-12));
    CHECK(std::abs(s1.pseudo - s2.pseudo) <= 1e-12);
}
