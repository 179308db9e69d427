#include "betalab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace betalab::stats {

double Welford::stderr_mean() const {
    return n_ >= 2 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void ComplexWelford::add(std::complex<double> x) {
    ++n_;
    const double nd = static_cast<double>(n_);
    const std::complex<double> d = x - mean_;
    mean_ += d / nd;
    const std::complex<double> d2 = x - mean_; // post-update deviation
    m2_re_ += d.real() * d2.real();
    m2_im_ += d.imag() * d2.imag();
    c_pseudo_ += d * d2;
    c_herm_ += (d * std::conj(d2)).real();
}

void ComplexWelford::merge(const ComplexWelford& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double nd = static_cast<double>(n_), od = static_cast<double>(o.n_);
    const double tot = nd + od;
    const std::complex<double> d = o.mean_ - mean_;
    m2_re_ += o.m2_re_ + d.real() * d.real() * nd * od / tot;
    m2_im_ += o.m2_im_ + d.imag() * d.imag() * nd * od / tot;
    c_pseudo_ += o.c_pseudo_ + d * d * nd * od / tot;
    c_herm_ += o.c_herm_ + std::norm(d) * nd * od / tot;
    mean_ += d * od / tot;
    n_ += o.n_;
}

SampleSummary ComplexWelford::summary() const {
    SampleSummary s;
    s.count = n_;
    s.mean = mean_;
    if (n_ >= 2) {
        const double den = static_cast<double>(n_ - 1);
        s.variance_re = m2_re_ / den;
        s.variance_im = m2_im_ / den;
        s.pseudo = c_pseudo_ / den;
        s.herm = std::complex<double>(c_herm_ / den, 0.0);
        s.standard_error = std::sqrt((s.variance_re + s.variance_im) / static_cast<double>(n_));
    }
    return s;
}

SampleSummary SampleSummary::from(std::span<const std::complex<double>> xs) {
    ComplexWelford w;
    for (auto x : xs) w.add(x);
    return w.summary();
}

ComplexCov complex_cov(std::span<const std::complex<double>> xs,
                       std::span<const std::complex<double>> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("stats: paired samples differ in length");
    if (xs.size() < 2) throw std::invalid_argument("stats: complex_cov needs at least 2 samples");
    const double n = static_cast<double>(xs.size());
    std::complex<double> mx{}, my{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    std::complex<double> p{}, h{};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        p += (xs[i] - mx) * (ys[i] - my);
        h += (xs[i] - mx) * std::conj(ys[i] - my);
    }
    return {p / (n - 1.0), h / (n - 1.0)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw std::invalid_argument("stats: ks_two_sample needs >= 100 samples per side");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        const double v = (i < a.size() && (j >= b.size() || a[i] <= b[j])) ? a[i] : b[j];
        while (i < a.size() && a[i] <= v) ++i; // absorb ties on both sides
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double thr = 1.628 * std::sqrt((na + nb) / (na * nb));
    return {d, thr};
}

SlopeFit slope_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw std::invalid_argument("stats: slope_fit needs >= 4 paired points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("stats: slope_fit with degenerate xs");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += r * r;
    }
    f.slope_stderr = (xs.size() > 2) ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
    return f;
}

} // namespace betalab::stats
