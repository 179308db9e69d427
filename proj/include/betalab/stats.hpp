#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace betalab::stats {

// Streaming (Welford) moments for real samples; partial summaries merge
// associatively, so parallel workers combine to the same result in any
// grouping as long as the final reduction order is fixed.
class Welford {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const Welford& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double nd = static_cast<double>(n_), od = static_cast<double>(o.n_);
        const double d = o.mean_ - mean_;
        const double tot = nd + od;
        mean_ += d * od / tot;
        m2_ += o.m2_ + d * d * nd * od / tot;
        n_ += o.n_;
    }
    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ >= 2 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stderr_mean() const;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Streaming summary of complex samples: mean, per-part variances and the two
// covariances E XY - (EX)(EY) (pseudo) and E X conj(Y) - EX conj(EY) (herm)
// of the sample against itself.
struct SampleSummary {
    std::uint64_t count = 0;
    std::complex<double> mean{};
    double variance_re = 0.0;
    double variance_im = 0.0;
    std::complex<double> pseudo{}; // E X^2 - (E X)^2
    std::complex<double> herm{};   // E |X|^2 - |E X|^2  (stored complex, imag 0)
    double standard_error = 0.0;

    static SampleSummary from(std::span<const std::complex<double>> xs);
};

// Merge-able accumulator behind SampleSummary.
class ComplexWelford {
public:
    void add(std::complex<double> x);
    void merge(const ComplexWelford& o);
    SampleSummary summary() const;
    std::uint64_t count() const { return n_; }

private:
    std::uint64_t n_ = 0;
    std::complex<double> mean_{};
    double m2_re_ = 0.0, m2_im_ = 0.0;
    std::complex<double> c_pseudo_{};
    double c_herm_ = 0.0;
};

// Unbiased estimators of E XY - EX EY and E X conj(Y) - EX conj(EY) for
// paired samples.
struct ComplexCov {
    std::complex<double> pseudo;
    std::complex<double> herm;
};
ComplexCov complex_cov(std::span<const std::complex<double>> xs,
                       std::span<const std::complex<double>> ys);

// Two-sample Kolmogorov-Smirnov sup-distance with the asymptotic 1% critical
// value c(0.01) sqrt((m+n)/(m n)), c(0.01) = 1.628.
struct KsResult {
    double distance;
    double threshold;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Ordinary least squares y ~ slope x + intercept with slope standard error.
struct SlopeFit {
    double slope;
    double intercept;
    double slope_stderr;
};
SlopeFit slope_fit(std::span<const double> xs, std::span<const double> ys);

} // namespace betalab::stats
