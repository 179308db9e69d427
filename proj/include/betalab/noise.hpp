#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

#include "betalab/rng.hpp"

namespace betalab {

struct NoiseParams {
    double beta = 2.0; // may be infinity (deterministic model)
    std::uint64_t seed = 0;
    // Optional cap on |X_k|, |Y_k| for k >= kappa. Off by default: the untruncated
    // model agrees with the truncated one with high probability.
    std::optional<double> truncation_threshold{};
    std::uint64_t kappa = 1;

    bool infinite_beta() const { return std::isinf(beta); }
    void validate() const {
        if (!(beta > 0.0)) throw std::invalid_argument("noise: beta must be positive");
        if (truncation_threshold && !(*truncation_threshold > 0.0))
            throw std::invalid_argument("noise: truncation threshold must be positive");
    }
};

// One tridiagonal entry in raw and standardized form.
//   b = b_{k+1} = sqrt(2) X_k,     a_sq = a_k^2 = beta k + sqrt(2 beta k) Y_k.
// a_sq_over_beta = a_k^2 / beta stays finite at beta = infinity (= k), which is
// the combination the recursion actually consumes.
struct NoiseEntry {
    double b = 0.0;
    double a_sq = 0.0;
    double x = 0.0;
    double y = 0.0;
    double a_sq_over_beta = 0.0;
};

// Seeded, randomly indexable source of the model entries for one replicate.
// Entry k is a pure function of (seed, replicate_id, k).
class NoiseStream {
public:
    NoiseStream(NoiseParams params, std::uint64_t replicate_id)
        : params_(params),
          replicate_(replicate_id),
          rng_(CounterRng::derive_key(params.seed, replicate_id)) {
        params_.validate();
    }

    const NoiseParams& params() const { return params_; }
    std::uint64_t replicate_id() const { return replicate_; }

    // b_1 (the only diagonal entry not covered by the X_k).
    double b1() const;

    NoiseEntry entry(std::uint64_t k) const;

    // Z_k(z) = (X_k + J(z sqrt(N/k)) Y_k) / sqrt(2)
    std::complex<double> z_field(std::uint64_t k, double z, double N) const;

    // Adapter realizing b_k -> -b_k, i.e. (X_k, Y_k) -> (-X_k, Y_k).
    NoiseStream sign_flipped() const {
        NoiseStream s(*this);
        s.flip_ = !s.flip_;
        return s;
    }
    bool flipped() const { return flip_; }

    // Streams are value types; identity (same underlying noise) is keyed by this.
    std::uint64_t identity_key() const { return rng_.key(); }

private:
    NoiseParams params_;
    std::uint64_t replicate_ = 0;
    CounterRng rng_;
    bool flip_ = false;

    double gamma_sample(double shape, std::uint64_t ctr_base) const;
};

} // namespace betalab
