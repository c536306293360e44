#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pfpois/dist.hpp"
#include "pfpois/factorstats.hpp"
#include "pfpois/primesets.hpp"

namespace pfpois {

/// Law of U_T (Distinct) or W_T (WithMultiplicity) for independent X_p with
/// P(X_p = k) = p^{-k} (1 - 1/p).
struct ModelLawRequest {
    PrimeSet set;
    CountMode mode = CountMode::Distinct;
    double tail_eps = kDefaultTailEps;
};

/// Exact law by sequential convolution in ascending p. Distinct mode is exactly supported
/// on [0, |T|]; WithMultiplicity truncates each geometric factor and certifies the loss.
Pmf model_exact_pmf(const ModelLawRequest& req);

/// Number of retained indices for the geometric law of X_p so that P(X_p >= K) <= eps.
std::uint32_t geometric_truncation(Prime p, double eps) noexcept;

/// Counter-based sampler for the vector (X_p : p <= y). Sample i is a pure function of
/// (seed, i), so any partition of indices across workers reproduces the same stream.
class ModelSampler {
public:
    ModelSampler(std::uint64_t y, std::uint64_t seed);

    [[nodiscard]] const PrimeSet& primes() const noexcept { return primes_; }

    /// Exponents aligned with primes().
    [[nodiscard]] std::vector<std::uint32_t> sample(std::uint64_t index) const;

    /// Single coordinate of sample `index`.
    [[nodiscard]] std::uint32_t sample_one(std::uint64_t index, std::size_t prime_index) const;

private:
    PrimeSet primes_;
    std::vector<double> inv_p_;
    std::uint64_t seed_;
};

/// Uniform double in (0, 1] from a (seed, sample, prime) key.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t prime_index) noexcept;

/// Streams n_samples vectors (sample_id, exponents) for primes <= y.
void model_sample_vector(std::uint64_t y, std::uint64_t seed, std::uint64_t n_samples,
                         const std::function<void(std::uint64_t, std::span<const std::uint32_t>)>& sink);

/// d_TV between (X_p : p <= y) and (v_p(n) : p <= y) for n uniform on [1, x], exactly.
TvResult model_tv_exact(std::uint64_t x, std::uint64_t y, const SieveOptions& opts = {});

}  // namespace pfpois
