#include "pfpois/kubilius.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pfpois {

std::uint32_t geometric_truncation(Prime p, double eps) noexcept {
    const auto pd = static_cast<double>(p);
    auto k = static_cast<std::uint32_t>(std::max(1.0, std::ceil(std::log(1.0 / eps) / std::log(pd))));
    while (std::pow(pd, -static_cast<double>(k)) > eps) ++k;
    while (k > 1 && std::pow(pd, -static_cast<double>(k - 1)) <= eps) --k;
    return k;
}

Pmf model_exact_pmf(const ModelLawRequest& req) {
    if (!(req.tail_eps > 0.0 && req.tail_eps < 1.0)) {
        throw DomainError("model_exact_pmf: tail_eps must lie in (0, 1)");
    }
    Pmf out;
    out.probs = {1.0};
    if (req.set.empty()) return out;

    if (req.mode == CountMode::Distinct) {
        // Coefficients of prod (1 - 1/p + z/p).
        for (Prime p : req.set) {
            const double hit = 1.0 / static_cast<double>(p);
            const double miss = 1.0 - hit;
            out.probs.push_back(0.0);
            for (std::size_t k = out.probs.size() - 1; k > 0; --k) {
                out.probs[k] = out.probs[k] * miss + out.probs[k - 1] * hit;
            }
            out.probs[0] *= miss;
        }
        return out;
    }

    const double eps_each = req.tail_eps / static_cast<double>(req.set.size());
    CompensatedSum tail;
    std::vector<double> factor;
    std::vector<double> next;
    for (Prime p : req.set) {
        const auto pd = static_cast<double>(p);
        const std::uint32_t keep = geometric_truncation(p, eps_each);
        factor.assign(keep, 0.0);
        double w = 1.0 - 1.0 / pd;
        for (std::uint32_t k = 0; k < keep; ++k) {
            factor[k] = w;
            w /= pd;
        }
        tail.add(std::pow(pd, -static_cast<double>(keep)));

        next.assign(out.probs.size() + keep - 1, 0.0);
        for (std::size_t i = 0; i < out.probs.size(); ++i) {
            const double a = out.probs[i];
            if (a == 0.0) continue;
            for (std::uint32_t k = 0; k < keep; ++k) next[i + k] += a * factor[k];
        }
        out.probs.swap(next);
    }
    out.tail_bound = std::min(tail.value(), 1.0);
    return out;
}

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t prime_index) noexcept {
    std::uint64_t z = mix64(seed + 0x9e3779b97f4a7c15ULL);
    z = mix64(z ^ mix64(sample + 0x632be59bd9b4e019ULL));
    z = mix64(z ^ mix64(prime_index + 0x85157af5ULL));
    return static_cast<double>((z >> 11) + 1) * 0x1.0p-53;
}

ModelSampler::ModelSampler(std::uint64_t y, std::uint64_t seed)
    : primes_(sieve_primes(y)), seed_(seed) {
    inv_p_.reserve(primes_.size());
    for (Prime p : primes_) inv_p_.push_back(1.0 / static_cast<double>(p));
}

std::uint32_t ModelSampler::sample_one(std::uint64_t index, std::size_t prime_index) const {
    // Inverse CDF of P(X >= k) = p^{-k}; thresholds are built by exact IEEE division.
    const double u = counter_uniform(seed_, index, prime_index);
    const auto pd = static_cast<double>(primes_.primes()[prime_index]);
    std::uint32_t k = 0;
    for (double t = inv_p_[prime_index]; u <= t; t /= pd) ++k;
    return k;
}

std::vector<std::uint32_t> ModelSampler::sample(std::uint64_t index) const {
    std::vector<std::uint32_t> out(primes_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample_one(index, i);
    return out;
}

void model_sample_vector(std::uint64_t y, std::uint64_t seed, std::uint64_t n_samples,
                         const std::function<void(std::uint64_t, std::span<const std::uint32_t>)>& sink) {
    if (n_samples == 0) throw DomainError("model_sample_vector: n_samples must be >= 1");
    const ModelSampler sampler(y, seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const auto v = sampler.sample(i);
        sink(i, v);
    }
}

TvResult model_tv_exact(std::uint64_t x, std::uint64_t y, const SieveOptions& opts) {
    if (y < 2 || y > x) throw DomainError("model_tv_exact requires 2 <= y <= x");
    const auto smooth = smooth_part_distribution(x, y, opts);
    CompensatedSum log_c;
    for (Prime p : sieve_primes(y)) log_c.add(std::log1p(-1.0 / static_cast<double>(p)));
    const double base = log_c.value();
    const auto denom = static_cast<double>(x);
    CompensatedSum excess;
    for (const auto& [s, count] : smooth) {
        const double pv = static_cast<double>(count) / denom;
        const double px = std::exp(base - std::log(static_cast<double>(s)));
        if (pv > px) excess.add(pv - px);
    }
    return {std::clamp(excess.value(), 0.0, 1.0), 0.0};
}

}  // namespace pfpois
