#pragma once

// Independent reference computations used only by tests. Nothing here calls the library's
// sieves or convolutions.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

inline bool trial_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> trial_primes(std::uint64_t lo_exclusive, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = lo_exclusive + 1; n <= hi; ++n) {
        if (trial_is_prime(n)) out.push_back(n);
    }
    return out;
}

/// P(U_T = k) by enumerating every subset of T (|T| <= ~20).
inline std::vector<double> subset_enumeration_pmf(const std::vector<std::uint64_t>& t) {
    const std::size_t n = t.size();
    std::vector<long double> out(n + 1, 0.0L);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        long double term = 1.0L;
        int k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long double p = static_cast<long double>(t[i]);
            if (mask >> i & 1) {
                term *= 1.0L / p;
                ++k;
            } else {
                term *= 1.0L - 1.0L / p;
            }
        }
        out[k] += term;
    }
    return {out.begin(), out.end()};
}

/// Exact binomial pmf via long double recurrence on C(k, m).
inline std::vector<long double> binomial_reference(unsigned k, long double alpha) {
    std::vector<long double> out(k + 1);
    long double c = 1.0L;
    for (unsigned m = 0; m <= k; ++m) {
        out[m] = c * std::pow(alpha, static_cast<long double>(m)) *
                 std::pow(1.0L - alpha, static_cast<long double>(k - m));
        c = c * (k - m) / (m + 1);
    }
    return out;
}

/// Poisson pmf by direct term recurrence in long double, up to index n.
inline std::vector<long double> poisson_reference(long double lambda, std::size_t n) {
    std::vector<long double> out(n);
    long double v = std::exp(-lambda);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = v;
        v *= lambda / static_cast<long double>(k + 1);
    }
    return out;
}

/// Exponent of p in n.
inline unsigned valuation(std::uint64_t n, std::uint64_t p) {
    unsigned v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace oracle
