#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfpois/numeric.hpp"

namespace pfpois {

using Prime = std::uint64_t;

/// Deterministic primality test for all 64-bit integers (Miller-Rabin, fixed bases).
bool is_prime(std::uint64_t n) noexcept;

/// A finite set of primes, stored strictly ascending.
class PrimeSet;
PrimeSet sieve_primes(std::uint64_t limit, std::size_t segment_size);
PrimeSet primes_in_interval(std::uint64_t lo, std::uint64_t hi, std::size_t segment_size);

class PrimeSet {
public:
    PrimeSet() = default;

    /// Validates ordering and primality; throws DomainError on violation.
    explicit PrimeSet(std::vector<Prime> primes, std::string label = {});

    /// Sorts, removes duplicates and validates.
    static PrimeSet from_unsorted(std::vector<Prime> primes, std::string label = {});

    [[nodiscard]] std::span<const Prime> primes() const noexcept { return primes_; }
    [[nodiscard]] std::size_t size() const noexcept { return primes_.size(); }
    [[nodiscard]] bool empty() const noexcept { return primes_.empty(); }
    [[nodiscard]] bool contains(Prime p) const noexcept;
    [[nodiscard]] Prime max() const noexcept { return primes_.empty() ? 0 : primes_.back(); }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    [[nodiscard]] bool disjoint_from(const PrimeSet& other) const noexcept;
    [[nodiscard]] PrimeSet set_union(const PrimeSet& other) const;
    [[nodiscard]] PrimeSet set_difference(const PrimeSet& other) const;

    auto begin() const noexcept { return primes_.begin(); }
    auto end() const noexcept { return primes_.end(); }

    friend bool operator==(const PrimeSet& a, const PrimeSet& b) noexcept {
        return a.primes_ == b.primes_;
    }

private:
    friend PrimeSet sieve_primes(std::uint64_t, std::size_t);
    friend PrimeSet primes_in_interval(std::uint64_t, std::uint64_t, std::size_t);

    struct Unchecked {};
    PrimeSet(Unchecked, std::vector<Prime> primes, std::string label)
        : primes_(std::move(primes)), label_(std::move(label)) {}

    std::vector<Prime> primes_;
    std::string label_;
};

struct HarmonicSums {
    double h = 0.0;   ///< sum of 1/p
    double h1 = 0.0;  ///< sum of 1/(p-1)
    double h2 = 0.0;  ///< sum of 1/p^2
};

inline constexpr std::size_t kDefaultSegmentSize = std::size_t{1} << 20;

/// All primes in [2, limit]. Throws DomainError if limit < 2.
PrimeSet sieve_primes(std::uint64_t limit, std::size_t segment_size = kDefaultSegmentSize);

/// Primes p with lo < p <= hi, by a segmented sieve whose memory is bounded by the segment
/// size plus the base primes up to sqrt(hi).
PrimeSet primes_in_interval(std::uint64_t lo, std::uint64_t hi,
                            std::size_t segment_size = kDefaultSegmentSize);

/// Compensated sums over ascending primes.
HarmonicSums harmonic_sums(const PrimeSet& set) noexcept;

/// floor(exp(exp(k))), evaluated in long double. Throws CapRefusal if it exceeds 2^62.
std::uint64_t expexp_cutoff(int k);

/// Primes in (t_k, t_{k+1}] with t_k = floor(exp(exp(k))).
PrimeSet expexp_block(int k, std::size_t segment_size = kDefaultSegmentSize);

inline constexpr const char* kExpExpRounding = "t_k = floor(exp(exp(k))), long double";

/// Newline-delimited decimal text, one prime per line.
void write_prime_set(std::ostream& out, const PrimeSet& set);
PrimeSet read_prime_set(std::istream& in);

}  // namespace pfpois
