#include "pfpois/primesets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

namespace pfpois {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Simple sieve for base primes; limit is at most ~2^32 in practice.
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for every n < 2^64.
    for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

PrimeSet::PrimeSet(std::vector<Prime> primes, std::string label)
    : primes_(std::move(primes)), label_(std::move(label)) {
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        if (i > 0 && primes_[i] <= primes_[i - 1]) {
            throw DomainError("prime set must be strictly ascending (at " +
                              std::to_string(primes_[i]) + ")");
        }
        if (!is_prime(primes_[i])) {
            throw DomainError(std::to_string(primes_[i]) + " is not prime");
        }
    }
}

PrimeSet PrimeSet::from_unsorted(std::vector<Prime> primes, std::string label) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return PrimeSet(std::move(primes), std::move(label));
}

bool PrimeSet::contains(Prime p) const noexcept {
    return std::binary_search(primes_.begin(), primes_.end(), p);
}

bool PrimeSet::disjoint_from(const PrimeSet& other) const noexcept {
    auto a = primes_.begin();
    auto b = other.primes_.begin();
    while (a != primes_.end() && b != other.primes_.end()) {
        if (*a == *b) return false;
        if (*a < *b) {
            ++a;
        } else {
            ++b;
        }
    }
    return true;
}

PrimeSet PrimeSet::set_union(const PrimeSet& other) const {
    std::vector<Prime> out;
    out.reserve(primes_.size() + other.primes_.size());
    std::set_union(primes_.begin(), primes_.end(), other.primes_.begin(), other.primes_.end(),
                   std::back_inserter(out));
    return PrimeSet(Unchecked{}, std::move(out), {});
}

PrimeSet PrimeSet::set_difference(const PrimeSet& other) const {
    std::vector<Prime> out;
    std::set_difference(primes_.begin(), primes_.end(), other.primes_.begin(),
                        other.primes_.end(), std::back_inserter(out));
    return PrimeSet(Unchecked{}, std::move(out), {});
}

namespace {

// Sieve the integers in (lo, hi] segment by segment. Values below 2 are never reported.
std::vector<Prime> segmented_range(std::uint64_t lo, std::uint64_t hi, std::size_t segment_size) {
    std::vector<Prime> out;
    if (hi < 2 || hi <= lo) return out;
    if (segment_size == 0) throw DomainError("segment size must be positive");
    const std::uint64_t first = std::max<std::uint64_t>(lo + 1, 2);
    const auto base = small_primes(isqrt(hi));
    std::vector<unsigned char> composite;
    for (std::uint64_t start = first; start <= hi;) {
        const std::uint64_t span = std::min<std::uint64_t>(segment_size, hi - start + 1);
        composite.assign(span, 0);
        for (std::uint64_t q : base) {
            if (q * q > start + span - 1) break;
            std::uint64_t m = std::max(q * q, (start + q - 1) / q * q);
            for (; m < start + span; m += q) composite[m - start] = 1;
        }
        for (std::uint64_t i = 0; i < span; ++i) {
            if (!composite[i]) out.push_back(start + i);
        }
        if (hi - start < span) break;
        start += span;
    }
    return out;
}

}  // namespace

PrimeSet sieve_primes(std::uint64_t limit, std::size_t segment_size) {
    if (limit < 2) throw DomainError("sieve limit must be >= 2");
    return PrimeSet(PrimeSet::Unchecked{}, segmented_range(1, limit, segment_size),
                    "primes<=" + std::to_string(limit));
}

PrimeSet primes_in_interval(std::uint64_t lo, std::uint64_t hi, std::size_t segment_size) {
    if (hi < lo) throw DomainError("interval (lo, hi] requires lo <= hi");
    return PrimeSet(PrimeSet::Unchecked{}, segmented_range(lo, hi, segment_size),
                    "(" + std::to_string(lo) + "," + std::to_string(hi) + "]");
}

HarmonicSums harmonic_sums(const PrimeSet& set) noexcept {
    CompensatedSum h;
    CompensatedSum h1;
    CompensatedSum h2;
    for (Prime p : set) {
        const auto pd = static_cast<double>(p);
        h.add(1.0 / pd);
        h1.add(1.0 / (pd - 1.0));
        h2.add(1.0 / (pd * pd));
    }
    return {h.value(), h1.value(), h2.value()};
}

std::uint64_t expexp_cutoff(int k) {
    if (k < 0) throw DomainError("block index must be >= 0");
    const long double t = std::exp(std::exp(static_cast<long double>(k)));
    if (!(t < 4.6116860184273879e18L)) {
        throw CapRefusal("t_" + std::to_string(k) + " = exp(exp(" + std::to_string(k) +
                         ")) exceeds 2^62");
    }
    return static_cast<std::uint64_t>(std::floor(t));
}

PrimeSet expexp_block(int k, std::size_t segment_size) {
    const auto lo = expexp_cutoff(k);
    const auto hi = expexp_cutoff(k + 1);
    auto set = primes_in_interval(lo, hi, segment_size);
    set.set_label("expexp:" + std::to_string(k));
    return set;
}

void write_prime_set(std::ostream& out, const PrimeSet& set) {
    for (Prime p : set) out << p << '\n';
}

PrimeSet read_prime_set(std::istream& in) {
    std::vector<Prime> primes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        primes.push_back(static_cast<Prime>(parse_exact_integer(line)));
    }
    return PrimeSet(std::move(primes));
}

}  // namespace pfpois
