#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "pfpois/dist.hpp"
#include "pfpois/primesets.hpp"

namespace pfpois {

/// Distinct counts omega(n, T); WithMultiplicity counts Omega(n, T).
enum class CountMode { Distinct, WithMultiplicity };

const char* to_string(CountMode mode) noexcept;

struct SetSpec {
    PrimeSet set;
    CountMode mode = CountMode::Distinct;
};

/// Exact counts of n in [1, x] by the vector (f_1(n), ..., f_m(n)).
struct JointCounts {
    std::uint64_t x = 0;
    std::vector<SetSpec> specs;
    std::map<Tuple, std::uint64_t> counts;

    [[nodiscard]] std::uint64_t total() const noexcept;
    [[nodiscard]] std::size_t dims() const noexcept { return specs.size(); }
};

inline constexpr std::size_t kMaxSets = 8;
inline constexpr std::uint64_t kMaxX = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kOracleMaxX = 1'000'000;

/// Counts contributed by one sieve segment [lo, hi].
struct SegmentPartial {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::map<Tuple, std::uint64_t> counts;
};

struct SieveOptions {
    std::size_t segment_size = kDefaultSegmentSize;
    unsigned threads = 1;
    /// Invoked once per segment in ascending order (checkpointing hook).
    std::function<void(const SegmentPartial&)> on_segment;
};

/// Segmented multiplicity sieve. Throws DomainError for overlapping sets or a prime > x,
/// CapRefusal for m > kMaxSets or x > kMaxX.
JointCounts joint_factor_counts(std::uint64_t x, std::vector<SetSpec> specs,
                                const SieveOptions& opts = {});

/// Same contract, by trial-dividing each n separately. Refuses x > kOracleMaxX.
JointCounts oracle_factor_counts(std::uint64_t x, std::vector<SetSpec> specs);

/// Counts normalized by floor(x).
JointPmf joint_pmf_of(const JointCounts& counts);

/// Drop coordinate `coord`, summing counts.
JointCounts marginalize(const JointCounts& counts, std::size_t coord);

/// For each n <= x, the y-smooth part prod_{p<=y} p^{v_p(n)}; returns value -> multiplicity.
std::map<std::uint64_t, std::uint64_t> smooth_part_distribution(std::uint64_t x, std::uint64_t y,
                                                                const SieveOptions& opts = {});

}  // namespace pfpois
