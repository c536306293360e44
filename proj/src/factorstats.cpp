#include "pfpois/factorstats.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "segments.hpp"

namespace pfpois {

const char* to_string(CountMode mode) noexcept {
    return mode == CountMode::Distinct ? "distinct" : "multiplicity";
}

std::uint64_t JointCounts::total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& [k, c] : counts) t += c;
    return t;
}

namespace {

using PackedKey = std::uint64_t;
constexpr unsigned kCounterBits = 8;
constexpr unsigned kSaturation = 255;

Tuple unpack(PackedKey key, std::size_t m) {
    Tuple t(m);
    for (std::size_t j = 0; j < m; ++j) {
        t[j] = static_cast<std::uint32_t>((key >> (kCounterBits * j)) & 0xFF);
    }
    return t;
}

void validate_specs(std::uint64_t x, const std::vector<SetSpec>& specs) {
    if (x < 1) throw DomainError("x must be >= 1");
    if (x > kMaxX) {
        throw CapRefusal("x = " + std::to_string(x) + " exceeds the cap x <= 2^40");
    }
    if (specs.empty()) throw DomainError("at least one set spec is required");
    if (specs.size() > kMaxSets) {
        throw CapRefusal("m = " + std::to_string(specs.size()) + " exceeds the cap m <= 8");
    }
    std::vector<Prime> all;
    for (const auto& s : specs) {
        if (!s.set.empty() && s.set.max() > x) {
            throw DomainError("prime " + std::to_string(s.set.max()) + " exceeds x = " +
                              std::to_string(x));
        }
        all.insert(all.end(), s.set.begin(), s.set.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw DomainError("prime sets must be pairwise disjoint");
    }
}

// Every modulus whose multiples bump counter `slot`.
struct Strike {
    std::uint64_t modulus;
    std::uint32_t slot;
};

std::vector<Strike> build_strikes(std::uint64_t x, const std::vector<SetSpec>& specs) {
    std::vector<Strike> strikes;
    for (std::uint32_t j = 0; j < specs.size(); ++j) {
        for (Prime p : specs[j].set) {
            strikes.push_back({p, j});
            if (specs[j].mode == CountMode::WithMultiplicity) {
                for (std::uint64_t q = p; q <= x / p;) {
                    q *= p;
                    strikes.push_back({q, j});
                }
            }
        }
    }
    return strikes;
}

using KeyCounts = std::unordered_map<PackedKey, std::uint64_t>;

std::map<Tuple, std::uint64_t> to_tuples(const KeyCounts& keys, std::size_t m) {
    std::map<Tuple, std::uint64_t> out;
    for (const auto& [k, c] : keys) out[unpack(k, m)] += c;
    return out;
}

}  // namespace

JointCounts joint_factor_counts(std::uint64_t x, std::vector<SetSpec> specs,
                                const SieveOptions& opts) {
    validate_specs(x, specs);
    const std::size_t m = specs.size();
    const auto strikes = build_strikes(x, specs);

    auto job = [&](std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        std::vector<std::uint8_t> counter(span * m, 0);
        bool saturated = false;
        for (const auto& s : strikes) {
            std::uint64_t n = (lo + s.modulus - 1) / s.modulus * s.modulus;
            for (; n <= hi; n += s.modulus) {
                auto& c = counter[(n - lo) * m + s.slot];
                if (c == kSaturation) {
                    saturated = true;
                } else {
                    ++c;
                }
            }
        }
        if (saturated) throw CapRefusal("per-integer factor counter saturated at 255");
        KeyCounts keys;
        for (std::uint64_t i = 0; i < span; ++i) {
            PackedKey key = 0;
            for (std::size_t j = 0; j < m; ++j) {
                key |= PackedKey{counter[i * m + j]} << (kCounterBits * j);
            }
            ++keys[key];
        }
        return SegmentPartial{lo, hi, to_tuples(keys, m)};
    };

    JointCounts out;
    out.x = x;
    auto merge = [&](SegmentPartial part) {
        if (opts.on_segment) opts.on_segment(part);
        for (const auto& [t, c] : part.counts) out.counts[t] += c;
    };
    detail::for_each_segment(x, opts.segment_size, opts.threads, job, merge);
    out.specs = std::move(specs);
    return out;
}

JointCounts oracle_factor_counts(std::uint64_t x, std::vector<SetSpec> specs) {
    if (x > kOracleMaxX) {
        throw CapRefusal("trial-division oracle refuses x = " + std::to_string(x) +
                         " (cap 10^6)");
    }
    validate_specs(x, specs);
    const std::size_t m = specs.size();
    std::unordered_map<Prime, std::size_t> owner;
    for (std::size_t j = 0; j < m; ++j) {
        for (Prime p : specs[j].set) owner[p] = j;
    }
    JointCounts out;
    out.x = x;
    Tuple t(m);
    auto credit = [&](std::uint64_t p, std::uint32_t v) {
        auto it = owner.find(p);
        if (it == owner.end()) return;
        t[it->second] += specs[it->second].mode == CountMode::Distinct ? 1 : v;
    };
    for (std::uint64_t n = 1; n <= x; ++n) {
        std::fill(t.begin(), t.end(), 0);
        std::uint64_t r = n;
        for (std::uint64_t d = 2; d * d <= r; d += (d == 2 ? 1 : 2)) {
            std::uint32_t v = 0;
            while (r % d == 0) {
                r /= d;
                ++v;
            }
            if (v > 0) credit(d, v);
        }
        if (r > 1) credit(r, 1);
        ++out.counts[t];
    }
    out.specs = std::move(specs);
    return out;
}

JointPmf joint_pmf_of(const JointCounts& counts) {
    JointPmf out;
    out.dims = counts.dims();
    const auto denom = static_cast<double>(counts.x);
    for (const auto& [t, c] : counts.counts) {
        out.entries.emplace_hint(out.entries.end(), t, static_cast<double>(c) / denom);
    }
    return out;
}

JointCounts marginalize(const JointCounts& counts, std::size_t coord) {
    if (coord >= counts.dims()) throw DomainError("marginalize: coordinate out of range");
    JointCounts out;
    out.x = counts.x;
    out.specs = counts.specs;
    out.specs.erase(out.specs.begin() + static_cast<std::ptrdiff_t>(coord));
    for (const auto& [t, c] : counts.counts) {
        Tuple r = t;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(coord));
        out.counts[r] += c;
    }
    return out;
}

std::map<std::uint64_t, std::uint64_t> smooth_part_distribution(std::uint64_t x, std::uint64_t y,
                                                                const SieveOptions& opts) {
    if (y < 2 || x < 1) throw DomainError("smooth_part_distribution requires y >= 2 and x >= 1");
    if (x > kMaxX) throw CapRefusal("x = " + std::to_string(x) + " exceeds the cap x <= 2^40");
    std::vector<std::uint64_t> moduli;  // p^a <= x, tagged by p
    std::vector<std::uint64_t> base;
    if (x >= 2) {
        for (Prime p : sieve_primes(std::min(x, y))) {
            for (std::uint64_t q = p;; q *= p) {
                moduli.push_back(q);
                base.push_back(p);
                if (q > x / p) break;
            }
        }
    }

    using Partial = std::unordered_map<std::uint64_t, std::uint64_t>;
    auto job = [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> smooth(hi - lo + 1, 1);
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            const std::uint64_t q = moduli[i];
            for (std::uint64_t n = (lo + q - 1) / q * q; n <= hi; n += q) smooth[n - lo] *= base[i];
        }
        Partial part;
        for (std::uint64_t s : smooth) ++part[s];
        return part;
    };
    std::map<std::uint64_t, std::uint64_t> out;
    auto merge = [&](Partial part) {
        for (const auto& [s, c] : part) out[s] += c;
    };
    detail::for_each_segment(x, opts.segment_size, opts.threads, job, merge);
    return out;
}

}  // namespace pfpois
