#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pfpois/factorstats.hpp"

using namespace pfpois;

namespace {

std::map<Tuple, std::uint64_t> rows(std::initializer_list<std::pair<std::uint32_t, std::uint64_t>> list) {
    std::map<Tuple, std::uint64_t> out;
    for (const auto& [k, c] : list) out[{k}] = c;
    return out;
}

std::vector<SetSpec> random_specs(std::mt19937_64& rng, std::uint64_t x) {
    const PrimeSet pool = sieve_primes(std::min<std::uint64_t>(x, 200));
    std::vector<Prime> primes(pool.begin(), pool.end());
    std::shuffle(primes.begin(), primes.end(), rng);
    const std::size_t m = 1 + rng() % 4;
    std::vector<SetSpec> specs;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < m && pos < primes.size(); ++j) {
        const std::size_t len = 1 + rng() % 8;
        std::vector<Prime> chunk;
        for (std::size_t i = 0; i < len && pos < primes.size(); ++i) chunk.push_back(primes[pos++]);
        specs.push_back({PrimeSet::from_unsorted(chunk),
                         rng() % 2 ? CountMode::Distinct : CountMode::WithMultiplicity});
    }
    return specs;
}

}  // namespace

TEST_CASE("hand counts") {
    const auto a = joint_factor_counts(100, {{PrimeSet({2, 3}), CountMode::Distinct}});
    CHECK(a.counts == rows({{0, 33}, {1, 51}, {2, 16}}));
    CHECK(a.total() == 100);

    const auto b = joint_factor_counts(16, {{PrimeSet({2}), CountMode::WithMultiplicity}});
    CHECK(b.counts == rows({{0, 8}, {1, 4}, {2, 2}, {3, 1}, {4, 1}}));

    const auto c = joint_factor_counts(1, {{PrimeSet(), CountMode::Distinct},
                                           {PrimeSet(), CountMode::WithMultiplicity}});
    REQUIRE(c.counts.size() == 1);
    CHECK(c.counts.at({0, 0}) == 1);

    const auto d = oracle_factor_counts(30, {{PrimeSet({29}), CountMode::Distinct}});
    CHECK(d.counts == rows({{0, 29}, {1, 1}}));
    const auto e = oracle_factor_counts(8, {{PrimeSet({2}), CountMode::WithMultiplicity}});
    CHECK(e.counts == rows({{0, 4}, {1, 2}, {2, 1}, {3, 1}}));
}

TEST_CASE("sieve agrees with trial division on the documented pair") {
    const std::vector<SetSpec> specs{{PrimeSet({2, 3, 5}), CountMode::Distinct},
                                     {PrimeSet({7, 11}), CountMode::WithMultiplicity}};
    CHECK(joint_factor_counts(10'000, specs).counts == oracle_factor_counts(10'000, specs).counts);
}

TEST_CASE("sieve agrees with trial division on random suites") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint64_t x = 1 + rng() % 10'000;
        const auto specs = random_specs(rng, std::max<std::uint64_t>(x, 2));
        std::vector<SetSpec> kept;
        for (const auto& s : specs) {
            if (s.set.max() <= x) kept.push_back(s);
        }
        if (kept.empty()) continue;
        SieveOptions opts;
        opts.segment_size = 64 + rng() % 2000;
        opts.threads = 1 + rng() % 4;
        CHECK(joint_factor_counts(x, kept, opts).counts == oracle_factor_counts(x, kept).counts);
    }
}

TEST_CASE("segment callbacks arrive in order and add up") {
    SieveOptions opts;
    opts.segment_size = 1000;
    opts.threads = 3;
    std::vector<SegmentPartial> seen;
    opts.on_segment = [&](const SegmentPartial& p) { seen.push_back(p); };
    const auto counts = joint_factor_counts(9'500, {{sieve_primes(50), CountMode::Distinct}}, opts);
    REQUIRE(seen.size() == 10);
    std::map<Tuple, std::uint64_t> sum;
    std::uint64_t next = 1;
    for (const auto& p : seen) {
        CHECK(p.lo == next);
        next = p.hi + 1;
        for (const auto& [t, c] : p.counts) sum[t] += c;
    }
    CHECK(next == 9'501);
    CHECK(sum == counts.counts);
}

TEST_CASE("marginalizing drops a coordinate") {
    const std::vector<SetSpec> specs{{PrimeSet({2, 3}), CountMode::Distinct},
                                     {PrimeSet({5, 7, 11}), CountMode::WithMultiplicity},
                                     {PrimeSet({13}), CountMode::Distinct}};
    const auto full = joint_factor_counts(5000, specs);
    for (std::size_t drop = 0; drop < specs.size(); ++drop) {
        std::vector<SetSpec> rest;
        for (std::size_t j = 0; j < specs.size(); ++j) {
            if (j != drop) rest.push_back(specs[j]);
        }
        CHECK(marginalize(full, drop).counts == joint_factor_counts(5000, rest).counts);
    }
}

TEST_CASE("double counting identities") {
    for (std::uint64_t x : {2ull, 97ull, 1000ull, 30'030ull}) {
        const PrimeSet all = sieve_primes(x);
        const auto omega = joint_factor_counts(x, {{all, CountMode::Distinct}});
        const auto big_omega = joint_factor_counts(x, {{all, CountMode::WithMultiplicity}});
        std::uint64_t lhs_d = 0;
        std::uint64_t lhs_m = 0;
        for (const auto& [t, c] : omega.counts) lhs_d += t[0] * c;
        for (const auto& [t, c] : big_omega.counts) lhs_m += t[0] * c;
        std::uint64_t rhs_d = 0;
        std::uint64_t rhs_m = 0;
        for (Prime p : all) {
            rhs_d += x / p;
            for (std::uint64_t q = p; q <= x; q *= p) rhs_m += x / q;
        }
        CHECK(lhs_d == rhs_d);
        CHECK(lhs_m == rhs_m);
    }
}

TEST_CASE("joint_pmf_of normalizes") {
    const auto counts = joint_factor_counts(100, {{PrimeSet({2, 3}), CountMode::Distinct}});
    const JointPmf pmf = joint_pmf_of(counts);
    CHECK(pmf.at({0}) == 0.33);
    CHECK(pmf.at({1}) == 0.51);
    CHECK(pmf.at({2}) == 0.16);
    CHECK(std::fabs(pmf.mass() - 1.0) <= 1e-15);
    CHECK(pmf.tail_bound == 0.0);

    const auto single = joint_factor_counts(1, {{PrimeSet(), CountMode::Distinct}});
    CHECK(joint_pmf_of(single).at({0}) == 1.0);

    const auto wide = joint_factor_counts(
        77'777, {{sieve_primes(40), CountMode::WithMultiplicity},
                 {PrimeSet({41, 43, 47}), CountMode::Distinct}});
    CHECK(std::fabs(joint_pmf_of(wide).mass() - 1.0) <= 1e-15);
}

TEST_CASE("smooth parts") {
    const auto ten = smooth_part_distribution(10, 2);
    CHECK(ten == std::map<std::uint64_t, std::uint64_t>{{1, 5}, {2, 3}, {4, 1}, {8, 1}});

    const auto self = smooth_part_distribution(60, 60);
    CHECK(self.size() == 60);
    for (const auto& [s, c] : self) CHECK(c == 1);

    for (std::uint64_t y : {2ull, 3ull, 7ull, 30ull}) {
        const std::uint64_t x = 3000;
        const auto dist = smooth_part_distribution(x, y);
        std::uint64_t total = 0;
        for (const auto& [s, c] : dist) {
            total += c;
            REQUIRE(s <= x);
            std::uint64_t r = s;
            for (std::uint64_t p = 2; p <= y; ++p) {
                while (r % p == 0) r /= p;
            }
            REQUIRE(r == 1);
            std::uint64_t expected = 0;
            for (std::uint64_t n = s; n <= x; n += s) {
                std::uint64_t q = n / s;
                bool coprime = true;
                for (std::uint64_t p = 2; p <= y; ++p) {
                    if (oracle::trial_is_prime(p) && q % p == 0) coprime = false;
                }
                if (coprime) ++expected;
            }
            REQUIRE(c == expected);
        }
        CHECK(total == x);
    }
}

TEST_CASE("caps and validation") {
    CHECK_THROWS_AS(joint_factor_counts(kMaxX + 1, {{PrimeSet({2}), CountMode::Distinct}}),
                    CapRefusal);
    std::vector<SetSpec> nine;
    for (Prime p : sieve_primes(23)) nine.push_back({PrimeSet({p}), CountMode::Distinct});
    REQUIRE(nine.size() == 9);
    CHECK_THROWS_AS(joint_factor_counts(100, nine), CapRefusal);
    CHECK_THROWS_AS(oracle_factor_counts(kOracleMaxX + 1, {{PrimeSet({2}), CountMode::Distinct}}),
                    CapRefusal);
    CHECK_THROWS_AS(joint_factor_counts(100, {{PrimeSet({2, 3}), CountMode::Distinct},
                                              {PrimeSet({3}), CountMode::Distinct}}),
                    DomainError);
    CHECK_THROWS_AS(joint_factor_counts(10, {{PrimeSet({11}), CountMode::Distinct}}), DomainError);
    CHECK_THROWS_AS(joint_factor_counts(10, {}), DomainError);
}

TEST_CASE("thread count does not change results") {
    const std::vector<SetSpec> specs{{sieve_primes(100), CountMode::Distinct},
                                     {primes_in_interval(100, 1000), CountMode::WithMultiplicity}};
    SieveOptions one;
    one.segment_size = 4096;
    SieveOptions many = one;
    many.threads = 7;
    CHECK(joint_factor_counts(200'000, specs, one).counts ==
          joint_factor_counts(200'000, specs, many).counts);
}
