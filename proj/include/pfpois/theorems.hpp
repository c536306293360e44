#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pfpois/dist.hpp"
#include "pfpois/factorstats.hpp"
#include "pfpois/primesets.hpp"

namespace pfpois {

using ParamValue = std::variant<std::int64_t, double, std::string>;

/// One bound check: measured left side against a right side whose implied constant is unknown.
struct TheoremReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<double> ratio;  ///< empty when rhs == 0 ("undefined")
    double uncertainty = 0.0;
    std::vector<std::pair<std::string, ParamValue>> params;  ///< insertion ordered

    void set(std::string key, ParamValue value);
    [[nodiscard]] const ParamValue* find(std::string_view key) const noexcept;
    [[nodiscard]] double number(std::string_view key) const;  ///< throws if absent or text

    /// Sets lhs, rhs and ratio together.
    void set_sides(double left, double right);
};

// ---------------------------------------------------------------------------
// Joint Poisson approximation for sets of small primes.

struct Thm1Config {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    std::vector<SetSpec> specs;
};

/// lhs: d_TV of the true count vector against independent Poisson(H) / Poisson(H').
/// rhs: sum_j H''(T_j)/(1+H(T_j)) + u^{-u}. The model route (model vector vs Poisson, and the
/// exact model transfer error) is attached as params so the triangle inequality is visible.
TheoremReport check_thm1(const Thm1Config& cfg, const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Doubly-exponential blocks against Poisson(1).

struct Corollary1Config {
    std::uint64_t x = 0;
    int k_lo = 1;
    int k_hi = 1;
    /// Block k is used when t_{k+1} <= x^{fit_exponent}.
    double fit_exponent = 1.0 / 3.0;
};

TheoremReport check_corollary1(const Corollary1Config& cfg, const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Uniform upper bound for P_x(omega(n; T_j) = k_j for all j).

/// Joint distinct counts for disjoint sets, shared across many k-vectors.
class Thm2Context {
public:
    Thm2Context(std::uint64_t x, std::vector<PrimeSet> sets, const SieveOptions& opts = {});

    [[nodiscard]] std::uint64_t x() const noexcept { return counts_.x; }
    [[nodiscard]] int eta() const noexcept { return eta_; }
    [[nodiscard]] const std::vector<HarmonicSums>& sums() const noexcept { return sums_; }
    [[nodiscard]] const JointCounts& counts() const noexcept { return counts_; }

private:
    JointCounts counts_;
    std::vector<HarmonicSums> sums_;
    int eta_ = 1;
};

struct Thm2Config {
    std::uint64_t x = 0;
    std::vector<PrimeSet> sets;
    std::vector<std::uint32_t> ks;
};

/// lhs = P_x(...); rhs = rhs_first; rhs_second and its ratio are params.
TheoremReport check_thm2(const Thm2Context& ctx, const std::vector<std::uint32_t>& ks);
TheoremReport check_thm2(const Thm2Config& cfg, const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Conditional tail of omega(n, T) given omega(n) = k.

/// Joint counts of (omega(n, T), omega(n, S \ T)), S = primes <= x.
class Thm3Context {
public:
    Thm3Context(std::uint64_t x, PrimeSet t, const SieveOptions& opts = {});

    [[nodiscard]] std::uint64_t x() const noexcept { return x_; }
    [[nodiscard]] double h_t() const noexcept { return h_t_; }
    [[nodiscard]] double h_complement() const noexcept { return h_c_; }
    [[nodiscard]] double alpha() const noexcept { return h_t_ / (h_t_ + h_c_); }
    /// Counts of n <= x with omega(n, T) = a and omega(n) = k, indexed [k][a].
    [[nodiscard]] const std::vector<std::vector<std::uint64_t>>& by_total() const noexcept {
        return by_total_;
    }
    /// The same data seen from S \ T.
    [[nodiscard]] Thm3Context complement() const;

private:
    Thm3Context() = default;
    std::uint64_t x_ = 0;
    std::size_t t_size_ = 0;
    double h_t_ = 0.0;
    double h_c_ = 0.0;
    std::vector<std::vector<std::uint64_t>> by_total_;
};

struct Thm3Config {
    std::uint64_t x = 0;
    PrimeSet t;
    std::uint32_t k = 1;
    double a = 3.0;
    double psi = 0.0;
};

/// lhs = P(|omega(n,T) - alpha k| >= psi sqrt(alpha(1-alpha)k) | omega(n) = k), rhs = e^{-psi^2/3}.
/// Throws DomainError for psi outside [0, sqrt(alpha k)], k = 0, A <= 1 or an empty condition.
/// k > A log log x is allowed and flagged in params (k_in_range = 0).
TheoremReport check_thm3(const Thm3Context& ctx, std::uint32_t k, double a, double psi);
TheoremReport check_thm3(const Thm3Config& cfg, const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Local law of Omega(n, T) against Poisson(H) and Poisson(H').

struct KRange {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

/// Default k range [0, ceil(3H) + 10].
KRange default_k_range(double h) noexcept;

std::vector<TheoremReport> check_halasz(std::uint64_t x, const PrimeSet& t,
                                        std::optional<KRange> k_range = std::nullopt,
                                        const SieveOptions& opts = {});

// ---------------------------------------------------------------------------
// Model law against Poisson: pointwise and in total variation.

std::vector<TheoremReport> check_thm4_local(const PrimeSet& t, CountMode mode);

TheoremReport check_cor32(const PrimeSet& t, CountMode mode = CountMode::Distinct);

}  // namespace pfpois
