#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pfpois/numeric.hpp"

namespace pfpois {

/// Truncated probability mass function on {0, 1, 2, ...}.
///
/// `tail_bound` is a certified upper bound on the mass missing from `probs`, whether it sits
/// beyond the stored indices or was dropped by truncating a factor before a convolution.
struct Pmf {
    std::vector<double> probs;
    double tail_bound = 0.0;

    [[nodiscard]] double at(std::size_t k) const noexcept {
        return k < probs.size() ? probs[k] : 0.0;
    }
    [[nodiscard]] double mass() const noexcept;
    [[nodiscard]] double mean() const noexcept;

    /// Throws DomainError unless probs >= 0 and 1 - tail_bound <= mass <= 1 + 1e-12.
    void validate() const;

    static Pmf point_mass(std::size_t k);
};

using Tuple = std::vector<std::uint32_t>;

/// Sparse joint pmf over m-tuples of nonnegative integers.
struct JointPmf {
    std::size_t dims = 1;
    std::map<Tuple, double> entries;
    double tail_bound = 0.0;

    [[nodiscard]] double mass() const noexcept;
    [[nodiscard]] double at(const Tuple& t) const noexcept;
    /// Marginal law of one coordinate (tail bound carried over).
    [[nodiscard]] Pmf marginal(std::size_t coord) const;
    void validate() const;
};

struct TvResult {
    double value = 0.0;
    double uncertainty = 0.0;
};

inline constexpr double kDefaultTailEps = 1e-12;

/// Poisson(lambda) truncated where the Chernoff certificate e^{-l}(e l/K)^K drops below
/// tail_eps. Throws DomainError for negative or non-finite lambda or tail_eps outside (0,1).
Pmf poisson_pmf(double lambda, double tail_eps = kDefaultTailEps);

/// log P(Z >= K) upper bound for Z ~ Poisson(lambda), valid for K > lambda.
double poisson_log_chernoff_tail(double lambda, std::uint64_t k) noexcept;

/// Binomial(k, alpha), exact support [0, k]. Throws DomainError if alpha is outside [0, 1].
Pmf binomial_pmf(std::uint32_t k, double alpha);

struct BinomialTailBounds {
    double kullback = 1.0;     ///< exp{-k KL(beta || alpha)}
    double exponential = 1.0;  ///< exp{-(alpha-beta)^2 k / (3 alpha (1-alpha))}
};

/// Closed-form tail bounds for P(X <= beta k) (beta <= alpha) or P(X >= beta k) (beta >= alpha).
/// Degenerate alpha in {0, 1} with beta != alpha gives zeros (the event is then empty).
BinomialTailBounds binomial_tail_bound(std::uint32_t k, double alpha, double beta);

TvResult tv_distance(const Pmf& p, const Pmf& q) noexcept;

/// Throws DomainError if dims differ.
TvResult tv_distance_joint(const JointPmf& p, const JointPmf& q);

/// Independent product over the truncated grid; tail bounds combine by union bound.
/// Throws DomainError for an empty list.
JointPmf product_joint(std::span<const Pmf> components);

/// Drop trailing entries whose combined mass is at most eps; the dropped mass is added to
/// tail_bound.
Pmf trim_tail(Pmf p, double eps);

/// e^{-lambda} lambda^k / k!, untruncated.
double poisson_mass(double lambda, std::uint64_t k) noexcept;

/// Promote a Pmf to a 1-dimensional JointPmf.
JointPmf as_joint(const Pmf& p);

}  // namespace pfpois
