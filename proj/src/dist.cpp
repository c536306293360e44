#include "pfpois/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pfpois {

namespace {

constexpr double kMassSlack = 1e-12;

void check_mass(double mass, double tail_bound, const char* what) {
    if (!(tail_bound >= 0.0)) throw DomainError(std::string(what) + ": negative tail bound");
    if (mass > 1.0 + kMassSlack || mass < 1.0 - tail_bound - kMassSlack) {
        throw DomainError(std::string(what) + ": mass " + std::to_string(mass) +
                          " inconsistent with tail bound " + std::to_string(tail_bound));
    }
}

}  // namespace

double Pmf::mass() const noexcept {
    CompensatedSum s;
    for (double v : probs) s.add(v);
    return s.value();
}

double Pmf::mean() const noexcept {
    CompensatedSum s;
    for (std::size_t k = 1; k < probs.size(); ++k) s.add(static_cast<double>(k) * probs[k]);
    return s.value();
}

void Pmf::validate() const {
    for (double v : probs) {
        if (!(v >= 0.0)) throw DomainError("pmf: negative or NaN probability");
    }
    check_mass(mass(), tail_bound, "pmf");
}

Pmf Pmf::point_mass(std::size_t k) {
    Pmf p;
    p.probs.assign(k + 1, 0.0);
    p.probs[k] = 1.0;
    return p;
}

double JointPmf::mass() const noexcept {
    CompensatedSum s;
    for (const auto& [t, v] : entries) s.add(v);
    return s.value();
}

double JointPmf::at(const Tuple& t) const noexcept {
    auto it = entries.find(t);
    return it == entries.end() ? 0.0 : it->second;
}

Pmf JointPmf::marginal(std::size_t coord) const {
    if (coord >= dims) throw DomainError("marginal: coordinate out of range");
    std::vector<CompensatedSum> acc;
    for (const auto& [t, v] : entries) {
        if (t[coord] >= acc.size()) acc.resize(t[coord] + 1);
        acc[t[coord]].add(v);
    }
    Pmf out;
    out.tail_bound = tail_bound;
    out.probs.reserve(acc.size());
    for (const auto& s : acc) out.probs.push_back(s.value());
    if (out.probs.empty()) out.probs.push_back(0.0);
    return out;
}

void JointPmf::validate() const {
    if (dims == 0) throw DomainError("joint pmf: dims must be >= 1");
    for (const auto& [t, v] : entries) {
        if (t.size() != dims) throw DomainError("joint pmf: tuple arity mismatch");
        if (!(v >= 0.0)) throw DomainError("joint pmf: negative or NaN probability");
    }
    check_mass(mass(), tail_bound, "joint pmf");
}

double poisson_log_chernoff_tail(double lambda, std::uint64_t k) noexcept {
    if (lambda == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const auto kd = static_cast<double>(k);
    return -lambda + kd * (1.0 + std::log(lambda) - std::log(kd));
}

Pmf poisson_pmf(double lambda, double tail_eps) {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw DomainError("poisson_pmf: lambda must be finite and >= 0");
    }
    if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
        throw DomainError("poisson_pmf: tail_eps must lie in (0, 1)");
    }
    if (lambda == 0.0) return Pmf::point_mass(0);

    const double log_eps = std::log(tail_eps);
    auto cut = static_cast<std::uint64_t>(std::floor(lambda)) + 1;
    while (poisson_log_chernoff_tail(lambda, cut) >= log_eps) ++cut;

    Pmf out;
    out.probs.resize(cut);
    const bool small = lambda <= 30.0;
    const double log_lambda = std::log(lambda);
    double linear = std::exp(-lambda);
    for (std::uint64_t k = 0; k < cut; ++k) {
        if (small && k <= 30) {
            if (k > 0) linear *= lambda / static_cast<double>(k);
            out.probs[k] = linear;
        } else {
            out.probs[k] =
                std::exp(-lambda + static_cast<double>(k) * log_lambda - log_factorial(k));
        }
    }
    out.tail_bound = std::exp(poisson_log_chernoff_tail(lambda, cut));
    return out;
}

Pmf binomial_pmf(std::uint32_t k, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("binomial_pmf: alpha outside [0, 1]");
    if (alpha == 0.0) return Pmf::point_mass(0);
    if (alpha == 1.0) return Pmf::point_mass(k);
    Pmf out;
    out.probs.resize(std::size_t{k} + 1);
    const double la = std::log(alpha);
    const double lb = std::log1p(-alpha);
    const double lk = log_factorial(k);
    for (std::uint32_t m = 0; m <= k; ++m) {
        const double log_choose = lk - log_factorial(m) - log_factorial(k - m);
        out.probs[m] = std::exp(log_choose + m * la + (k - m) * lb);
    }
    return out;
}

BinomialTailBounds binomial_tail_bound(std::uint32_t k, double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("binomial_tail_bound: alpha and beta must lie in [0, 1]");
    }
    if (k == 0 || alpha == beta) return {1.0, 1.0};
    if (alpha == 0.0 || alpha == 1.0) return {0.0, 0.0};
    const auto xlogy = [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); };
    const double kl = xlogy(beta, alpha) + xlogy(1.0 - beta, 1.0 - alpha);
    const double kd = k;
    const double gap = alpha - beta;
    return {std::exp(-kd * kl), std::exp(-gap * gap * kd / (3.0 * alpha * (1.0 - alpha)))};
}

namespace {

TvResult finish_tv(double value, double tail_a, double tail_b) {
    value = std::clamp(value, 0.0, 1.0);
    const double unc = std::min(0.5 * (tail_a + tail_b), 1.0 - value);
    return {value, std::max(unc, 0.0)};
}

}  // namespace

TvResult tv_distance(const Pmf& p, const Pmf& q) noexcept {
    const std::size_t n = std::max(p.probs.size(), q.probs.size());
    CompensatedSum s;
    for (std::size_t k = 0; k < n; ++k) s.add(std::fabs(p.at(k) - q.at(k)));
    return finish_tv(0.5 * s.value(), p.tail_bound, q.tail_bound);
}

TvResult tv_distance_joint(const JointPmf& p, const JointPmf& q) {
    if (p.dims != q.dims) throw DomainError("tv_distance_joint: dimension mismatch");
    CompensatedSum s;
    auto a = p.entries.begin();
    auto b = q.entries.begin();
    while (a != p.entries.end() || b != q.entries.end()) {
        if (b == q.entries.end() || (a != p.entries.end() && a->first < b->first)) {
            s.add(std::fabs(a->second));
            ++a;
        } else if (a == p.entries.end() || b->first < a->first) {
            s.add(std::fabs(b->second));
            ++b;
        } else {
            s.add(std::fabs(a->second - b->second));
            ++a;
            ++b;
        }
    }
    return finish_tv(0.5 * s.value(), p.tail_bound, q.tail_bound);
}

JointPmf product_joint(std::span<const Pmf> components) {
    if (components.empty()) throw DomainError("product_joint: empty component list");
    JointPmf out;
    out.dims = components.size();
    double tail = 0.0;
    for (const auto& c : components) {
        if (c.probs.empty()) throw DomainError("product_joint: component with empty support");
        tail += c.tail_bound;
    }
    out.tail_bound = std::min(tail, 1.0);

    Tuple idx(components.size(), 0);
    // Odometer over the truncated grid.
    while (true) {
        double v = 1.0;
        for (std::size_t j = 0; j < components.size() && v != 0.0; ++j) {
            v *= components[j].probs[idx[j]];
        }
        if (v != 0.0) out.entries.emplace_hint(out.entries.end(), idx, v);
        std::size_t j = components.size();
        while (j > 0) {
            --j;
            if (++idx[j] < components[j].probs.size()) break;
            idx[j] = 0;
            if (j == 0) return out;
        }
    }
}

Pmf trim_tail(Pmf p, double eps) {
    double dropped = 0.0;
    while (p.probs.size() > 1 && dropped + p.probs.back() <= eps) {
        dropped += p.probs.back();
        p.probs.pop_back();
    }
    p.tail_bound = std::min(p.tail_bound + dropped, 1.0);
    return p;
}

double poisson_mass(double lambda, std::uint64_t k) noexcept {
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-lambda + static_cast<double>(k) * std::log(lambda) - log_factorial(k));
}

JointPmf as_joint(const Pmf& p) {
    JointPmf out;
    out.dims = 1;
    out.tail_bound = p.tail_bound;
    for (std::size_t k = 0; k < p.probs.size(); ++k) {
        if (p.probs[k] != 0.0) out.entries.emplace_hint(out.entries.end(), Tuple{static_cast<std::uint32_t>(k)}, p.probs[k]);
    }
    return out;
}

}  // namespace pfpois
