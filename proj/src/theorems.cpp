#include "pfpois/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfpois/kubilius.hpp"

namespace pfpois {

void TheoremReport::set(std::string key, ParamValue value) {
    for (auto& [k, v] : params) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    params.emplace_back(std::move(key), std::move(value));
}

const ParamValue* TheoremReport::find(std::string_view key) const noexcept {
    for (const auto& [k, v] : params) {
        if (k == key) return &v;
    }
    return nullptr;
}

double TheoremReport::number(std::string_view key) const {
    const ParamValue* v = find(key);
    if (v == nullptr) throw DomainError("report has no parameter '" + std::string(key) + "'");
    if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(v)) return *d;
    throw DomainError("report parameter '" + std::string(key) + "' is not numeric");
}

void TheoremReport::set_sides(double left, double right) {
    lhs = left;
    rhs = right;
    ratio = right > 0.0 ? std::optional<double>(left / right) : std::nullopt;
}

namespace {

double poisson_parameter(const HarmonicSums& s, CountMode mode) noexcept {
    return mode == CountMode::Distinct ? s.h : s.h1;
}

std::string indexed(const char* key, std::size_t j) {
    return std::string(key) + "_" + std::to_string(j + 1);
}

void add_set_params(TheoremReport& r, std::size_t j, const PrimeSet& set, const HarmonicSums& s) {
    r.set(indexed("size", j), static_cast<std::int64_t>(set.size()));
    r.set(indexed("h", j), s.h);
    r.set(indexed("h1", j), s.h1);
    r.set(indexed("h2", j), s.h2);
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// Poisson laws and model laws feeding joint TVs are trimmed at this mass; the trimmed mass
// moves into the certified tail.
constexpr double kJointTrim = 1e-13;

}  // namespace

TheoremReport check_thm1(const Thm1Config& cfg, const SieveOptions& opts) {
    if (cfg.y < 2 || cfg.y > cfg.x) throw DomainError("thm1 requires 2 <= y <= x");
    if (cfg.specs.empty()) throw DomainError("thm1 requires at least one set");
    for (const auto& s : cfg.specs) {
        if (s.set.empty()) throw DomainError("thm1 requires nonempty sets");
        if (s.set.max() > cfg.y) throw DomainError("thm1 sets must lie in [2, y]");
    }
    const double u = std::log(static_cast<double>(cfg.x)) / std::log(static_cast<double>(cfg.y));
    const double smooth_term = std::pow(u, -u);

    const auto counts = joint_factor_counts(cfg.x, cfg.specs, opts);
    const JointPmf empirical = joint_pmf_of(counts);

    TheoremReport r;
    r.name = "thm1";
    r.set("x", as_int(cfg.x));
    r.set("y", as_int(cfg.y));
    r.set("u", u);
    r.set("m", static_cast<std::int64_t>(cfg.specs.size()));

    std::vector<Pmf> poissons;
    std::vector<Pmf> models;
    CompensatedSum poisson_term;
    for (std::size_t j = 0; j < cfg.specs.size(); ++j) {
        const auto& spec = cfg.specs[j];
        const auto s = harmonic_sums(spec.set);
        add_set_params(r, j, spec.set, s);
        r.set(indexed("mode", j), std::string(to_string(spec.mode)));
        poisson_term.add(s.h2 / (1.0 + s.h));
        poissons.push_back(trim_tail(poisson_pmf(poisson_parameter(s, spec.mode)), kJointTrim));
        models.push_back(trim_tail(model_exact_pmf({spec.set, spec.mode, kDefaultTailEps}), kJointTrim));
    }
    const JointPmf poisson_joint = product_joint(poissons);
    const JointPmf model_joint = product_joint(models);

    const TvResult lhs = tv_distance_joint(empirical, poisson_joint);
    const TvResult model_route = tv_distance_joint(model_joint, poisson_joint);
    const TvResult empirical_vs_model = tv_distance_joint(empirical, model_joint);
    const TvResult transfer = model_tv_exact(cfg.x, cfg.y, opts);

    r.set_sides(lhs.value, poisson_term.value() + smooth_term);
    r.uncertainty = lhs.uncertainty;
    r.set("rhs_poisson_term", poisson_term.value());
    r.set("rhs_smooth_term", smooth_term);
    r.set("model_route_tv", model_route.value);
    r.set("model_route_uncertainty", model_route.uncertainty);
    r.set("empirical_vs_model_tv", empirical_vs_model.value);
    r.set("model_transfer_tv", transfer.value);
    const double slack = model_route.value + model_route.uncertainty + transfer.value +
                         lhs.uncertainty - lhs.value;
    r.set("triangle_slack", slack);
    r.set("triangle_holds", std::int64_t{slack >= -1e-12 ? 1 : 0});
    return r;
}

TheoremReport check_corollary1(const Corollary1Config& cfg, const SieveOptions& opts) {
    if (cfg.k_lo > cfg.k_hi) throw DomainError("cor1: empty block range");
    if (cfg.k_lo < 0) throw DomainError("cor1: block indices must be >= 0");
    if (!(cfg.fit_exponent > 0.0 && cfg.fit_exponent <= 1.0)) {
        throw DomainError("cor1: fit exponent must lie in (0, 1]");
    }
    const long double limit =
        std::pow(static_cast<long double>(cfg.x), static_cast<long double>(cfg.fit_exponent));

    TheoremReport r;
    r.name = "cor1";
    r.set("x", as_int(cfg.x));
    r.set("k_lo", std::int64_t{cfg.k_lo});
    r.set("k_hi", std::int64_t{cfg.k_hi});
    r.set("fit_exponent", cfg.fit_exponent);
    r.set("rounding", std::string(kExpExpRounding));

    std::vector<SetSpec> specs;
    int used_hi = cfg.k_lo - 1;
    for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        std::uint64_t upper = 0;
        try {
            upper = expexp_cutoff(k + 1);
        } catch (const CapRefusal&) {
            break;
        }
        if (static_cast<long double>(upper) > limit) break;
        specs.push_back({expexp_block(k), CountMode::Distinct});
        used_hi = k;
    }
    if (specs.empty()) {
        throw DomainError("cor1: no block (t_k, t_{k+1}] with t_{k+1} <= x^" +
                          std::to_string(cfg.fit_exponent) + " for x = " + std::to_string(cfg.x));
    }
    r.set("blocks_used", static_cast<std::int64_t>(specs.size()));
    r.set("k_used_hi", std::int64_t{used_hi});
    for (int k = cfg.k_lo; k <= cfg.k_hi + 1; ++k) {
        try {
            r.set("t_" + std::to_string(k), as_int(expexp_cutoff(k)));
        } catch (const CapRefusal&) {
            break;
        }
    }
    const auto y = expexp_cutoff(used_hi + 1);
    r.set("u", std::log(static_cast<double>(cfg.x)) / std::log(static_cast<double>(y)));

    std::vector<Pmf> unit;
    for (std::size_t j = 0; j < specs.size(); ++j) {
        const auto s = harmonic_sums(specs[j].set);
        const int k = cfg.k_lo + static_cast<int>(j);
        r.set("h_block_" + std::to_string(k), s.h);
        r.set("h_dev_block_" + std::to_string(k), std::fabs(s.h - 1.0));
        unit.push_back(trim_tail(poisson_pmf(1.0), kJointTrim));
    }
    const auto counts = joint_factor_counts(cfg.x, specs, opts);
    const TvResult tv = tv_distance_joint(joint_pmf_of(counts), product_joint(unit));
    r.set_sides(tv.value, std::exp(-std::exp(0.5 * cfg.k_lo)));
    r.uncertainty = tv.uncertainty;
    return r;
}

Thm2Context::Thm2Context(std::uint64_t x, std::vector<PrimeSet> sets, const SieveOptions& opts) {
    if (sets.empty()) throw DomainError("thm2 requires at least one set");
    std::vector<SetSpec> specs;
    std::size_t covered = 0;
    for (auto& s : sets) {
        if (s.empty()) throw DomainError("thm2 requires nonempty sets");
        sums_.push_back(harmonic_sums(s));
        covered += s.size();
        specs.push_back({std::move(s), CountMode::Distinct});
    }
    counts_ = joint_factor_counts(x, std::move(specs), opts);
    // Sets are disjoint and within [2, x], so the union is everything iff the sizes add up.
    eta_ = covered == (x >= 2 ? sieve_primes(x).size() : 0) ? 0 : 1;
}

TheoremReport check_thm2(const Thm2Context& ctx, const std::vector<std::uint32_t>& ks) {
    const auto& sums = ctx.sums();
    if (ks.size() != sums.size()) throw DomainError("thm2: one k per set is required");
    const int eta = ctx.eta();
    const bool all_zero = std::all_of(ks.begin(), ks.end(), [](auto k) { return k == 0; });
    const int xi = (eta == 0 && all_zero) ? 1 : 0;

    const auto it = ctx.counts().counts.find(Tuple(ks.begin(), ks.end()));
    const std::uint64_t hits = it == ctx.counts().counts.end() ? 0 : it->second;
    const double lhs = static_cast<double>(hits) / static_cast<double>(ctx.x());

    double log_first = 0.0;
    double log_second = 0.0;
    double spread = eta;
    bool h1_ok = true;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double k = ks[j];
        const auto& s = sums[j];
        log_first += k * std::log(s.h1) - log_factorial(ks[j]) - s.h;
        log_second += k * std::log(s.h + 2.0) - log_factorial(ks[j]) - s.h;
        spread += k / s.h1;
        h1_ok = h1_ok && s.h1 <= s.h + 1.0 + 1e-12;
    }
    const double first = std::exp(log_first) * spread + xi;
    const double second = std::exp(log_second);

    TheoremReport r;
    r.name = "thm2";
    r.set("x", as_int(ctx.x()));
    r.set("r", static_cast<std::int64_t>(ks.size()));
    r.set("eta", std::int64_t{eta});
    r.set("xi", std::int64_t{xi});
    for (std::size_t j = 0; j < ks.size(); ++j) {
        r.set(indexed("k", j), std::int64_t{ks[j]});
        r.set(indexed("h", j), sums[j].h);
        r.set(indexed("h1", j), sums[j].h1);
    }
    r.set("count", as_int(hits));
    r.set_sides(lhs, first);
    r.set("rhs_second", second);
    r.set("ratio_second", lhs / second);
    r.set("h1_le_h_plus_1", std::int64_t{h1_ok ? 1 : 0});
    if (xi == 0) r.set("first_le_second", std::int64_t{first <= second * (1.0 + 1e-12) ? 1 : 0});
    return r;
}

TheoremReport check_thm2(const Thm2Config& cfg, const SieveOptions& opts) {
    return check_thm2(Thm2Context(cfg.x, cfg.sets, opts), cfg.ks);
}

Thm3Context::Thm3Context(std::uint64_t x, PrimeSet t, const SieveOptions& opts) : x_(x) {
    if (t.empty()) throw DomainError("thm3 requires a nonempty T");
    if (x < 2) throw DomainError("thm3 requires x >= 2");
    const PrimeSet all = sieve_primes(x);
    for (Prime p : t) {
        if (!all.contains(p)) throw DomainError("thm3: T must be a subset of the primes <= x");
    }
    PrimeSet rest = all.set_difference(t);
    h_t_ = harmonic_sums(t).h;
    h_c_ = harmonic_sums(rest).h;
    t_size_ = t.size();
    const auto counts = joint_factor_counts(
        x, {{std::move(t), CountMode::Distinct}, {std::move(rest), CountMode::Distinct}}, opts);
    for (const auto& [tuple, c] : counts.counts) {
        const std::size_t total = tuple[0] + tuple[1];
        if (total >= by_total_.size()) by_total_.resize(total + 1);
        auto& row = by_total_[total];
        row.resize(total + 1, 0);
        row[tuple[0]] += c;
    }
    for (std::size_t k = 0; k < by_total_.size(); ++k) by_total_[k].resize(k + 1, 0);
}

Thm3Context Thm3Context::complement() const {
    Thm3Context c;
    c.x_ = x_;
    c.h_t_ = h_c_;
    c.h_c_ = h_t_;
    c.by_total_ = by_total_;
    for (auto& row : c.by_total_) std::reverse(row.begin(), row.end());
    return c;
}

TheoremReport check_thm3(const Thm3Context& ctx, std::uint32_t k, double a, double psi) {
    if (k < 1) throw DomainError("thm3 requires k >= 1");
    if (!(a > 1.0)) throw DomainError("thm3 requires A > 1");
    const double ht = ctx.h_t();
    const double hc = ctx.h_complement();
    const double alpha = ctx.alpha();
    const double psi_max = std::sqrt(alpha * k);
    if (!(psi >= 0.0) || psi > psi_max * (1.0 + 1e-12)) {
        throw DomainError("thm3 requires 0 <= psi <= sqrt(alpha k) = " + std::to_string(psi_max));
    }
    const auto& rows = ctx.by_total();
    std::uint64_t condition = 0;
    if (k < rows.size()) {
        for (auto c : rows[k]) condition += c;
    }
    if (condition == 0) {
        throw DomainError("thm3: empty condition, no n <= x has omega(n) = " + std::to_string(k));
    }

    // |omega(n,T) - alpha k| >= psi sqrt(alpha(1-alpha)k), scaled by H(S). Written so the
    // complement T <-> S\T evaluates the same floating-point quantities.
    const double threshold = psi * std::sqrt(k * (ht * hc));
    std::uint64_t hits = 0;
    for (std::uint32_t h = 0; h <= k; ++h) {
        const double dev = std::fabs(h * hc - (k - h) * ht);
        if (dev >= threshold) hits += rows[k][h];
    }
    const double lhs = static_cast<double>(hits) / static_cast<double>(condition);
    const double loglog = std::log(std::log(static_cast<double>(ctx.x())));

    TheoremReport r;
    r.name = "thm3";
    r.set("x", as_int(ctx.x()));
    r.set("k", std::int64_t{k});
    r.set("A", a);
    r.set("psi", psi);
    r.set("alpha", alpha);
    r.set("h_t", ht);
    r.set("h_s", ht + hc);
    r.set("k_in_range", std::int64_t{k <= a * loglog ? 1 : 0});
    r.set("condition_count", as_int(condition));
    r.set("event_count", as_int(hits));
    r.set_sides(lhs, std::exp(-psi * psi / 3.0));
    return r;
}

TheoremReport check_thm3(const Thm3Config& cfg, const SieveOptions& opts) {
    return check_thm3(Thm3Context(cfg.x, cfg.t, opts), cfg.k, cfg.a, cfg.psi);
}

KRange default_k_range(double h) noexcept {
    return {0, static_cast<std::uint32_t>(std::ceil(3.0 * h)) + 10};
}

std::vector<TheoremReport> check_halasz(std::uint64_t x, const PrimeSet& t,
                                        std::optional<KRange> k_range, const SieveOptions& opts) {
    if (t.empty()) throw DomainError("halasz requires a nonempty T");
    const auto s = harmonic_sums(t);
    const KRange range = k_range.value_or(default_k_range(s.h));
    if (range.lo > range.hi) throw DomainError("halasz: empty k range");
    const auto counts = joint_factor_counts(x, {{t, CountMode::WithMultiplicity}}, opts);

    std::vector<TheoremReport> out;
    for (std::uint32_t k = range.lo; k <= range.hi; ++k) {
        const auto it = counts.counts.find(Tuple{k});
        const std::uint64_t hits = it == counts.counts.end() ? 0 : it->second;
        const double p = static_cast<double>(hits) / static_cast<double>(x);
        const double poisson_h = poisson_mass(s.h, k);
        const double poisson_h1 = poisson_mass(s.h1, k);

        TheoremReport r;
        r.name = "halasz";
        r.set("x", as_int(x));
        r.set("k", std::int64_t{k});
        r.set("h", s.h);
        r.set("h1", s.h1);
        r.set("k_over_h", k / s.h);
        r.set_sides(p, poisson_h);
        if (r.ratio) r.set("abs_dev", std::fabs(*r.ratio - 1.0));
        r.set("rhs_h1", poisson_h1);
        if (poisson_h1 > 0.0) {
            r.set("ratio_h1", p / poisson_h1);
            r.set("abs_dev_h1", std::fabs(p / poisson_h1 - 1.0));
        }
        r.set("error_shape", std::fabs(k - s.h) / s.h + 1.0 / std::sqrt(s.h));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TheoremReport> check_thm4_local(const PrimeSet& t, CountMode mode) {
    if (t.empty()) throw DomainError("thm4 requires a nonempty T");
    const auto s = harmonic_sums(t);
    const double h = poisson_parameter(s, mode);
    const Pmf model = model_exact_pmf({t, mode, kDefaultTailEps});
    const KRange range = default_k_range(h);

    std::vector<TheoremReport> out;
    for (std::uint32_t k = range.lo; k <= range.hi; ++k) {
        const double pz = poisson_mass(h, k);
        const double lhs = std::fabs(model.at(k) - pz);
        const bool central = k <= 1.9 * h;
        double rhs = 0.0;
        if (central) {
            const double rel = (k - h) / h;
            rhs = s.h2 * pz * (1.0 / (k + 1.0) + rel * rel);
        } else {
            rhs = s.h2 * std::exp(0.9 * h - k * std::log(1.9));
        }
        TheoremReport r;
        r.name = "thm4";
        r.set("k", std::int64_t{k});
        r.set("mode", std::string(to_string(mode)));
        r.set("size", static_cast<std::int64_t>(t.size()));
        r.set("h", s.h);
        r.set("h1", s.h1);
        r.set("h2", s.h2);
        r.set("regime", std::string(central ? "central" : "upper"));
        r.set("model", model.at(k));
        r.set("poisson", pz);
        r.set_sides(lhs, rhs);
        r.uncertainty = model.tail_bound;
        out.push_back(std::move(r));
    }
    return out;
}

TheoremReport check_cor32(const PrimeSet& t, CountMode mode) {
    if (t.empty()) throw DomainError("cor32 requires a nonempty T");
    const auto s = harmonic_sums(t);
    const Pmf model = model_exact_pmf({t, mode, kDefaultTailEps});
    const Pmf poisson = poisson_pmf(poisson_parameter(s, mode));
    const TvResult tv = tv_distance(model, poisson);

    TheoremReport r;
    r.name = "cor32";
    r.set("mode", std::string(to_string(mode)));
    r.set("size", static_cast<std::int64_t>(t.size()));
    r.set("p_min", as_int(t.primes().front()));
    r.set("p_max", as_int(t.max()));
    r.set("h", s.h);
    r.set("h1", s.h1);
    r.set("h2", s.h2);
    r.set_sides(tv.value, s.h2 / (1.0 + s.h));
    r.uncertainty = tv.uncertainty;
    return r;
}

}  // namespace pfpois
