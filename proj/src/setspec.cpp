#include "pfpois/setspec.hpp"

#include <fstream>
#include <string>

namespace pfpois {

CountMode parse_count_mode(std::string_view text) {
    if (text == "distinct" || text == "omega") return CountMode::Distinct;
    if (text == "multiplicity" || text == "with-multiplicity" || text == "Omega") {
        return CountMode::WithMultiplicity;
    }
    throw DomainError("unknown count mode '" + std::string(text) +
                      "' (expected distinct or multiplicity)");
}

std::vector<std::int64_t> parse_integer_list(std::string_view text) {
    std::vector<std::int64_t> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_exact_integer(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

namespace {

std::uint64_t non_negative(std::int64_t v, std::string_view what) {
    if (v < 0) throw DomainError(std::string(what) + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

SetSpec parse_set_spec(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw DomainError("set spec '" + std::string(text) + "' lacks a kind prefix");
    }
    const std::string_view kind = text.substr(0, colon);
    std::string_view body = text.substr(colon + 1);
    CountMode mode = CountMode::Distinct;
    if (const auto last = body.rfind(':'); last != std::string_view::npos) {
        mode = parse_count_mode(body.substr(last + 1));
        body = body.substr(0, last);
    }

    SetSpec spec;
    spec.mode = mode;
    if (kind == "interval") {
        const auto dots = body.find("..");
        if (dots == std::string_view::npos) throw DomainError("interval spec needs a..b");
        const auto lo = non_negative(parse_exact_integer(body.substr(0, dots)), "interval bound");
        const auto hi = non_negative(parse_exact_integer(body.substr(dots + 2)), "interval bound");
        if (hi < lo) throw DomainError("interval spec needs a <= b");
        spec.set = primes_in_interval(lo == 0 ? 0 : lo - 1, hi);
    } else if (kind == "list") {
        std::vector<Prime> primes;
        for (auto v : parse_integer_list(body)) primes.push_back(non_negative(v, "prime"));
        spec.set = PrimeSet::from_unsorted(std::move(primes));
    } else if (kind == "expexp") {
        const auto k = parse_exact_integer(body);
        if (k < 0 || k > 16) throw DomainError("expexp block index out of range");
        spec.set = expexp_block(static_cast<int>(k));
    } else if (kind == "file") {
        std::ifstream in{std::string(body)};
        if (!in) throw DomainError("cannot open prime-set file '" + std::string(body) + "'");
        spec.set = read_prime_set(in);
    } else {
        throw DomainError("unknown set kind '" + std::string(kind) + "'");
    }
    spec.set.set_label(std::string(text));
    return spec;
}

}  // namespace pfpois
