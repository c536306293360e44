#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pfpois/factorstats.hpp"

namespace pfpois {

/// "distinct" or "multiplicity" (aliases: omega, Omega, with-multiplicity).
CountMode parse_count_mode(std::string_view text);

/// Set-spec mini-language:
///   interval:a..b[:mode]     primes p with a <= p <= b
///   list:p1,p2,...[:mode]    explicit primes
///   expexp:k[:mode]          primes in (t_k, t_{k+1}], t_k = floor(exp(exp(k)))
///   file:path[:mode]         newline-delimited primes
/// Mode defaults to distinct. Integers accept exact scientific notation. Throws DomainError.
SetSpec parse_set_spec(std::string_view text);

/// Comma-separated exact integers ("1,2,1e1").
std::vector<std::int64_t> parse_integer_list(std::string_view text);

}  // namespace pfpois
