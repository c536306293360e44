#include "pfpois/numeric.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace pfpois {

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

std::int64_t parse_exact_integer(std::string_view text) {
    const auto fail = [&](const char* why) -> std::int64_t {
        throw DomainError("not an exact integer '" + std::string(text) + "': " + why);
    };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot) ++frac_len;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (digits.empty()) return fail("no digits");
    long exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') return fail("unexpected character");
        ++i;
        const char* first = text.data() + i;
        const char* last = text.data() + text.size();
        if (first != last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, exponent);
        if (ec != std::errc{} || ptr != last) return fail("bad exponent");
    }
    long shift = exponent - frac_len;
    if (shift >= 0) {
        if (shift > 19) {
            // Only zero survives such a shift.
            if (digits.find_first_not_of('0') != std::string::npos) return fail("overflow");
            return 0;
        }
        digits.append(static_cast<std::size_t>(shift), '0');
    } else {
        const auto drop = static_cast<std::size_t>(-shift);
        if (drop > digits.size()) {
            if (digits.find_first_not_of('0') != std::string::npos) return fail("fractional value");
            return 0;
        }
        if (digits.find_first_not_of('0', digits.size() - drop) != std::string::npos) {
            return fail("fractional value");
        }
        digits.resize(digits.size() - drop);
        if (digits.empty()) digits = "0";
    }
    const auto nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    if (negative) digits.insert(digits.begin(), '-');
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return fail("overflow");
    return value;
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

double log_factorial(std::uint64_t k) noexcept {
    return std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace pfpois
