#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pfpois {

/// Raised when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a request exceeds a configured size cap (x, m, oracle range).
class CapRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Neumaier-compensated accumulator. Result depends only on the order of add() calls.
class CompensatedSum {
public:
    void add(double v) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Parse a decimal integer, also accepting exact scientific notation ("1e6", "2.5e3").
/// Throws DomainError if the text is not an integer that fits in int64.
std::int64_t parse_exact_integer(std::string_view text);

/// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n) noexcept;

/// ln(k!) via lgamma.
double log_factorial(std::uint64_t k) noexcept;

}  // namespace pfpois
