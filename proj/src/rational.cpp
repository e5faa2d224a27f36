#include "lcc/rational.hpp"

#include <charconv>

#include "lcc/errors.hpp"

namespace lcc {
namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("invalid integer in fraction: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const std::int64_t num = parse_int(text.substr(0, slash));
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("fraction with zero denominator");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::int64_t floor_times(const Rational& r, std::int64_t m) {
  if (r < 0 || m < 0) throw PreconditionError("floor_times expects non-negative operands");
  return (r.numerator() * m) / r.denominator();
}

std::int64_t ceil_times(const Rational& r, std::int64_t m) {
  if (r < 0 || m < 0) throw PreconditionError("ceil_times expects non-negative operands");
  return (r.numerator() * m + r.denominator() - 1) / r.denominator();
}

}  // namespace lcc
