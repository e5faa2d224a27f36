#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace lcc {

using Rational = boost::rational<std::int64_t>;

/// "p/q" or "p". Throws ParseError.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

double to_double(const Rational& r);

/// floor(r * m) and ceil(r * m) in exact integer arithmetic; r >= 0, m >= 0.
std::int64_t floor_times(const Rational& r, std::int64_t m);
std::int64_t ceil_times(const Rational& r, std::int64_t m);

}  // namespace lcc
