#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace mforge {

using Rational = mpq_class;

// Accepts "p/q", "p" and a leading minus sign. The result is canonical.
Rational parse_rational(std::string_view text);

// Canonical "p/q", or "p" for integers.
std::string format_rational(const Rational& value);

Rational sum(const std::vector<Rational>& values);

}  // namespace mforge
