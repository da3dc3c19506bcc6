#include "mforge/rational.hpp"

#include <cctype>

#include "mforge/error.hpp"

namespace mforge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Cycle: return "cycle";
    case ErrorCode::DuplicateElement: return "duplicate element";
    case ErrorCode::UnknownPoint: return "unknown point";
    case ErrorCode::RoleViolation: return "role violation";
    case ErrorCode::InvalidQuasiLens: return "invalid quasi-lens";
    case ErrorCode::NotMonotone: return "not monotone";
    case ErrorCode::CarrierMismatch: return "carrier mismatch";
    case ErrorCode::KindViolation: return "kind violation";
    case ErrorCode::NotStrict: return "not strict";
    case ErrorCode::NotModular: return "not modular";
    case ErrorCode::NegativeWeight: return "negative weight";
    case ErrorCode::MalformedConstraint: return "malformed constraint";
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::TypeMismatch: return "type mismatch";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Schema: return "schema error";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

std::string format_rational(const Rational& value) { return value.get_str(); }

Rational sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace mforge
