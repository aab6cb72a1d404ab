#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace ogw {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error kinds map to distinct CLI exit codes.
enum class ErrorKind {
    config,
    parse,
    missing_initial,
    digest,
    internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Parses "p", "-p" or "p/q". Whitespace is not accepted.
Rational parse_rational(const std::string& s);

// Canonical form: lowest terms, positive denominator, "p" when integral,
// "p/q" otherwise. Used everywhere a rational is serialized.
std::string rational_str(const Rational& r);

Rational binomial(long long n, long long k);

} // namespace ogw
