#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace edgestat {

// Exact arithmetic used for all probability bookkeeping. Counts and
// denominators stay in BigInt/Rational until a value crosses the reporting
// boundary, where to_double() is used.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// C(n, k); 0 when k < 0 or k > n.
BigInt binomial(long long n, long long k);

// Like binomial() but returns false instead of a value above `cap`.
// Used for enumeration budget checks before committing to a sweep.
bool binomial_fits(long long n, long long k, std::uint64_t cap,
                   std::uint64_t& out);

// Lowest-terms "num/den" form, e.g. "9/10". Integers render as "n/1".
std::string rational_string(const Rational& r);

double to_double(const Rational& r);

} // namespace edgestat
