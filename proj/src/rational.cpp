#include "edgestat/rational.hpp"

namespace edgestat {

BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (long long i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i; // exact at every step: result is C(n-k+i, i)
    }
    return result;
}

bool binomial_fits(long long n, long long k, std::uint64_t cap,
                   std::uint64_t& out) {
    BigInt b = binomial(n, k);
    if (b > cap) return false;
    out = b.convert_to<std::uint64_t>();
    return true;
}

std::string rational_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace edgestat
