#include "ogw/rational.hpp"

namespace ogw {

Rational parse_rational(const std::string& s) {
    if (s.empty())
        throw Error(ErrorKind::parse, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0)
            throw Error(ErrorKind::parse, "zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "bad rational literal '" + s + "'");
    }
}

std::string rational_str(const Rational& r) {
    // cpp_rational keeps gcd(p,q)=1 and q>0 as an invariant.
    std::string num = numerator(r).str();
    Int den = denominator(r);
    if (den == 1)
        return num;
    return num + "/" + den.str();
}

Rational binomial(long long n, long long k) {
    if (k < 0 || k > n)
        return Rational(0);
    Int num = 1;
    for (long long i = 0; i < k; ++i)
        num *= Int(n - i);
    Int den = 1;
    for (long long i = 1; i <= k; ++i)
        den *= Int(i);
    return Rational(num, den);
}

} // namespace ogw
