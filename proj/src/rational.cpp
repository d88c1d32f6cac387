#include "modalnf/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

}  // namespace

Rational::Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw ZeroDivisor("rational with zero denominator");
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const std::string_view s = trim(text);
    const auto slash = s.find('/');
    const std::string_view num = trim(s.substr(0, slash));
    const std::string_view den = slash == std::string_view::npos ? "1" : trim(s.substr(slash + 1));
    if (!is_integer_literal(num) || !is_integer_literal(den))
        throw ParseError(0, "not an exact rational literal: '" + std::string(text) + "'");
    mpz_class d = parse_integer(den);
    if (d == 0) throw ParseError(0, "zero denominator in '" + std::string(text) + "'");
    mpq_class q(parse_integer(num), d);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const { return v_.get_str(); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw ZeroDivisor("division by zero rational");
    v_ /= o.v_;
    return *this;
}

std::string CRational::str() const {
    if (im.is_zero()) return re.str();
    if (re.is_zero()) return im.str() + "i";
    return re.str() + (im.sign() > 0 ? "+" : "") + im.str() + "i";
}

CRational& CRational::operator*=(const CRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

CRational& CRational::operator/=(const CRational& o) {
    if (o.is_zero()) throw ZeroDivisor("division by zero complex rational");
    const Rational n = o.norm2();
    *this *= o.conj();
    re /= n;
    im /= n;
    return *this;
}

ExtRational ExtRational::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s == "inf" || s == "infinity" || s == "+inf") return infinity();
    return ExtRational(Rational::parse(s));
}

const Rational& ExtRational::value() const {
    if (infinite_) throw std::logic_error("ExtRational::value() on infinity");
    return value_;
}

double ExtRational::to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

}  // namespace modalnf
