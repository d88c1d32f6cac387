#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace modalnf {

// Exact arbitrary-precision rational, always in lowest terms with a positive
// denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(int value) : v_(value) {}   // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    // Accepts "n", "-n", "n/d" with optional surrounding whitespace.
    static Rational parse(std::string_view text);

    const mpq_class& raw() const noexcept { return v_; }
    std::string numerator() const { return v_.get_num().get_str(); }
    std::string denominator() const { return v_.get_den().get_str(); }
    std::string str() const;
    double to_double() const { return v_.get_d(); }

    int sign() const noexcept { return sgn(v_); }
    bool is_zero() const noexcept { return sign() == 0; }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_;
};

// Exact complex rational re + i*im.
struct CRational {
    Rational re;
    Rational im;

    CRational() = default;
    CRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    CRational(int r) : re(r) {}                  // NOLINT(google-explicit-constructor)
    CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
    bool is_real() const noexcept { return im.is_zero(); }
    CRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str() const;

    CRational operator-() const { return {-re, -im}; }
    CRational& operator+=(const CRational& o) { re += o.re; im += o.im; return *this; }
    CRational& operator-=(const CRational& o) { re -= o.re; im -= o.im; return *this; }
    CRational& operator*=(const CRational& o);
    CRational& operator/=(const CRational& o);

    friend CRational operator+(CRational a, const CRational& b) { return a += b; }
    friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
    friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
    friend CRational operator/(CRational a, const CRational& b) { return a /= b; }
    friend bool operator==(const CRational& a, const CRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend std::ostream& operator<<(std::ostream& os, const CRational& c) { return os << c.str(); }
};

// A rational bound that may be +infinity (used for the stable/unstable gap
// parameters beta and gamma).
class ExtRational {
public:
    ExtRational() : infinite_(true) {}
    ExtRational(Rational v) : value_(std::move(v)), infinite_(false) {}  // NOLINT
    ExtRational(int v) : value_(v), infinite_(false) {}                  // NOLINT
    static ExtRational infinity() { return ExtRational(); }
    // Accepts a rational literal or "inf"/"infinity".
    static ExtRational parse(std::string_view text);

    bool is_infinite() const noexcept { return infinite_; }
    const Rational& value() const;  // throws std::logic_error when infinite
    std::string str() const { return infinite_ ? "inf" : value_.str(); }
    double to_double() const;

    // Comparisons treat +infinity as larger than every rational.
    friend bool operator<(const Rational& a, const ExtRational& b) { return b.infinite_ || a < b.value_; }
    friend bool operator<(const ExtRational& a, const Rational& b) { return !a.infinite_ && a.value_ < b; }
    friend bool operator<=(const Rational& a, const ExtRational& b) { return b.infinite_ || a <= b.value_; }
    friend bool operator<=(const ExtRational& a, const Rational& b) { return !a.infinite_ && a.value_ <= b; }
    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

private:
    Rational value_;
    bool infinite_;
};

}  // namespace modalnf
