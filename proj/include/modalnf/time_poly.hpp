#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include "modalnf/rational.hpp"

namespace modalnf {

// Univariate polynomial in t with exact complex-rational coefficients.
// coeffs()[m] is the coefficient of t^m; trailing zeros are always stripped,
// so the zero polynomial has no coefficients.
class TimePoly {
public:
    TimePoly() = default;
    TimePoly(CRational constant);  // NOLINT(google-explicit-constructor)
    TimePoly(int constant) : TimePoly(CRational(constant)) {}  // NOLINT
    TimePoly(std::initializer_list<CRational> coeffs);
    explicit TimePoly(std::vector<CRational> coeffs);

    static TimePoly monomial(CRational c, int power);  // c * t^power
    static TimePoly t() { return monomial(CRational(1), 1); }

    const std::vector<CRational>& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    CRational coeff(int power) const;

    std::complex<double> evaluate(double t) const;
    TimePoly derivative() const;
    std::string str() const;

    TimePoly operator-() const;
    TimePoly& operator+=(const TimePoly& o);
    TimePoly& operator-=(const TimePoly& o);
    TimePoly& operator*=(const CRational& c);
    friend TimePoly operator+(TimePoly a, const TimePoly& b) { return a += b; }
    friend TimePoly operator-(TimePoly a, const TimePoly& b) { return a -= b; }
    friend TimePoly operator*(TimePoly a, const CRational& c) { return a *= c; }
    friend TimePoly operator*(const CRational& c, TimePoly a) { return a *= c; }
    friend TimePoly operator*(const TimePoly& a, const TimePoly& b);
    friend bool operator==(const TimePoly& a, const TimePoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void strip();
    std::vector<CRational> coeffs_;
};

}  // namespace modalnf
