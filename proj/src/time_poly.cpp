#include "modalnf/time_poly.hpp"

#include <sstream>

namespace modalnf {

TimePoly::TimePoly(CRational constant) : coeffs_{std::move(constant)} { strip(); }

TimePoly::TimePoly(std::initializer_list<CRational> coeffs) : coeffs_(coeffs) { strip(); }

TimePoly::TimePoly(std::vector<CRational> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

TimePoly TimePoly::monomial(CRational c, int power) {
    std::vector<CRational> v(static_cast<std::size_t>(power) + 1);
    v.back() = std::move(c);
    return TimePoly(std::move(v));
}

void TimePoly::strip() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

CRational TimePoly::coeff(int power) const {
    if (power < 0 || power > degree()) return {};
    return coeffs_[static_cast<std::size_t>(power)];
}

std::complex<double> TimePoly::evaluate(double t) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->to_complex();
    return acc;
}

TimePoly TimePoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<CRational> d(coeffs_.size() - 1);
    for (std::size_t m = 1; m < coeffs_.size(); ++m)
        d[m - 1] = coeffs_[m] * CRational(Rational(static_cast<long>(m)));
    return TimePoly(std::move(d));
}

std::string TimePoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
        if (coeffs_[m].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        const bool paren = !coeffs_[m].is_real() && !coeffs_[m].re.is_zero();
        os << (paren ? "(" : "") << coeffs_[m] << (paren ? ")" : "");
        if (m == 1) os << "*t";
        if (m > 1) os << "*t^" << m;
    }
    return os.str();
}

TimePoly TimePoly::operator-() const {
    TimePoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

TimePoly& TimePoly::operator+=(const TimePoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t m = 0; m < o.coeffs_.size(); ++m) coeffs_[m] += o.coeffs_[m];
    strip();
    return *this;
}

TimePoly& TimePoly::operator-=(const TimePoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t m = 0; m < o.coeffs_.size(); ++m) coeffs_[m] -= o.coeffs_[m];
    strip();
    return *this;
}

TimePoly& TimePoly::operator*=(const CRational& c) {
    if (c.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    for (auto& x : coeffs_) x *= c;
    return *this;
}

TimePoly operator*(const TimePoly& a, const TimePoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<CRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[i + k] += a.coeffs_[i] * b.coeffs_[k];
    }
    return TimePoly(std::move(out));
}

}  // namespace modalnf
