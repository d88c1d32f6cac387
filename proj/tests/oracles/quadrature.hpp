#pragma once

// Integral form of the polynomial update: for Re mu > 0
//   xi(t) = int_{-inf}^t e^{-mu (t - s)} a(s) ds = int_0^inf e^{-mu u} a(t - u) du
// and for Re mu < 0
//   xi(t) = -int_t^inf e^{-mu (t - s)} a(s) ds = -int_0^inf e^{mu u} a(t + u) du.
// Evaluated by tanh-sinh style quadrature on [0, inf).

#include <complex>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "modalnf/time_poly.hpp"

namespace oracle {

inline std::complex<double> convolution_integral(std::complex<double> mu, const modalnf::TimePoly& a, double t) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double sign = mu.real() > 0 ? 1.0 : -1.0;
    auto part = [&](bool imag) {
        auto integrand = [&](double u) {
            const std::complex<double> w = sign > 0 ? std::exp(-mu * u) : std::exp(mu * u);
            if (std::abs(w) == 0.0) return 0.0;
            const std::complex<double> v = w * a.evaluate(sign > 0 ? t - u : t + u);
            return imag ? v.imag() : v.real();
        };
        return integrator.integrate(integrand, 1e-13);
    };
    return sign * std::complex<double>(part(false), part(true));
}

}  // namespace oracle
