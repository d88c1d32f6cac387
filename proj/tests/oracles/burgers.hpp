#pragma once

// Hand-derived closed forms for the modified Burgers family
//   x_j' = (r - j^2) x_j + (t/2) sum_k k (j - k) x_{j-k} x_k
// written independently of the engine's iteration.

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "modalnf/modal_series.hpp"
#include "modalnf/problem.hpp"
#include "modalnf/rational.hpp"
#include "modalnf/spectral_model.hpp"
#include "modalnf/time_poly.hpp"

namespace oracle {

using modalnf::CRational;
using modalnf::ExtRational;
using modalnf::GapParameters;
using modalnf::ModeSet;
using modalnf::MultiIndex;
using modalnf::Rational;
using modalnf::TimePoly;

inline Rational burgers_alpha(const Rational& r, int j) { return r - Rational(j * j); }
inline Rational burgers_b(int j, int k) { return Rational(k * (j - k)); }

struct BurgersSetup {
    modalnf::SpectralModel model;
    modalnf::ModalSeries f;
};

inline BurgersSetup burgers(const Rational& r, int N, GapParameters gap) {
    const ModeSet modes = ModeSet::range(-N, N);
    std::map<int, CRational> eig;
    for (int j = -N; j <= N; ++j) eig[j] = CRational(burgers_alpha(r, j));
    modalnf::SpectralModel model(modes, eig, gap, N);
    const auto b = modalnf::parse_polynomial("k*(j - k)", {"j", "k"});
    const auto half_t = TimePoly::monomial(CRational(Rational(1, 2)), 1);
    return {model, modalnf::generate_quadratic_convolution(b, half_t, modes)};
}

// Centre-restricted quadratic transform at v = X_n e_n + X_{-n} e_{-n}:
//   x_{+-2n}: n^2/(2(r+2n^2)) (t - 1/(r+2n^2)) X_{+-n}^2
//   x_0:     -n^2/(r-2n^2)   (t - 1/(r-2n^2))  X_n X_{-n}
inline TimePoly xi3_double_mode(const Rational& r, int n) {
    const Rational n2(n * n);
    const Rational s = r + Rational(2) * n2;
    return TimePoly{CRational(-(n2 / (Rational(2) * s)) / s), CRational(n2 / (Rational(2) * s))};
}

inline TimePoly xi3_zero_mode(const Rational& r, int n) {
    const Rational n2(n * n);
    const Rational s = r - Rational(2) * n2;
    return TimePoly{CRational((n2 / s) / s), CRational(-(n2 / s))};
}

// Cubic part of the order-4 transform, summed over every (k, l) whose two
// divisors both exceed mu_tilde in modulus:
//   c_jkl = 1/2 d_lk d_jkl t^2 - (d_lk d_jkl^2 + 1/2 d_lk^2 d_jkl) t
//           + (d_lk d_jkl^3 + 1/2 d_lk^2 d_jkl^2)
// on the monomial X_{j-l} X_{l-k} X_k with weight b_jl b_lk.
inline std::map<std::pair<int, MultiIndex>, TimePoly> xi4_cubic(const Rational& r, int N, const Rational& mu_tilde) {
    auto in = [N](int m) { return m >= -N && m <= N; };
    auto a = [&](int j) { return burgers_alpha(r, j); };
    std::map<std::pair<int, MultiIndex>, TimePoly> out;
    const Rational half(1, 2);
    for (int j = -N; j <= N; ++j) {
        for (int l = -N; l <= N; ++l) {
            for (int k = -N; k <= N; ++k) {
                if (!in(j - l) || !in(l - k)) continue;
                const Rational den2 = -a(l) + a(k) + a(l - k);
                const Rational den3 = -a(j) + a(k) + a(l - k) + a(j - l);
                if (den2.is_zero() || den3.is_zero()) continue;
                if (den2.abs() <= mu_tilde || den3.abs() <= mu_tilde) continue;
                const Rational d2 = Rational(1) / den2, d3 = Rational(1) / den3;
                const Rational c2 = half * d2 * d3;
                const Rational c1 = -(d2 * d3 * d3 + half * d2 * d2 * d3);
                const Rational c0 = d2 * d3 * d3 * d3 + half * d2 * d2 * d3 * d3;
                const Rational w = burgers_b(j, l) * burgers_b(l, k);
                const MultiIndex q = MultiIndex({{j - l, 1}}) + MultiIndex({{l - k, 1}}) + MultiIndex({{k, 1}});
                out[{j, q}] += TimePoly{CRational(w * c0), CRational(w * c1), CRational(w * c2)};
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// Cubic normal-form coefficients printed for r = 1: mode m (m = +-1..+-4) on
// the monomial X_{-s} X_s X_m (s = sign m; for |m| = 1 this is X_{-1} X_1^2
// or X_{-1}^2 X_1), as (coefficient of t, coefficient of t^2).
struct PrintedCubic {
    int mode;
    Rational t1;
    Rational t2;
};

inline std::vector<PrintedCubic> printed_cubics_r1() {
    std::vector<PrintedCubic> v;
    const std::vector<std::tuple<int, Rational, Rational>> rows = {
        {1, Rational(1, 9), Rational(-1, 3)},
        {2, Rational(104, 225), Rational(-8, 15)},
        {3, Rational(594, 1225), Rational(-18, 35)},
        {4, Rational(1952, 3969), Rational(-32, 63)},
    };
    for (const auto& [m, a, b] : rows) {
        v.push_back({m, a, b});
        v.push_back({-m, a, b});
    }
    return v;
}

inline MultiIndex printed_cubic_index(int mode) {
    return MultiIndex({{-1, 1}}) + MultiIndex({{1, 1}}) + MultiIndex({{mode, 1}});
}

inline GapParameters burgers_gap() { return {Rational(0), ExtRational(3), ExtRational(1), Rational(1, 20)}; }

}  // namespace oracle
