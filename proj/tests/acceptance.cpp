// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "modalnf/dynamics.hpp"
#include "modalnf/engine.hpp"
#include "oracles/burgers.hpp"
#include "oracles/quadrature.hpp"

using namespace modalnf;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_s > 0 && secs > budget_s) {
        o.ok = false;
        o.detail += "; over time budget";
    }
    if (!o.ok) ++failures;
    std::printf("criterion %2d %s  %s (%s; %.3f s)\n", id, o.ok ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

const TimePoly T = TimePoly::t();
TimePoly c(const Rational& x) { return TimePoly(CRational(x)); }
TimePoly lin(const Rational& a, const Rational& b) { return T * CRational(a) + T * T * CRational(b); }

StateVector spread(const SpectralModel& m, ModeClass cls, double norm) {
    StateVector x = StateVector::zeros(m.modes());
    const auto js = m.modes_of(cls);
    for (int j : js) x[j] = norm / std::sqrt(static_cast<double>(js.size()));
    return x;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

int main() {
    const auto b5 = oracle::burgers(Rational(1), 5, oracle::burgers_gap());

    criterion(1, "xi_3 centre coefficients at r = 1", 1.0, [&] {
        const auto b = oracle::burgers(Rational(1), 3, oracle::burgers_gap());
        const NormalFormResult r = run(b.model, b.f, 3);
        const TimePoly x2 = r.state.xi.coeff(2, MultiIndex({{1, 2}}));
        const TimePoly x0 = r.state.xi.coeff(0, MultiIndex({{-1, 1}, {1, 1}}));
        const bool ok = x2 == (T - c(Rational(1, 3))) * CRational(Rational(1, 6)) && x0 == T + TimePoly(1);
        return Outcome{ok, "X1^2 e2: " + x2.str() + ", X1 X-1 e0: " + x0.str()};
    });

    criterion(2, "xi_3 centre coefficients at r = 9/8", 1.0, [&] {
        const Rational r(9, 8);
        const auto b = oracle::burgers(r, 4, {Rational(1, 8), ExtRational(Rational(2)), ExtRational(Rational(1)), Rational(1, 5)});
        const NormalFormResult res = run(b.model, b.f, 3);
        const TimePoly x2 = res.state.xi.coeff(2, MultiIndex({{1, 2}}));
        const TimePoly x0 = res.state.xi.coeff(0, MultiIndex({{-1, 1}, {1, 1}}));
        const bool ok = x2 == oracle::xi3_double_mode(r, 1) && x0 == oracle::xi3_zero_mode(r, 1);
        return Outcome{ok, "X1^2 e2: " + x2.str() + ", X1 X-1 e0: " + x0.str()};
    });

    criterion(3, "cubic normal form at r = 1, N = 5", 30.0, [&] {
        const NormalFormResult r = run(b5.model, b5.f, 4, {EliminationStrategy::maximal});
        const std::pair<int, TimePoly> want[] = {
            {2, lin(Rational(104, 225), Rational(-8, 15))},
            {3, lin(Rational(594, 1225), Rational(-18, 35))},
            {4, lin(Rational(1952, 3969), Rational(-32, 63))},
        };
        int matched = 0, checked = 0;
        for (int s : {1, -1}) {
            ++checked;
            if (r.state.F.coeff(s, MultiIndex({{-s, 1}, {s, 2}})) == lin(Rational(1, 9), Rational(-1, 3))) ++matched;
            for (const auto& [m, poly] : want) {
                ++checked;
                if (r.state.F.coeff(s * m, MultiIndex({{-1, 1}, {1, 1}, {s * m, 1}})) == poly) ++matched;
            }
        }
        return Outcome{matched == checked, std::to_string(matched) + "/" + std::to_string(checked) + " coefficients exact"};
    });

    criterion(4, "symbolic residual order after steps to p = 3, 4", 0.0, [&] {
        TransformState s = initial_state(b5.model, b5.f);
        std::string detail;
        bool ok = true;
        while (s.order < 4) {
            s = step(b5.model, b5.f, s, {EliminationStrategy::maximal});
            const int low = s.R.lowest_degree();
            ok = ok && (low == 0 || low >= s.order);
            detail += (detail.empty() ? "" : ", ") + std::string("p=") + std::to_string(s.order) +
                      " lowest degree " + std::to_string(low);
        }
        return Outcome{ok, detail};
    });

    criterion(5, "numeric residual order, 5 directions", 5.0, [&] {
        const NormalFormResult r = run(b5.model, b5.f, 4, {EliminationStrategy::maximal});
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        const auto grid = log_grid(1e-3, 1e-1, 9);
        double worst = INFINITY;
        for (int k = 0; k < 5; ++k) {
            StateVector d = StateVector::zeros(b5.model.modes());
            for (int j : b5.model.modes().labels()) d[j] = {g(rng), g(rng)};
            const double n = d.norm();
            for (int j : b5.model.modes().labels()) d[j] /= n;
            for (double t : {0.0, 1.0}) worst = std::min(worst, residual_scaling(r.state.R, d, t, grid));
        }
        return Outcome{worst >= 3.9, "min slope " + num(worst) + ", need >= 3.9"};
    });

    criterion(6, "conjugacy defect and dt^2 convergence", 0.0, [&] {
        const auto b = oracle::burgers(Rational(1), 3, oracle::burgers_gap());
        const NormalFormResult r = run(b.model, b.f, 3);
        StateVector x0;
        for (int j = -3; j <= 3; ++j) x0[j] = 1e-2 / std::sqrt(7.0);
        const double d1 = check_conjugacy(b.model, b.f, r, x0, 0, 1, 1e-3).max_defect;
        const double d2 = check_conjugacy(b.model, b.f, r, x0, 0, 1, 5e-4).max_defect;
        const double ratio = d1 / d2;
        const bool ok = d1 <= 1e-6 && std::abs(ratio - 4.0) <= 0.8;
        return Outcome{ok, "defect " + num(d1) + " at dt 1e-3, ratio " + num(ratio)};
    });

    criterion(7, "update identities and divisor margins at p = 4", 0.0, [&] {
        std::size_t pairs = 0, bad = 0;
        for (auto strategy : {EliminationStrategy::maximal, EliminationStrategy::separating}) {
            const NormalFormResult r = run(b5.model, b5.f, 4, {strategy});
            for (const auto& e : r.ledger) {
                ++pairs;
                const TimePoly lhs = e.update.F_hat + e.update.xi_hat.derivative() + e.update.xi_hat * e.mu;
                if (!(lhs == e.a)) ++bad;
                if (e.eliminated && !(Rational(1, 20) < e.mu.re.abs())) ++bad;
            }
        }
        return Outcome{bad == 0 && pairs > 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " violations"};
    });

    criterion(8, "separation and centre invariance", 0.0, [&] {
        const NormalFormResult r = run(b5.model, b5.f, 4, {EliminationStrategy::maximal});
        const bool sep = verify_separation(r.state.F, b5.model);
        const Trajectory tr = integrate(b5.model, r.state.F, spread(b5.model, ModeClass::centre, 1e-3), 0, 1, 1e-3);
        double off = 0;
        for (const auto& s : tr.samples)
            for (const auto& [j, z] : s.state.entries())
                if (b5.model.classify_mode(j) != ModeClass::centre) off = std::max(off, std::abs(z));
        return Outcome{sep && off <= 1e-13, std::string("separation ") + (sep ? "true" : "false") +
                                                ", max off-centre " + num(off)};
    });

    criterion(9, "stable and unstable decay bounds", 5.0, [&] {
        const NormalFormResult r = run(b5.model, b5.f, 4, {EliminationStrategy::maximal});
        const DecayReport s = decay_check(r, b5.model, spread(b5.model, ModeClass::stable, 1e-3), 2.0, 1e-3);
        const DecayReport u = decay_check(r, b5.model, spread(b5.model, ModeClass::unstable, 1e-3), -2.0, 1e-3);
        double worst = 0;
        for (const auto* rep : {&s, &u})
            for (const auto& bc : rep->bounds)
                if (bc.name == "stable-forward" || bc.name == "unstable-backward") worst = std::max(worst, bc.worst_ratio);
        const bool ok = worst <= 1 + 1e-6 && s.all_hold() && u.all_hold();
        return Outcome{ok, "worst lhs/rhs " + num(worst)};
    });

    criterion(10, "solve_update against quadrature", 0.0, [&] {
        std::mt19937_64 rng(10);
        std::uniform_int_distribution<int> n(1, 40), d(1, 9), cf(-9, 9), deg(0, 3), sign(0, 1);
        double worst = 0;
        for (int k = 0; k < 20; ++k) {
            const Rational re = (Rational(n(rng), d(rng)) + Rational(1, 4)) * Rational(sign(rng) ? 1 : -1);
            const CRational mu(re, Rational(cf(rng), d(rng)));
            std::vector<CRational> a;
            for (int m = 0, top = deg(rng); m <= top; ++m) a.emplace_back(Rational(cf(rng), d(rng)), Rational(cf(rng), d(rng)));
            const TimePoly ap(a);
            const TimePoly xi = solve_update(mu, ap);
            for (double t : {-1.0, 0.0, 1.0}) {
                const auto want = oracle::convolution_integral(mu.to_complex(), ap, t);
                worst = std::max(worst, std::abs(xi.evaluate(t) - want) / std::max(1.0, std::abs(want)));
            }
        }
        return Outcome{worst <= 1e-8, "worst relative error " + num(worst)};
    });

    criterion(11, "tilde operator consistency", 0.0, [&] {
        const NormalFormResult r = run(b5.model, b5.f, 4, {EliminationStrategy::maximal});
        const ModeSet& modes = b5.model.modes();
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> ut(-2, 2);
        double worst = 0;
        for (int k = 0; k < 50; ++k) {
            StateVector v;
            Eigen::VectorXcd dense(modes.size());
            for (std::size_t i = 0; i < modes.size(); ++i) {
                const std::complex<double> z(g(rng), g(rng));
                v[modes.labels()[i]] = z;
                dense[static_cast<Eigen::Index>(i)] = z;
            }
            const double t = ut(rng);
            const Eigen::VectorXcd lhs = tilde_matrix(r.state.F, modes, t, v) * dense;
            const StateVector rhs = series_eval(r.state.F, t, v);
            double diff = 0, size = 0;
            for (std::size_t i = 0; i < modes.size(); ++i) {
                diff += std::norm(lhs[static_cast<Eigen::Index>(i)] - rhs.at(modes.labels()[i]));
                size += std::norm(rhs.at(modes.labels()[i]));
            }
            worst = std::max(worst, std::sqrt(diff / size));
        }
        const bool zero = tilde_matrix(r.state.F, modes, 0.7, StateVector::zeros(modes)).isZero(0.0);
        return Outcome{worst <= 1e-10 && zero,
                       "worst relative error " + num(worst) + ", zero at origin " + (zero ? "yes" : "no")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
