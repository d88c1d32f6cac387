#include <doctest.h>

#include <random>

#include "modalnf/engine.hpp"
#include "modalnf/errors.hpp"
#include "oracles/burgers.hpp"
#include "oracles/quadrature.hpp"

using namespace modalnf;

namespace {

const TimePoly T = TimePoly::t();
TimePoly c(const Rational& r) { return TimePoly(CRational(r)); }
MultiIndex mi(std::initializer_list<MultiIndex::Entry> e) { return MultiIndex(e); }

GapParameters general_r_gap() { return {Rational(1, 8), ExtRational(Rational(2)), ExtRational(Rational(1)), Rational(1, 5)}; }

}  // namespace

TEST_SUITE("engine") {
    const auto b1 = oracle::burgers(Rational(1), 5, oracle::burgers_gap());

    TEST_CASE("base residual is minus f") {
        const TransformState s = initial_state(b1.model, b1.f);
        CHECK(s.order == 2);
        CHECK(s.F.empty());
        CHECK(s.R == series_combine(-1, b1.f, 0, b1.f));
        const ModalSeries zero(b1.model.modes(), 2);
        CHECK(residual(b1.model, zero, ModalSeries::identity(b1.model.modes(), 1), zero, 4).empty());
    }

    TEST_CASE("extract_a on the Burgers base residual") {
        const auto a = extract_a(initial_state(b1.model, b1.f).R, 2);
        CHECK(a.at(mi({{1, 2}})).at(2) == T * CRational(Rational(1, 2)));
        CHECK(a.at(mi({{-1, 1}, {1, 1}})).at(0) == T * CRational(-1));
        CHECK(extract_a(ModalSeries(b1.model.modes(), 3), 3).empty());
        ModalSeries low(b1.model.modes(), 3);
        low.add(1, mi({{1, 2}}), TimePoly(1));
        CHECK_THROWS_AS(extract_a(low, 3), OrderViolation);
    }

    TEST_CASE("solve_update closed forms") {
        for (const Rational& r : {Rational(1), Rational(9, 8), Rational(5, 3)}) {
            for (int n : {1, 2, 3}) {
                const Rational n2(n * n);
                const Rational sp = r + Rational(2) * n2, sm = r - Rational(2) * n2;
                CHECK(solve_update(CRational(sp), T * CRational(n2 / Rational(2))) ==
                      (T - c(Rational(1) / sp)) * CRational(n2 / (Rational(2) * sp)));
                CHECK(solve_update(CRational(sm), T * CRational(-n2)) == (T - c(Rational(1) / sm)) * CRational(-n2 / sm));
            }
        }
        const CRational mu(Rational(3, 7), Rational(-2));
        CHECK(solve_update(mu, TimePoly(1)) == TimePoly(CRational(1) / mu));
        CHECK(solve_update(mu, TimePoly()).is_zero());
        CHECK_THROWS_AS(solve_update(CRational(0), T), ZeroDivisor);
    }

    TEST_CASE("solve_update matches the convolution integral") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> sgn(0, 1);
        std::uniform_int_distribution<int> num(1, 40), den(1, 9), coef(-9, 9), deg(0, 3);
        for (int trial = 0; trial < 20; ++trial) {
            const Rational re = (Rational(num(rng), den(rng)) + Rational(1, 4)) * Rational(sgn(rng) < 0.5 ? -1 : 1);
            const CRational mu(re, Rational(coef(rng), den(rng)));
            std::vector<CRational> a;
            for (int m = 0, d = deg(rng); m <= d; ++m) a.emplace_back(Rational(coef(rng), den(rng)), Rational(coef(rng), den(rng)));
            const TimePoly ap(a);
            const TimePoly xi = solve_update(mu, ap);
            for (double t : {-1.0, 0.0, 1.0}) {
                const auto want = oracle::convolution_integral(mu.to_complex(), ap, t);
                const auto got = xi.evaluate(t);
                CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
            }
        }
    }

    TEST_CASE("zero nonlinearity leaves the transform alone") {
        const ModalSeries zero(b1.model.modes(), 2);
        const TransformState s0 = initial_state(b1.model, zero);
        const TransformState s1 = step(b1.model, zero, s0);
        CHECK(s1.order == 3);
        CHECK(s1.xi == s0.xi);
        CHECK(s1.F.empty());
        const NormalFormResult r = run(b1.model, zero, 4);
        CHECK(r.state.xi == ModalSeries::identity(b1.model.modes(), 1));
        CHECK(r.state.F.empty());
        CHECK(r.state.R.empty());
    }

    TEST_CASE("run to order 2 is the identity") {
        const NormalFormResult r = run(b1.model, b1.f, 2);
        CHECK(r.state.xi == ModalSeries::identity(b1.model.modes(), 1));
        CHECK(r.state.F.empty());
        CHECK(r.ledger.empty());
        CHECK_THROWS_AS(run(b1.model, b1.f, 1), GapViolation);
    }

    TEST_CASE("centre part of xi_3 at r = 1") {
        for (auto strategy : {EliminationStrategy::separating, EliminationStrategy::maximal}) {
            const NormalFormResult r = run(b1.model, b1.f, 3, {strategy});
            CHECK(r.state.xi.coeff(2, mi({{1, 2}})) == T * CRational(Rational(1, 6)) - c(Rational(1, 18)));
            CHECK(r.state.xi.coeff(-2, mi({{-1, 2}})) == T * CRational(Rational(1, 6)) - c(Rational(1, 18)));
            CHECK(r.state.xi.coeff(0, mi({{-1, 1}, {1, 1}})) == T + TimePoly(1));
        }
    }

    TEST_CASE("centre part of xi_3 for r = 9/8") {
        const Rational r(9, 8);
        const auto b = oracle::burgers(r, 4, general_r_gap());
        const NormalFormResult res = run(b.model, b.f, 3);
        CHECK(res.state.xi.coeff(2, mi({{1, 2}})) == oracle::xi3_double_mode(r, 1));
        CHECK(res.state.xi.coeff(0, mi({{-1, 1}, {1, 1}})) == oracle::xi3_zero_mode(r, 1));
    }

    TEST_CASE("closed-form quadratic oracle agrees with the iteration") {
        for (auto strategy : {EliminationStrategy::separating, EliminationStrategy::maximal}) {
            const NormalFormResult r = run(b1.model, b1.f, 3, {strategy});
            CHECK(truncate(r.state.xi, 2) == direct_oracle_xi3(b1.model, b1.f, strategy));
        }
        const ModalSeries oracle_xi = direct_oracle_xi3(b1.model, b1.f);
        CHECK(oracle_xi.coeff(2, mi({{1, 2}})) == T * CRational(Rational(1, 6)) - c(Rational(1, 18)));
        CHECK(direct_oracle_xi3(b1.model, ModalSeries(b1.model.modes(), 2)) == ModalSeries::identity(b1.model.modes(), 2));

        ModalSeries cubic(b1.model.modes(), 3);
        cubic.add(1, mi({{1, 3}}), T);
        CHECK_THROWS_AS(direct_oracle_xi3(b1.model, cubic), NotQuadraticConvolution);
        ModalSeries constant(b1.model.modes(), 2);
        constant.add(2, mi({{1, 2}}), TimePoly(1));
        CHECK_THROWS_AS(direct_oracle_xi3(b1.model, constant), NotQuadraticConvolution);
    }

    TEST_CASE("kept quadratic terms produce no oracle term") {
        // r = 4: modes 0, +-1 unstable, +-2 centre, the rest stable
        const GapParameters gap{Rational(0), ExtRational(Rational(5)), ExtRational(Rational(3)), Rational(1, 20)};
        const auto b = oracle::burgers(Rational(4), 4, gap);
        const MultiIndex mixed = mi({{-1, 1}, {3, 1}});
        CHECK_FALSE(b.f.coeff(2, mixed).is_zero());
        CHECK_FALSE(b.model.in_Jq(mixed, 2));
        const ModalSeries o = direct_oracle_xi3(b.model, b.f);
        CHECK(o.coeff(2, mixed).is_zero());
        for (const auto& [key, cf] : o.terms())
            if (key.q.degree() == 2) CHECK(b.model.in_Jq(key.q, key.target));
        const NormalFormResult r = run(b.model, b.f, 3);
        CHECK(r.state.F.coeff(2, mixed) == b.f.coeff(2, mixed));
        CHECK(truncate(r.state.xi, 2) == o);
    }

    TEST_CASE("cubic normal form at r = 1, maximal elimination") {
        const NormalFormResult r = run(b1.model, b1.f, 4, {EliminationStrategy::maximal});
        for (const auto& row : oracle::printed_cubics_r1()) {
            const MultiIndex q = oracle::printed_cubic_index(row.mode);
            CHECK(r.state.F.coeff(row.mode, q) == T * CRational(row.t1) + T * T * CRational(row.t2));
        }
        CHECK(r.state.F.size() == 10);
        CHECK(verify_separation(r.state.F, b1.model));
    }

    TEST_CASE("cubic normal form at r = 1, separating elimination") {
        const NormalFormResult r = run(b1.model, b1.f, 4);
        CHECK(r.state.F.coeff(1, mi({{-1, 1}, {1, 2}})) == T * CRational(Rational(1, 9)) - T * T * CRational(Rational(1, 3)));
        CHECK(r.state.F.coeff(-1, mi({{-1, 2}, {1, 1}})) == T * CRational(Rational(1, 9)) - T * T * CRational(Rational(1, 3)));
        // The minimal strategy keeps more quadratic terms, which changes the
        // stable-mode cubics.
        CHECK(r.state.F.coeff(2, mi({{-1, 1}, {1, 1}, {2, 1}})) ==
              T * CRational(Rational(2, 9)) + T * T * CRational(Rational(2, 3)));
        CHECK(verify_separation(r.state.F, b1.model));
    }

    TEST_CASE("cubic transform matches the closed-form sum") {
        const NormalFormResult r = run(b1.model, b1.f, 4, {EliminationStrategy::maximal});
        const auto oracle_terms = oracle::xi4_cubic(Rational(1), 5, Rational(1, 20));
        const ModalSeries cubic = homogeneous_part(r.state.xi, 3);
        CHECK(cubic.size() == oracle_terms.size());
        for (const auto& [key, cf] : oracle_terms) CHECK(cubic.coeff(key.first, key.second) == cf);
    }

    TEST_CASE("residual order, update identities and margins at every step") {
        for (auto strategy : {EliminationStrategy::separating, EliminationStrategy::maximal}) {
            EngineOptions opt{strategy};
            TransformState s = initial_state(b1.model, b1.f);
            while (s.order < 5) {
                std::vector<LedgerEntry> ledger;
                const TransformState prev = s;
                s = step(b1.model, b1.f, prev, opt, &ledger);
                for (int d = 1; d < s.order; ++d) CHECK(homogeneous_part(s.R, d).empty());
                CHECK(verify_separation(s.F, b1.model));
                for (const auto& e : ledger) {
                    CHECK(e.a == -prev.R.coeff(e.target, e.q));
                    CHECK(e.update.F_hat + e.update.xi_hat.derivative() + e.update.xi_hat * e.mu == e.a);
                    CHECK((e.update.xi_hat.is_zero() || e.update.F_hat.is_zero()));
                    if (e.eliminated) CHECK(e.mu.re.abs() > b1.model.gap().mu_tilde);
                    if (e.in_Jq) CHECK(e.eliminated);
                    if (strategy == EliminationStrategy::separating) CHECK(e.eliminated == e.in_Jq);
                }
            }
        }
    }

    TEST_CASE("separation check") {
        ModalSeries bad(b1.model.modes(), 2);
        bad.add(2, mi({{1, 2}}), TimePoly(1));
        CHECK_FALSE(verify_separation(bad, b1.model));
        CHECK(verify_separation(ModalSeries(b1.model.modes(), 2), b1.model));
        ModalSeries ok(b1.model.modes(), 3);
        ok.add(1, mi({{0, 1}, {2, 1}, {1, 1}}), TimePoly(1));  // centre target, q_s and q_u both present
        ok.add(3, mi({{3, 1}, {1, 1}}), TimePoly(1));
        ok.add(0, mi({{0, 2}}), TimePoly(1));
        CHECK(verify_separation(ok, b1.model));
        ModalSeries mixed(b1.model.modes(), 2);
        mixed.add(1, mi({{0, 1}, {1, 1}}), TimePoly(1));  // centre target, only q_u
        CHECK_FALSE(verify_separation(mixed, b1.model));
    }

    TEST_CASE("F preserves each spectral subspace") {
        const NormalFormResult r = run(b1.model, b1.f, 4);
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        for (auto cls : {ModeClass::centre, ModeClass::stable, ModeClass::unstable}) {
            StateVector v = StateVector::zeros(b1.model.modes());
            for (int j : b1.model.modes_of(cls)) v[j] = {g(rng), g(rng)};
            const StateVector out = series_eval(r.state.F, 0.7, v);
            for (const auto& [j, z] : out.entries())
                if (b1.model.classify_mode(j) != cls) CHECK(z == std::complex<double>(0.0));
        }
    }

    TEST_CASE("truncation sensitivity flags boundary couplings") {
        const NormalFormResult r = run(b1.model, b1.f, 4, {EliminationStrategy::maximal});
        CHECK(r.sensitive_F.count(TermKey{5, mi({{-1, 1}, {1, 1}, {5, 1}})}) == 1);
        CHECK(r.sensitive_F.count(TermKey{-5, mi({{-5, 1}, {-1, 1}, {1, 1}})}) == 1);
        CHECK(r.sensitive_F.count(TermKey{4, mi({{-1, 1}, {1, 1}, {4, 1}})}) == 0);
        CHECK(r.sensitive_F.count(TermKey{1, mi({{-1, 1}, {1, 2}})}) == 0);
        for (const auto& e : r.ledger) CHECK(e.truncation_sensitive == truncation_sensitive(b1.model, b1.f, {e.target, e.q}));
    }

    TEST_CASE("gap failure stops the construction") {
        const GapParameters gap{Rational(1, 6), ExtRational(Rational(3)), ExtRational(Rational(1)), Rational(1, 5)};
        const auto b = oracle::burgers(Rational(1), 3, gap);
        CHECK_NOTHROW(run(b.model, b.f, 3));
        CHECK_THROWS_AS(run(b.model, b.f, 4), GapViolation);
    }

    TEST_CASE("explicit non-convolution nonlinearity") {
        // x0' = x0 + t x1^2, x1' = -x1 x0 with mode 0 unstable and 1 centre
        const ModeSet modes = ModeSet::range(0, 1);
        const SpectralModel m(modes, {{0, CRational(1)}, {1, CRational(0)}}, oracle::burgers_gap(), 1);
        ModalSeries f(modes, 2);
        f.add(0, mi({{1, 2}}), T);
        f.add(1, mi({{0, 1}, {1, 1}}), TimePoly(-1));
        const NormalFormResult r = run(m, f, 4);
        // mu for (0, {1:2}) is -1: xi' - xi = t gives xi = -t - 1
        CHECK(r.state.xi.coeff(0, mi({{1, 2}})) == -T - TimePoly(1));
        CHECK(r.state.xi.coeff(1, mi({{0, 1}, {1, 1}})) == TimePoly(-1));
        for (int d = 1; d < 4; ++d) CHECK(homogeneous_part(r.residual_full, d).empty());
        CHECK(verify_separation(r.state.F, m));
    }
}
