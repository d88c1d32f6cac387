#include "modalnf/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "modalnf/dynamics.hpp"
#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

CheckResult pass(std::string name, std::string detail = {}, double margin = 0.0) {
    return {std::move(name), CheckStatus::pass, std::move(detail), margin};
}
CheckResult fail(std::string name, std::string detail, double margin = 0.0) {
    return {std::move(name), CheckStatus::fail, std::move(detail), margin};
}
CheckResult skip(std::string name, std::string detail) {
    return {std::move(name), CheckStatus::skipped, std::move(detail), 0.0};
}

std::string where(int target, const MultiIndex& q) {
    return "(target " + std::to_string(target) + ", q " + q.str() + ")";
}

// First (target, q) where two series differ.
std::string first_difference(const ModalSeries& a, const ModalSeries& b) {
    std::set<TermKey> keys;
    for (const auto& [k, c] : a.terms()) keys.insert(k);
    for (const auto& [k, c] : b.terms()) keys.insert(k);
    for (const auto& k : keys) {
        const TimePoly x = a.coeff(k.target, k.q), y = b.coeff(k.target, k.q);
        if (!(x == y)) return where(k.target, k.q) + ": " + x.str() + " vs " + y.str();
    }
    return "mode sets differ";
}

CheckResult check_separation(const SpectralModel& model, const FixtureSet& fx) {
    if (verify_separation(fx.F, model)) return pass("separation", std::to_string(fx.F.size()) + " F terms");
    for (const auto& [key, c] : fx.F.terms()) {
        ModalSeries one(fx.F.modes(), std::max(1, key.q.degree()));
        one.add(key.target, key.q, c);
        if (!verify_separation(one, model))
            return fail("separation", "F term " + where(key.target, key.q) + " couples subspaces");
    }
    return fail("separation", "F does not separate");
}

CheckResult check_residual_identity(const SpectralModel& model, const ModalSeries& f, const FixtureSet& fx) {
    const ModalSeries R = residual(model, f, fx.xi, fx.F, fx.order);
    if (R == fx.R) return pass("residual-identity", std::to_string(R.size()) + " residual terms");
    return fail("residual-identity", "stored R differs from dxi/dt + Dxi.(A+F) - A xi - f(xi) at " +
                                         first_difference(fx.R, R));
}

CheckResult check_residual_order(const FixtureSet& fx) {
    const int low = fx.R.lowest_degree();
    if (low == 0 || low >= fx.order)
        return pass("residual-order", "lowest degree " + std::to_string(low), static_cast<double>(low - fx.order));
    return fail("residual-order", "R has a degree-" + std::to_string(low) + " term at order " +
                                      std::to_string(fx.order));
}

CheckResult check_update_identities(const FixtureSet& fx) {
    for (const auto& e : fx.ledger) {
        const TimePoly lhs = e.update.F_hat + e.update.xi_hat.derivative() + e.update.xi_hat * e.mu;
        if (!(lhs == e.a))
            return fail("update-identity", "F_hat + xi_hat' + mu xi_hat != a at " + where(e.target, e.q));
    }
    return pass("update-identity", std::to_string(fx.ledger.size()) + " pairs");
}

CheckResult check_margins(const SpectralModel& model, const FixtureSet& fx) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& e : fx.ledger) {
        if (!(e.mu == model.mu_qj(e.q, e.target)))
            return fail("elimination-margin", "mu recorded for " + where(e.target, e.q) + " is not mu^q_j");
        if (e.in_Jq != model.in_Jq(e.q, e.target))
            return fail("elimination-margin", "J^q membership recorded for " + where(e.target, e.q) + " is wrong");
        if (!(e.re_margin == e.mu.re.abs() - model.gap().mu_tilde))
            return fail("elimination-margin", "margin recorded for " + where(e.target, e.q) + " is wrong");
        if (e.in_Jq && !e.eliminated)
            return fail("elimination-margin", where(e.target, e.q) + " is in J^q but was kept");
        if (!e.eliminated) continue;
        if (e.re_margin.sign() <= 0)
            return fail("elimination-margin", where(e.target, e.q) + " eliminated with |Re mu| <= mu_tilde",
                        e.re_margin.to_double());
        worst = std::min(worst, e.re_margin.to_double());
    }
    if (!std::isfinite(worst)) worst = 0.0;
    return pass("elimination-margin", "min |Re mu| - mu_tilde over eliminated terms", worst);
}

CheckResult check_ledger_consistency(const FixtureSet& fx) {
    std::set<TermKey> covered;
    for (const auto& e : fx.ledger) {
        const TermKey key{e.target, e.q};
        covered.insert(key);
        if (!(fx.xi.coeff(e.target, e.q) == e.update.xi_hat))
            return fail("ledger-consistency", "xi coefficient at " + where(e.target, e.q) + " disagrees with the ledger");
        if (!(fx.F.coeff(e.target, e.q) == e.update.F_hat))
            return fail("ledger-consistency", "F coefficient at " + where(e.target, e.q) + " disagrees with the ledger");
    }
    for (const auto& [key, c] : fx.xi.terms()) {
        if (key.q.degree() == 1) {
            if (!(key.q == MultiIndex::unit(key.target)) || !(c == TimePoly(1)))
                return fail("ledger-consistency", "xi linear part is not the identity at " + where(key.target, key.q));
        } else if (!covered.count(key)) {
            return fail("ledger-consistency", "xi term " + where(key.target, key.q) + " has no ledger entry");
        }
    }
    for (const auto& [key, c] : fx.F.terms())
        if (!covered.count(key))
            return fail("ledger-consistency", "F term " + where(key.target, key.q) + " has no ledger entry");
    return pass("ledger-consistency");
}

CheckResult check_scaling(const FixtureSet& fx, unsigned long long seed) {
    if (fx.R.empty()) return skip("residual-scaling", "residual is identically zero");
    const auto grid = log_grid(1e-3, 1e-1, 9);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& d : random_directions(fx.R.modes(), 5, seed)) {
        for (double t : {0.0, 1.0}) worst = std::min(worst, residual_scaling(fx.R, d, t, grid));
    }
    const double need = fx.order - 0.1;
    std::ostringstream os;
    os << "min slope " << worst << ", need >= " << need;
    return worst >= need ? pass("residual-scaling", os.str(), worst - need)
                         : fail("residual-scaling", os.str(), worst - need);
}

CheckResult check_oracle(const SpectralModel& model, const ModalSeries& f, const FixtureSet& fx) {
    if (fx.order < 3) return skip("quadratic-oracle", "order below 3");
    ModalSeries oracle;
    try {
        oracle = direct_oracle_xi3(model, f, fx.strategy);
    } catch (const NotQuadraticConvolution& e) {
        return skip("quadratic-oracle", e.what());
    }
    const ModalSeries got = truncate(fx.xi, 2);
    if (got == oracle) return pass("quadratic-oracle", std::to_string(oracle.size()) + " terms");
    return fail("quadratic-oracle", "degree-2 xi disagrees with the closed form at " + first_difference(got, oracle));
}

CheckResult check_recompute(const SpectralModel& model, const ModalSeries& f, const FixtureSet& fx) {
    const NormalFormResult fresh = run(model, f, fx.order, {fx.strategy});
    if (!(fresh.state.xi == fx.xi)) return fail("recompute", "xi differs at " + first_difference(fx.xi, fresh.state.xi));
    if (!(fresh.state.F == fx.F)) return fail("recompute", "F differs at " + first_difference(fx.F, fresh.state.F));
    if (!(fresh.state.R == fx.R)) return fail("recompute", "R differs at " + first_difference(fx.R, fresh.state.R));
    return pass("recompute");
}

}  // namespace

const char* to_string(CheckStatus s) noexcept {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

FixtureSet fixtures_from(const NormalFormResult& result) {
    return {result.state.order, result.strategy, result.state.xi, result.state.F, result.state.R, result.ledger};
}

std::vector<StateVector> random_directions(const ModeSet& modes, int n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<StateVector> out;
    for (int i = 0; i < n; ++i) {
        StateVector v;
        for (int m : modes.labels()) v[m] = {g(rng), g(rng)};
        const double nv = v.norm();
        for (int m : modes.labels()) v[m] /= nv;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<CheckResult> verify_fixtures(const SpectralModel& model, const ModalSeries& f, const FixtureSet& fx,
                                         unsigned long long seed) {
    std::vector<CheckResult> out;
    if (!(fx.xi.modes() == model.modes()) || !(fx.F.modes() == model.modes()) || !(fx.R.modes() == model.modes())) {
        out.push_back(fail("fixture-modes", "fixture mode sets differ from the problem's modes"));
        return out;
    }
    out.push_back(check_separation(model, fx));
    out.push_back(check_residual_identity(model, f, fx));
    out.push_back(check_residual_order(fx));
    out.push_back(check_update_identities(fx));
    out.push_back(check_margins(model, fx));
    out.push_back(check_ledger_consistency(fx));
    out.push_back(check_scaling(fx, seed));
    out.push_back(check_oracle(model, f, fx));
    out.push_back(check_recompute(model, f, fx));
    return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

}  // namespace modalnf
