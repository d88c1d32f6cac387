#include "modalnf/engine.hpp"

#include <algorithm>
#include <cstdlib>

#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

bool is_eliminated(const SpectralModel& model, EliminationStrategy strategy, const MultiIndex& q, int j,
                   const CRational& mu) {
    if (strategy == EliminationStrategy::separating) return model.in_Jq(q, j);
    return model.gap().mu_tilde < mu.re.abs();
}

bool is_conservative(const ModalSeries& f) {
    return std::all_of(f.terms().begin(), f.terms().end(),
                       [](const auto& kv) { return kv.first.q.label_sum() == kv.first.target; });
}

// Sums of every nonempty sub-multiset of q.
std::vector<long> partial_sums(const MultiIndex& q) {
    std::vector<std::pair<long, int>> acc{{0, 0}};  // (sum, size)
    for (const auto& [m, e] : q.entries()) {
        std::vector<std::pair<long, int>> next;
        for (const auto& [s, n] : acc)
            for (int k = 0; k <= e; ++k) next.emplace_back(s + static_cast<long>(k) * m, n + k);
        acc = std::move(next);
    }
    std::vector<long> sums;
    for (const auto& [s, n] : acc)
        if (n > 0) sums.push_back(s);
    return sums;
}

void require_gap(const SpectralModel& model, int p) {
    const GapCheck g = model.gap_check(p);
    if (!g.ok) throw GapViolation(g.detail);
}

}  // namespace

const char* to_string(EliminationStrategy s) noexcept {
    return s == EliminationStrategy::maximal ? "maximal" : "separating";
}

EliminationStrategy parse_strategy(const std::string& name) {
    if (name == "separating") return EliminationStrategy::separating;
    if (name == "maximal") return EliminationStrategy::maximal;
    throw ParseError(0, "unknown elimination strategy '" + name + "' (expected separating|maximal)");
}

std::vector<ResonanceEntry> NormalFormResult::resonance() const {
    std::vector<ResonanceEntry> out;
    out.reserve(ledger.size());
    for (const auto& e : ledger) out.push_back({e.q, e.target, e.mu, e.in_Jq, e.re_margin});
    return out;
}

ModalSeries residual(const SpectralModel& model, const ModalSeries& f, const ModalSeries& xi, const ModalSeries& F,
                     int keep_deg) {
    if (!(f.modes() == model.modes()) || !(xi.modes() == model.modes()) || !(F.modes() == model.modes()))
        throw ModelMismatch("residual: operands are not defined over the model's modes");
    const ModalSeries field = series_combine(1, model.linear_part(std::max(1, F.max_degree())), 1, F);
    ModalSeries r = truncate(time_derivative(xi), keep_deg);
    r = series_combine(1, r, 1, directional_derivative(xi, field, keep_deg));
    r = series_combine(1, r, -1, truncate(apply_diagonal(model.eigenvalues(), xi), keep_deg));
    r = series_combine(1, r, -1, compose(f, xi, keep_deg));
    return truncate(r, keep_deg);
}

int full_residual_degree(const ModalSeries& f, const ModalSeries& xi, const ModalSeries& F) {
    const int dxi = std::max(1, xi.highest_degree());
    const int df = f.highest_degree();
    const int dF = std::max(1, F.highest_degree());
    return std::max({dxi, df * dxi, dxi - 1 + dF, 1});
}

std::map<MultiIndex, std::map<int, TimePoly>> extract_a(const ModalSeries& R, int p) {
    std::map<MultiIndex, std::map<int, TimePoly>> a;
    for (const auto& [key, c] : R.terms()) {
        if (key.q.degree() < p)
            throw OrderViolation("residual has a degree-" + std::to_string(key.q.degree()) + " term at mode " +
                                 std::to_string(key.target) + ", q = " + key.q.str() + " below order " +
                                 std::to_string(p));
        if (key.q.degree() == p) a[key.q][key.target] = -c;
    }
    return a;
}

TimePoly solve_update(const CRational& mu, const TimePoly& a) {
    if (mu.is_zero()) throw ZeroDivisor("solve_update with mu = 0");
    if (a.is_zero()) return {};
    // xi_m = (a_m - (m+1) xi_{m+1}) / mu, from the leading coefficient down
    const auto& ac = a.coeffs();
    std::vector<CRational> x(ac.size());
    for (std::size_t m = ac.size(); m-- > 0;) {
        CRational rhs = ac[m];
        if (m + 1 < ac.size()) rhs -= x[m + 1] * CRational(Rational(static_cast<long>(m + 1)));
        x[m] = rhs / mu;
    }
    return TimePoly(std::move(x));
}

TransformState initial_state(const SpectralModel& model, const ModalSeries& f) {
    TransformState s;
    s.order = 2;
    s.xi = ModalSeries::identity(model.modes(), 1);
    s.F = ModalSeries(model.modes(), 1);
    s.R = residual(model, f, s.xi, s.F, 2);
    return s;
}

TransformState step(const SpectralModel& model, const ModalSeries& f, const TransformState& state,
                    const EngineOptions& options, std::vector<LedgerEntry>* ledger) {
    const int p = state.order;
    require_gap(model, p + 1);

    ModalSeries xi_hat(model.modes(), p);
    ModalSeries F_hat(model.modes(), p);
    for (const auto& [q, by_target] : extract_a(state.R, p)) {
        for (const auto& [j, a] : by_target) {
            LedgerEntry e;
            e.order = p;
            e.target = j;
            e.q = q;
            e.a = a;
            e.mu = model.mu_qj(q, j);
            e.in_Jq = model.in_Jq(q, j);
            e.re_margin = e.mu.re.abs() - model.gap().mu_tilde;
            e.eliminated = is_eliminated(model, options.strategy, q, j, e.mu);

            if (e.in_Jq && e.re_margin.sign() <= 0)
                throw SmallDivisor("term q = " + q.str() + ", j = " + std::to_string(j) + " has |Re mu| = " +
                                   e.mu.re.abs().str() + " <= mu_tilde = " + model.gap().mu_tilde.str());
            if (e.eliminated) {
                e.update.xi_hat = solve_update(e.mu, a);
            } else {
                e.update.F_hat = a;
            }
            const TimePoly check = e.update.F_hat + e.update.xi_hat.derivative() + e.update.xi_hat * e.mu - a;
            if (!check.is_zero())
                throw UpdateIdentityViolation("F_hat + xi_hat' + mu xi_hat != a for q = " + q.str() +
                                              ", j = " + std::to_string(j));

            xi_hat.add(j, q, e.update.xi_hat);
            F_hat.add(j, q, e.update.F_hat);
            if (ledger) {
                e.truncation_sensitive = truncation_sensitive(model, f, TermKey{j, q});
                ledger->push_back(std::move(e));
            }
        }
    }

    TransformState next;
    next.order = p + 1;
    next.xi = series_combine(1, state.xi, 1, xi_hat);
    next.F = series_combine(1, state.F, 1, F_hat);
    next.R = residual(model, f, next.xi, next.F, p + 1);
    if (next.R.lowest_degree() != 0 && next.R.lowest_degree() <= p)
        throw ResidualOrderViolation("recomputed residual keeps a degree-" + std::to_string(next.R.lowest_degree()) +
                                     " term after the order-" + std::to_string(p) + " step");
    return next;
}

NormalFormResult run(const SpectralModel& model, const ModalSeries& f, int p_target, const EngineOptions& options) {
    if (p_target < 2) throw GapViolation("target order must be >= 2");
    require_gap(model, p_target);
    NormalFormResult result;
    result.strategy = options.strategy;
    result.state = initial_state(model, f);
    while (result.state.order < p_target) result.state = step(model, f, result.state, options, &result.ledger);

    const auto& st = result.state;
    result.residual_full = residual(model, f, st.xi, st.F, full_residual_degree(f, st.xi, st.F));
    for (const auto& [key, c] : st.xi.terms())
        if (key.q.degree() > 1 && truncation_sensitive(model, f, key)) result.sensitive_xi.insert(key);
    for (const auto& [key, c] : st.F.terms())
        if (truncation_sensitive(model, f, key)) result.sensitive_F.insert(key);
    return result;
}

bool verify_separation(const ModalSeries& F, const SpectralModel& model) {
    for (const auto& [key, c] : F.terms()) {
        const SplitIndex split = model.split_multiindex(key.q);
        const bool has_s = !split.stable.empty();
        const bool has_u = !split.unstable.empty();
        bool allowed = false;
        switch (model.classify_mode(key.target)) {
            case ModeClass::centre: allowed = (!has_s && !has_u) || (has_s && has_u); break;
            case ModeClass::stable: allowed = has_s; break;
            case ModeClass::unstable: allowed = has_u; break;
        }
        if (!allowed) return false;
    }
    return true;
}

bool truncation_sensitive(const SpectralModel& model, const ModalSeries& f, const TermKey& key) {
    const ModeSet& modes = model.modes();
    if (is_conservative(f)) {
        // Interaction chains of a label-conserving nonlinearity only pass
        // through partial sums of the leaves.
        for (long s : partial_sums(key.q))
            if (!modes.contains(static_cast<int>(s))) return true;
        return false;
    }
    long reach = 1;
    for (const auto& [k, c] : f.terms()) reach = std::max(reach, std::labs(k.target - k.q.label_sum()));
    const long edge = static_cast<long>(model.truncation()) - reach;
    if (std::labs(key.target) > edge) return true;
    for (const auto& [m, e] : key.q.entries())
        if (std::labs(m) > edge) return true;
    return false;
}

ModalSeries direct_oracle_xi3(const SpectralModel& model, const ModalSeries& f, EliminationStrategy strategy) {
    if (!(f.modes() == model.modes())) throw ModelMismatch("direct_oracle_xi3: f is not over the model's modes");
    ModalSeries xi = ModalSeries::identity(model.modes(), 2);
    for (const auto& [key, c] : f.terms()) {
        if (key.q.degree() != 2) throw NotQuadraticConvolution("term " + key.q.str() + " is not quadratic");
        if (c.degree() != 1 || !c.coeff(0).is_zero())
            throw NotQuadraticConvolution("coefficient " + c.str() + " is not proportional to t");
        if (key.q.label_sum() != key.target)
            throw NotQuadraticConvolution("term " + key.q.str() + " -> mode " + std::to_string(key.target) +
                                          " does not conserve labels");
        // mu^q_j = -alpha_j + sum of the factor eigenvalues
        CRational mu = -model.eigenvalue(key.target);
        for (const auto& [m, e] : key.q.entries()) mu += model.eigenvalue(m) * CRational(e);
        if (mu.is_zero() || !is_eliminated(model, strategy, key.q, key.target, mu)) continue;
        const CRational d = CRational(1) / mu;
        const CRational& b = c.coeff(1);
        xi.add(key.target, key.q, TimePoly{-(b * d * d), b * d});
    }
    return xi;
}

}  // namespace modalnf
