#include "modalnf/spectral_model.hpp"

#include <sstream>

#include "modalnf/errors.hpp"

namespace modalnf {

char to_char(ModeClass c) noexcept {
    switch (c) {
        case ModeClass::centre: return 'c';
        case ModeClass::stable: return 's';
        case ModeClass::unstable: return 'u';
    }
    return '?';
}

SpectralModel::SpectralModel(ModeSet modes, std::map<int, CRational> eigenvalues, GapParameters gap, int truncation)
    : modes_(std::move(modes)), eigen_(std::move(eigenvalues)), gap_(std::move(gap)), truncation_(truncation) {
    if (modes_.size() == 0) throw ModelInvariantViolation("model has no modes");
    if (gap_.alpha.sign() < 0) throw ModelInvariantViolation("gap requires 0 <= alpha");
    if (!(gap_.alpha < gap_.mu_tilde)) throw ModelInvariantViolation("gap requires alpha < mu_tilde (0 <= alpha < mu_tilde < min(beta, gamma))");
    if (!(gap_.mu_tilde < gap_.beta)) throw ModelInvariantViolation("gap requires mu_tilde < beta (0 <= alpha < mu_tilde < min(beta, gamma))");
    if (!(gap_.mu_tilde < gap_.gamma)) throw ModelInvariantViolation("gap requires mu_tilde < gamma (0 <= alpha < mu_tilde < min(beta, gamma))");
    for (int j : modes_.labels())
        if (!eigen_.count(j)) throw ModelInvariantViolation("no eigenvalue given for mode " + std::to_string(j));
    for (const auto& [j, a] : eigen_)
        if (!modes_.contains(j)) throw ModelInvariantViolation("eigenvalue given for unknown mode " + std::to_string(j));

    for (int j : modes_.labels()) {
        const Rational& re = eigen_.at(j).re;
        if (re.abs() <= gap_.alpha)
            classes_[j] = ModeClass::centre;
        else if (gap_.beta <= -re)
            classes_[j] = ModeClass::stable;
        else if (gap_.gamma <= re)
            classes_[j] = ModeClass::unstable;
        else
            throw UnclassifiableMode("mode " + std::to_string(j) + " has Re(alpha_j) = " + re.str() +
                                     " inside a forbidden band (-beta, -alpha) or (alpha, gamma)");
    }
}

const CRational& SpectralModel::eigenvalue(int mode) const {
    auto it = eigen_.find(mode);
    if (it == eigen_.end()) throw MissingMode("mode " + std::to_string(mode) + " not in model");
    return it->second;
}

ModeClass SpectralModel::classify_mode(int mode) const {
    auto it = classes_.find(mode);
    if (it == classes_.end()) throw MissingMode("mode " + std::to_string(mode) + " not in model");
    return it->second;
}

SplitIndex SpectralModel::split_multiindex(const MultiIndex& q) const {
    std::vector<MultiIndex::Entry> c, s, u;
    for (const auto& entry : q.entries()) {
        switch (classify_mode(entry.first)) {
            case ModeClass::centre: c.push_back(entry); break;
            case ModeClass::stable: s.push_back(entry); break;
            case ModeClass::unstable: u.push_back(entry); break;
        }
    }
    return {MultiIndex(std::move(c)), MultiIndex(std::move(s)), MultiIndex(std::move(u))};
}

CRational SpectralModel::mu_q(const MultiIndex& q) const {
    CRational mu;
    for (const auto& [m, e] : q.entries()) mu += eigenvalue(m) * CRational(e);
    return mu;
}

CRational SpectralModel::mu_qj(const MultiIndex& q, int j) const { return mu_q(q) - eigenvalue(j); }

bool SpectralModel::in_Jq(const MultiIndex& q, int j) const {
    const SplitIndex split = split_multiindex(q);
    const bool has_s = !split.stable.empty();
    const bool has_u = !split.unstable.empty();
    switch (classify_mode(j)) {
        case ModeClass::centre: return (!has_s && has_u) || (!has_u && has_s);
        case ModeClass::stable: return !has_s;
        case ModeClass::unstable: return !has_u;
    }
    return false;
}

GapCheck SpectralModel::gap_check(int p) const {
    GapCheck out;
    const Rational shift = Rational(p + 1) * gap_.alpha + gap_.mu_tilde;
    bool have_slack = false;
    auto check = [&](const ExtRational& bound, const char* name) {
        if (bound.is_infinite()) return;
        const Rational slack = bound.value() - shift;
        if (!have_slack || slack < out.slack) out.slack = slack;
        have_slack = true;
        if (slack.sign() <= 0) {
            out.ok = false;
            std::ostringstream os;
            os << name << " - (p+1)*alpha > mu_tilde fails at p = " << p << ": " << bound.str() << " - " << (p + 1)
               << "*" << gap_.alpha << " - " << gap_.mu_tilde << " = " << slack;
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += os.str();
        }
    };
    check(gap_.beta, "beta");
    check(gap_.gamma, "gamma");
    return out;
}

std::vector<int> SpectralModel::modes_of(ModeClass c) const {
    std::vector<int> out;
    for (const auto& [j, k] : classes_)
        if (k == c) out.push_back(j);
    return out;
}

ModalSeries SpectralModel::linear_part(int max_degree) const {
    ModalSeries a(modes_, max_degree);
    for (const auto& [j, lam] : eigen_) a.add(j, MultiIndex::unit(j), TimePoly(lam));
    return a;
}

std::vector<ResonanceEntry> resonance_report(const SpectralModel& model, const std::vector<MultiIndex>& indices) {
    std::vector<ResonanceEntry> out;
    for (const auto& q : indices) {
        for (int j : model.modes().labels()) {
            ResonanceEntry e;
            e.q = q;
            e.target = j;
            e.mu = model.mu_qj(q, j);
            e.in_Jq = model.in_Jq(q, j);
            e.re_margin = e.mu.re.abs() - model.gap().mu_tilde;
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace modalnf
