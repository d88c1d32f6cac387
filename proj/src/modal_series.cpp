#include "modalnf/modal_series.hpp"

#include <algorithm>
#include <cmath>

#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

// One target component of a series: q -> coefficient.
using Component = std::map<MultiIndex, TimePoly>;

void accumulate(Component& into, const MultiIndex& q, const TimePoly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = into.try_emplace(q, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) into.erase(it);
    }
}

// Product of two components, dropping every term above max_deg.
Component multiply_truncated(const Component& a, const Component& b, int max_deg) {
    Component out;
    for (const auto& [qa, ca] : a) {
        for (const auto& [qb, cb] : b) {
            if (qa.degree() + qb.degree() > max_deg) continue;
            accumulate(out, qa + qb, ca * cb);
        }
    }
    return out;
}

// xi_m^e truncated to max_deg, memoized. std::map never invalidates
// references on insert, so returned references stay valid.
struct PowerCache {
    const std::map<int, Component>& components;
    int max_deg;
    std::map<std::pair<int, int>, Component> cache;

    const Component& get(int m, int e) {
        auto it = cache.find({m, e});
        if (it != cache.end()) return it->second;
        Component p;
        if (e == 1) {
            auto cit = components.find(m);
            if (cit != components.end())
                for (const auto& [q, c] : cit->second)
                    if (q.degree() <= max_deg) p.emplace(q, c);
        } else {
            p = multiply_truncated(get(m, e - 1), get(m, 1), max_deg);
        }
        return cache.emplace(std::make_pair(m, e), std::move(p)).first->second;
    }
};

std::map<int, Component> split_components(const ModalSeries& s) {
    std::map<int, Component> out;
    for (const auto& [key, c] : s.terms()) out[key.target].emplace(key.q, c);
    return out;
}

void require_same_modes(const ModalSeries& a, const ModalSeries& b, const char* op) {
    if (!(a.modes() == b.modes()))
        throw ModelMismatch(std::string(op) + ": series are defined over different mode sets");
}

}  // namespace

ModeSet::ModeSet(std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    labels_ = std::make_shared<const std::vector<int>>(std::move(labels));
}

ModeSet ModeSet::range(int lo, int hi) {
    std::vector<int> v;
    for (int j = lo; j <= hi; ++j) v.push_back(j);
    return ModeSet(std::move(v));
}

bool ModeSet::contains(int mode) const noexcept {
    return std::binary_search(labels_->begin(), labels_->end(), mode);
}

std::size_t ModeSet::index_of(int mode) const {
    auto it = std::lower_bound(labels_->begin(), labels_->end(), mode);
    if (it == labels_->end() || *it != mode) throw MissingMode("mode " + std::to_string(mode) + " not in mode set");
    return static_cast<std::size_t>(it - labels_->begin());
}

StateVector StateVector::zeros(const ModeSet& modes) {
    StateVector v;
    for (int j : modes.labels()) v.entries_[j] = 0.0;
    return v;
}

std::complex<double> StateVector::at(int mode) const {
    auto it = entries_.find(mode);
    if (it == entries_.end()) throw MissingMode("state vector has no entry for mode " + std::to_string(mode));
    return it->second;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& [j, x] : entries_) s += std::norm(x);
    return std::sqrt(s);
}

ModalSeries::ModalSeries(ModeSet modes, int max_degree) : modes_(std::move(modes)), max_degree_(max_degree) {
    if (max_degree < 1) throw InvalidTerm("series max_degree must be >= 1");
}

ModalSeries ModalSeries::identity(const ModeSet& modes, int max_degree) {
    ModalSeries s(modes, max_degree);
    for (int j : modes.labels()) s.add(j, MultiIndex::unit(j), TimePoly(1));
    return s;
}

void ModalSeries::add(int target, const MultiIndex& q, const TimePoly& c) {
    if (q.degree() < 1 || q.degree() > max_degree_)
        throw InvalidTerm("term degree " + std::to_string(q.degree()) + " outside 1.." + std::to_string(max_degree_));
    if (!modes_.contains(target)) throw InvalidTerm("target mode " + std::to_string(target) + " not in mode set");
    for (const auto& [m, e] : q.entries())
        if (!modes_.contains(m)) throw InvalidTerm("multi-index mode " + std::to_string(m) + " not in mode set");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(TermKey{target, q}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

TimePoly ModalSeries::coeff(int target, const MultiIndex& q) const {
    auto it = terms_.find(TermKey{target, q});
    return it == terms_.end() ? TimePoly{} : it->second;
}

int ModalSeries::lowest_degree() const noexcept {
    int d = 0;
    for (const auto& [key, c] : terms_)
        if (d == 0 || key.q.degree() < d) d = key.q.degree();
    return d;
}

int ModalSeries::highest_degree() const noexcept {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.q.degree());
    return d;
}

std::complex<double> mono_eval(const MultiIndex& q, const StateVector& v) {
    std::complex<double> r{1.0, 0.0};
    for (const auto& [m, e] : q.entries()) {
        const std::complex<double> x = v.at(m);
        for (int k = 0; k < e; ++k) r *= x;
    }
    return r;
}

StateVector series_eval(const ModalSeries& s, double t, const StateVector& v) {
    StateVector out = StateVector::zeros(s.modes());
    for (const auto& [key, c] : s.terms()) out[key.target] += c.evaluate(t) * mono_eval(key.q, v);
    return out;
}

ModalSeries series_combine(const CRational& a, const ModalSeries& s1, const CRational& b, const ModalSeries& s2) {
    require_same_modes(s1, s2, "series_combine");
    ModalSeries out(s1.modes(), std::max(s1.max_degree(), s2.max_degree()));
    if (!a.is_zero())
        for (const auto& [key, c] : s1.terms()) out.add(key.target, key.q, c * a);
    if (!b.is_zero())
        for (const auto& [key, c] : s2.terms()) out.add(key.target, key.q, c * b);
    return out;
}

ModalSeries time_derivative(const ModalSeries& s) {
    ModalSeries out(s.modes(), s.max_degree());
    for (const auto& [key, c] : s.terms()) out.add(key.target, key.q, c.derivative());
    return out;
}

ModalSeries directional_derivative(const ModalSeries& s, const ModalSeries& g, int max_deg) {
    require_same_modes(s, g, "directional_derivative");
    const auto g_comp = split_components(g);
    ModalSeries out(s.modes(), max_deg);
    for (const auto& [key, c] : s.terms()) {
        for (const auto& [m, e] : key.q.entries()) {
            auto git = g_comp.find(m);
            if (git == g_comp.end()) continue;
            const MultiIndex rest = key.q.without_one(m);
            const TimePoly scaled = c * CRational(e);
            for (const auto& [qg, cg] : git->second) {
                if (rest.degree() + qg.degree() > max_deg) continue;
                out.add(key.target, rest + qg, scaled * cg);
            }
        }
    }
    return out;
}

ModalSeries compose(const ModalSeries& f, const ModalSeries& xi, int max_deg) {
    require_same_modes(f, xi, "compose");
    const auto xi_comp = split_components(xi);
    PowerCache powers{xi_comp, max_deg, {}};

    ModalSeries out(f.modes(), max_deg);
    for (const auto& [key, c] : f.terms()) {
        if (key.q.degree() > max_deg) continue;  // every xi_m has degree >= 1
        Component prod{{MultiIndex{}, c}};
        for (const auto& [m, e] : key.q.entries()) {
            prod = multiply_truncated(prod, powers.get(m, e), max_deg);
            if (prod.empty()) break;
        }
        for (const auto& [q, pc] : prod) out.add(key.target, q, pc);
    }
    return out;
}

ModalSeries homogeneous_part(const ModalSeries& s, int d) {
    ModalSeries out(s.modes(), std::max(1, std::max(d, s.max_degree())));
    for (const auto& [key, c] : s.terms())
        if (key.q.degree() == d) out.add(key.target, key.q, c);
    return out;
}

ModalSeries truncate(const ModalSeries& s, int max_deg) {
    ModalSeries out(s.modes(), max_deg);
    for (const auto& [key, c] : s.terms())
        if (key.q.degree() <= max_deg) out.add(key.target, key.q, c);
    return out;
}

ModalSeries apply_diagonal(const std::map<int, CRational>& lambda, const ModalSeries& s) {
    ModalSeries out(s.modes(), s.max_degree());
    for (const auto& [key, c] : s.terms()) {
        auto it = lambda.find(key.target);
        if (it == lambda.end()) throw MissingMode("no diagonal entry for mode " + std::to_string(key.target));
        out.add(key.target, key.q, c * it->second);
    }
    return out;
}

}  // namespace modalnf
