#pragma once

#include <complex>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "modalnf/multi_index.hpp"
#include "modalnf/time_poly.hpp"

namespace modalnf {

// Ordered set of mode labels shared by a model and every series built on it.
// Copies share storage; equality compares contents.
class ModeSet {
public:
    ModeSet() : labels_(std::make_shared<const std::vector<int>>()) {}
    explicit ModeSet(std::vector<int> labels);
    static ModeSet range(int lo, int hi);  // lo..hi inclusive

    const std::vector<int>& labels() const noexcept { return *labels_; }
    std::size_t size() const noexcept { return labels_->size(); }
    bool contains(int mode) const noexcept;
    // Position of `mode` in labels(); throws MissingMode when absent.
    std::size_t index_of(int mode) const;

    friend bool operator==(const ModeSet& a, const ModeSet& b) {
        return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
    }

private:
    std::shared_ptr<const std::vector<int>> labels_;
};

// Point in (truncated) modal coordinates: mode label -> complex value.
class StateVector {
public:
    StateVector() = default;
    StateVector(std::initializer_list<std::pair<const int, std::complex<double>>> entries)
        : entries_(entries) {}
    static StateVector zeros(const ModeSet& modes);

    const std::map<int, std::complex<double>>& entries() const noexcept { return entries_; }
    std::complex<double>& operator[](int mode) { return entries_[mode]; }
    // Throws MissingMode when the mode is absent.
    std::complex<double> at(int mode) const;
    bool has(int mode) const { return entries_.count(mode) != 0; }
    double norm() const;  // plain l2 norm of the modal coefficients

    friend bool operator==(const StateVector& a, const StateVector& b) { return a.entries_ == b.entries_; }

private:
    std::map<int, std::complex<double>> entries_;
};

struct TermKey {
    int target;
    MultiIndex q;
    friend bool operator==(const TermKey&, const TermKey&) = default;
    friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

// Finite sum  sum_{j,q} c_{j,q}(t) v^q e_j  with exact time-polynomial
// coefficients. Stored terms are nonzero, have 1 <= |q| <= max_degree, and
// only use labels from modes().
class ModalSeries {
public:
    using TermMap = std::map<TermKey, TimePoly>;

    ModalSeries() = default;
    ModalSeries(ModeSet modes, int max_degree);
    // sum_j v_j e_j, the identity map.
    static ModalSeries identity(const ModeSet& modes, int max_degree);

    const ModeSet& modes() const noexcept { return modes_; }
    int max_degree() const noexcept { return max_degree_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    // Accumulates c into the (target, q) coefficient; zero results are erased.
    // Throws InvalidTerm on a degree or label outside the series' bounds.
    void add(int target, const MultiIndex& q, const TimePoly& c);
    TimePoly coeff(int target, const MultiIndex& q) const;

    // Lowest and highest |q| present; 0 for the empty series.
    int lowest_degree() const noexcept;
    int highest_degree() const noexcept;

    // Equal term maps over equal mode sets; max_degree is a bound, not content.
    friend bool operator==(const ModalSeries& a, const ModalSeries& b) {
        return a.modes_ == b.modes_ && a.terms_ == b.terms_;
    }

private:
    ModeSet modes_;
    int max_degree_ = 1;
    TermMap terms_;
};

// v^q in double precision. Throws MissingMode if v lacks a mode of q.
std::complex<double> mono_eval(const MultiIndex& q, const StateVector& v);

// Evaluates S(t, v); the result carries an entry for every mode of S.
StateVector series_eval(const ModalSeries& s, double t, const StateVector& v);

// a*S1 + b*S2. Throws ModelMismatch when the mode sets differ.
ModalSeries series_combine(const CRational& a, const ModalSeries& s1, const CRational& b,
                           const ModalSeries& s2);

ModalSeries time_derivative(const ModalSeries& s);

// sum_m (dS/dv_m) * G_m, truncated to total degree <= max_deg.
ModalSeries directional_derivative(const ModalSeries& s, const ModalSeries& g, int max_deg);

// f(t, xi(t, v)) truncated to total degree <= max_deg. xi is the full map,
// identity part included.
ModalSeries compose(const ModalSeries& f, const ModalSeries& xi, int max_deg);

// Terms of degree exactly d.
ModalSeries homogeneous_part(const ModalSeries& s, int d);

// Terms of degree <= max_deg; the result's bound becomes max_deg.
ModalSeries truncate(const ModalSeries& s, int max_deg);

// Multiplies the target-j component by lambda_j (a diagonal linear operator).
ModalSeries apply_diagonal(const std::map<int, CRational>& lambda, const ModalSeries& s);

}  // namespace modalnf
