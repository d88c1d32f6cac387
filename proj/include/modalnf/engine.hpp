#pragma once

#include <map>
#include <set>
#include <vector>

#include "modalnf/modal_series.hpp"
#include "modalnf/spectral_model.hpp"

namespace modalnf {

// Which (q, j) terms of the order-p residual are moved into the coordinate
// transform rather than kept in the normal form.
enum class EliminationStrategy {
    // Eliminate exactly the j in J^q: the minimal choice that makes F separate
    // the centre, stable and unstable subspaces.
    separating,
    // Eliminate every term whose divisor satisfies |Re mu^q_j| > mu_tilde.
    // A superset of J^q under the gap conditions, so F still separates.
    maximal,
};

const char* to_string(EliminationStrategy s) noexcept;
EliminationStrategy parse_strategy(const std::string& name);  // throws ParseError

// Order-p state of the construction: x = xi(t, X), X' = AX + F(t, X) solve
// x' = Ax + f(t, x) + R(t, X) with R vanishing to order p.
struct TransformState {
    int order = 2;
    ModalSeries xi;  // full transform, identity part included
    ModalSeries F;
    ModalSeries R;   // residual truncated to degree <= order
};

// Solution of  F_hat + xi_hat' + mu * xi_hat = a  for one (q, j).
struct UpdatePair {
    TimePoly xi_hat;
    TimePoly F_hat;
};

struct LedgerEntry {
    int order = 0;  // |q|
    int target = 0;
    MultiIndex q;
    TimePoly a;     // minus the residual coefficient
    CRational mu;   // mu^q_j
    bool in_Jq = false;
    bool eliminated = false;
    Rational re_margin;  // |Re mu| - mu_tilde
    UpdatePair update;
    bool truncation_sensitive = false;
};

struct EngineOptions {
    EliminationStrategy strategy = EliminationStrategy::separating;
};

struct NormalFormResult {
    TransformState state;
    ModalSeries residual_full;  // R with every degree the construction produces
    std::vector<LedgerEntry> ledger;
    EliminationStrategy strategy = EliminationStrategy::separating;
    std::set<TermKey> sensitive_xi;  // coefficients that depend on the mode truncation
    std::set<TermKey> sensitive_F;

    std::vector<ResonanceEntry> resonance() const;
};

// R = d/dt xi + D xi . (A + F) - A xi - f(xi), truncated to keep_deg.
ModalSeries residual(const SpectralModel& model, const ModalSeries& f, const ModalSeries& xi, const ModalSeries& F,
                     int keep_deg);

// Largest degree residual() can produce for these operands.
int full_residual_degree(const ModalSeries& f, const ModalSeries& xi, const ModalSeries& F);

// a^q_j = -(coefficient of v^q e_j in R) for |q| = p.
// Throws OrderViolation if R has a term of degree < p.
std::map<MultiIndex, std::map<int, TimePoly>> extract_a(const ModalSeries& R, int p);

// Unique polynomial xi with xi' + mu xi = a. Throws ZeroDivisor if mu == 0.
TimePoly solve_update(const CRational& mu, const TimePoly& a);

// Base state: order 2, xi = id, F = 0.
TransformState initial_state(const SpectralModel& model, const ModalSeries& f);

// One order of the construction. Appends the processed terms to `ledger`
// when it is non-null.
TransformState step(const SpectralModel& model, const ModalSeries& f, const TransformState& state,
                    const EngineOptions& options = {}, std::vector<LedgerEntry>* ledger = nullptr);

NormalFormResult run(const SpectralModel& model, const ModalSeries& f, int p_target, const EngineOptions& options = {});

// Checks that every F term is allowed for its target's class.
bool verify_separation(const ModalSeries& F, const SpectralModel& model);

// True when the (target, q) coefficient can change if modes outside the
// truncation were added to the system.
bool truncation_sensitive(const SpectralModel& model, const ModalSeries& f, const TermKey& key);

// Closed-form degree-2 transform for a quadratic nonlinearity whose
// coefficients are c*t: xi = id + sum c (d t - d^2) v^q e_j with
// d = 1/(mu^q - alpha_j), over the terms the strategy eliminates.
// Throws NotQuadraticConvolution for any other f.
ModalSeries direct_oracle_xi3(const SpectralModel& model, const ModalSeries& f,
                              EliminationStrategy strategy = EliminationStrategy::separating);

}  // namespace modalnf
