#pragma once

#include <string>
#include <vector>

#include "modalnf/engine.hpp"
#include "modalnf/modal_series.hpp"
#include "modalnf/spectral_model.hpp"

namespace modalnf {

enum class CheckStatus { pass, fail, skipped };
const char* to_string(CheckStatus s) noexcept;

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
    double margin = 0.0;  // check-specific; positive means room to spare
};

struct FixtureSet {
    int order = 2;
    EliminationStrategy strategy = EliminationStrategy::separating;
    ModalSeries xi;
    ModalSeries F;
    ModalSeries R;
    std::vector<LedgerEntry> ledger;
};

FixtureSet fixtures_from(const NormalFormResult& result);

// Invariant suite over a stored transform: separation, residual identity and
// order, update identities, elimination margins, ledger consistency,
// numeric residual scaling, the closed-form quadratic oracle and a fresh
// recomputation. Never throws for a failed identity; failures are reported.
std::vector<CheckResult> verify_fixtures(const SpectralModel& model, const ModalSeries& f, const FixtureSet& fx,
                                         unsigned long long seed = 1);

bool all_passed(const std::vector<CheckResult>& checks);

// n unit-norm complex directions over the given modes.
std::vector<StateVector> random_directions(const ModeSet& modes, int n, unsigned long long seed);

}  // namespace modalnf
