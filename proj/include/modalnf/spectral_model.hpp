#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalnf/modal_series.hpp"
#include "modalnf/multi_index.hpp"
#include "modalnf/rational.hpp"

namespace modalnf {

enum class ModeClass { centre, stable, unstable };

char to_char(ModeClass c) noexcept;  // 'c', 's', 'u'

// Spectral-gap parameters: 0 <= alpha < mu_tilde < min(beta, gamma).
struct GapParameters {
    Rational alpha;
    ExtRational beta;
    ExtRational gamma;
    Rational mu_tilde;
};

struct SplitIndex {
    MultiIndex centre;
    MultiIndex stable;
    MultiIndex unstable;
};

struct GapCheck {
    bool ok = true;
    std::string detail;  // names the failing inequality; empty when ok
    // min over the finite bounds of bound - (p+1)*alpha - mu_tilde; 0 when
    // beta and gamma are both infinite.
    Rational slack;
};

// Eigenstructure of the diagonal linear part A together with the trichotomy
// parameters. Validated on construction and immutable afterwards.
class SpectralModel {
public:
    // Throws ModelInvariantViolation on bad gap ordering and
    // UnclassifiableMode when an eigenvalue sits in a forbidden band.
    SpectralModel(ModeSet modes, std::map<int, CRational> eigenvalues, GapParameters gap, int truncation);

    const ModeSet& modes() const noexcept { return modes_; }
    const std::map<int, CRational>& eigenvalues() const noexcept { return eigen_; }
    const CRational& eigenvalue(int mode) const;
    const GapParameters& gap() const noexcept { return gap_; }
    int truncation() const noexcept { return truncation_; }

    ModeClass classify_mode(int mode) const;
    SplitIndex split_multiindex(const MultiIndex& q) const;
    CRational mu_q(const MultiIndex& q) const;
    CRational mu_qj(const MultiIndex& q, int j) const;
    // Membership of j in the elimination set J^q.
    bool in_Jq(const MultiIndex& q, int j) const;
    GapCheck gap_check(int p) const;

    std::vector<int> modes_of(ModeClass c) const;

    // A as a series: sum_j alpha_j v_j e_j.
    ModalSeries linear_part(int max_degree) const;

private:
    ModeSet modes_;
    std::map<int, CRational> eigen_;
    GapParameters gap_;
    int truncation_;
    std::map<int, ModeClass> classes_;
};

struct ResonanceEntry {
    MultiIndex q;
    int target = 0;
    CRational mu;
    bool in_Jq = false;
    Rational re_margin;  // |Re mu| - mu_tilde
};

// mu^q_j, J^q membership and margin for every given q and every mode j.
std::vector<ResonanceEntry> resonance_report(const SpectralModel& model, const std::vector<MultiIndex>& indices);

}  // namespace modalnf
