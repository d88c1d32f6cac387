#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "modalnf/dynamics.hpp"
#include "modalnf/engine.hpp"
#include "modalnf/modal_series.hpp"
#include "modalnf/spectral_model.hpp"

namespace modalnf {

// Canonical series fixture:
//
//   modalnf-series 1
//   modes -2 -1 0 1 2
//   max_degree 3
//   term 2 [1:2] [0:-1/18:0 1:1/6:0]
//
// One `term` line per stored coefficient: target, the multi-index as
// mode:exponent pairs, then t-power:re:im triples. Lines are sorted by
// (target, multi-index), so equal series always produce identical bytes.
std::string write_series(const ModalSeries& s);
ModalSeries parse_series(std::string_view text);  // throws ParseError

std::string time_poly_record(const TimePoly& p);           // "[0:1:0 1:1/6:0]"
TimePoly parse_time_poly_record(std::string_view text);   // inverse of the above

// Ledger of a run as JSON: strategy, then per order the eliminated and kept
// (target, q) terms with mu, J^q membership, margin and the update pair.
struct LedgerFile {
    int order = 2;
    EliminationStrategy strategy = EliminationStrategy::separating;
    std::vector<LedgerEntry> entries;
};
std::string write_ledger(const NormalFormResult& result);
LedgerFile parse_ledger(std::string_view text);

std::string read_file(const std::string& path);  // throws ParseError when unreadable
void write_file(const std::string& path, const std::string& contents);

}  // namespace modalnf
