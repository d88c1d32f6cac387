#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace modalnf {

// Sparse exponent vector over signed integer mode labels: the monomial
// v^q = prod_j v_j^{q_j}. Entries are sorted by mode and never hold a zero
// exponent. The empty index (degree 0) is the unit monomial; series terms
// require degree >= 1.
class MultiIndex {
public:
    using Entry = std::pair<int, int>;  // (mode, exponent)

    MultiIndex() = default;
    MultiIndex(std::initializer_list<Entry> entries);
    explicit MultiIndex(std::vector<Entry> entries);
    static MultiIndex unit(int mode, int exponent = 1) { return MultiIndex({{mode, exponent}}); }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    int degree() const noexcept { return degree_; }
    int exponent(int mode) const noexcept;
    std::vector<int> support() const;

    // q with the exponent of `mode` lowered by one; requires exponent(mode) > 0.
    MultiIndex without_one(int mode) const;
    // Sum of the labels weighted by exponents.
    long label_sum() const noexcept;
    std::string str() const;

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

private:
    std::vector<Entry> entries_;
    int degree_ = 0;
};

}  // namespace modalnf
