#include "modalnf/multi_index.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "modalnf/errors.hpp"

namespace modalnf {

MultiIndex::MultiIndex(std::initializer_list<Entry> entries)
    : MultiIndex(std::vector<Entry>(entries)) {}

MultiIndex::MultiIndex(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    for (const auto& [mode, e] : entries) {
        if (e < 0) throw InvalidTerm("negative exponent on mode " + std::to_string(mode));
        if (e == 0) continue;
        if (!entries_.empty() && entries_.back().first == mode)
            entries_.back().second += e;
        else
            entries_.emplace_back(mode, e);
        degree_ += e;
    }
}

int MultiIndex::exponent(int mode) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{mode, 0});
    return (it != entries_.end() && it->first == mode) ? it->second : 0;
}

std::vector<int> MultiIndex::support() const {
    std::vector<int> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
}

MultiIndex MultiIndex::without_one(int mode) const {
    MultiIndex r = *this;
    auto it = std::lower_bound(r.entries_.begin(), r.entries_.end(), Entry{mode, 0});
    if (it == r.entries_.end() || it->first != mode)
        throw std::logic_error("MultiIndex::without_one: mode not in support");
    if (--it->second == 0) r.entries_.erase(it);
    --r.degree_;
    return r;
}

long MultiIndex::label_sum() const noexcept {
    long s = 0;
    for (const auto& [mode, e] : entries_) s += static_cast<long>(mode) * e;
    return s;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < entries_.size(); ++i)
        os << (i ? ", " : "") << entries_[i].first << ':' << entries_[i].second;
    os << '}';
    return os.str();
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r;
    r.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto i = a.entries_.begin();
    auto k = b.entries_.begin();
    while (i != a.entries_.end() || k != b.entries_.end()) {
        if (k == b.entries_.end() || (i != a.entries_.end() && i->first < k->first)) {
            r.entries_.push_back(*i++);
        } else if (i == a.entries_.end() || k->first < i->first) {
            r.entries_.push_back(*k++);
        } else {
            r.entries_.emplace_back(i->first, i->second + k->second);
            ++i;
            ++k;
        }
    }
    r.degree_ = a.degree_ + b.degree_;
    return r;
}

}  // namespace modalnf
