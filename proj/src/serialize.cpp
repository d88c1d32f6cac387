#include "modalnf/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

using nlohmann::ordered_json;

std::string strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

int to_int(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + s + "'");
    }
}

// Contents of the next [...] group starting at pos.
std::string bracket(std::string_view line, std::size_t& pos, int line_no) {
    const auto open = line.find('[', pos);
    const auto close = line.find(']', open == std::string_view::npos ? pos : open);
    if (open == std::string_view::npos || close == std::string_view::npos)
        throw ParseError(line_no, "expected a [...] group");
    pos = close + 1;
    return std::string(line.substr(open + 1, close - open - 1));
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

std::vector<std::string> fields(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

MultiIndex parse_index_group(const std::string& body, int line_no) {
    std::vector<MultiIndex::Entry> entries;
    for (const auto& w : words(body)) {
        const auto f = fields(w, ':');
        if (f.size() != 2) throw ParseError(line_no, "multi-index entries read mode:exponent");
        entries.emplace_back(to_int(f[0], line_no), to_int(f[1], line_no));
    }
    try {
        return MultiIndex(std::move(entries));
    } catch (const Error& e) {
        throw ParseError(line_no, e.what());
    }
}

TimePoly parse_poly_group(const std::string& body, int line_no) {
    TimePoly p;
    for (const auto& w : words(body)) {
        const auto f = fields(w, ':');
        if (f.size() != 3) throw ParseError(line_no, "coefficient entries read power:re:im");
        const int power = to_int(f[0], line_no);
        if (power < 0) throw ParseError(line_no, "negative t-power");
        try {
            p += TimePoly::monomial(CRational(Rational::parse(f[1]), Rational::parse(f[2])), power);
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return p;
}

std::string index_record(const MultiIndex& q) {
    std::string s = "[";
    bool first = true;
    for (const auto& [m, e] : q.entries()) {
        if (!first) s += ' ';
        first = false;
        s += std::to_string(m) + ":" + std::to_string(e);
    }
    return s + "]";
}

ordered_json mu_json(const CRational& mu) { return {{"re", mu.re.str()}, {"im", mu.im.str()}}; }

ordered_json entry_json(const LedgerEntry& e) {
    ordered_json j;
    j["target"] = e.target;
    j["q"] = index_record(e.q);
    j["mu"] = mu_json(e.mu);
    j["in_Jq"] = e.in_Jq;
    j["re_margin"] = e.re_margin.str();
    j["a"] = time_poly_record(e.a);
    j["xi_hat"] = time_poly_record(e.update.xi_hat);
    j["F_hat"] = time_poly_record(e.update.F_hat);
    j["truncation_sensitive"] = e.truncation_sensitive;
    return j;
}

}  // namespace

std::string time_poly_record(const TimePoly& p) {
    std::string s = "[";
    bool first = true;
    for (int m = 0; m <= p.degree(); ++m) {
        const CRational c = p.coeff(m);
        if (c.is_zero()) continue;
        if (!first) s += ' ';
        first = false;
        s += std::to_string(m) + ":" + c.re.str() + ":" + c.im.str();
    }
    return s + "]";
}

TimePoly parse_time_poly_record(std::string_view text) {
    std::size_t pos = 0;
    return parse_poly_group(bracket(text, pos, 0), 0);
}

std::string write_series(const ModalSeries& s) {
    std::ostringstream os;
    os << "modalnf-series 1\n";
    os << "modes";
    for (int m : s.modes().labels()) os << ' ' << m;
    os << "\nmax_degree " << s.max_degree() << '\n';
    for (const auto& [key, c] : s.terms())
        os << "term " << key.target << ' ' << index_record(key.q) << ' ' << time_poly_record(c) << '\n';
    return os.str();
}

ModalSeries parse_series(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    std::optional<ModeSet> modes;
    std::optional<int> max_degree;
    std::optional<ModalSeries> out;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "modalnf-series 1") throw ParseError(line_no, "missing 'modalnf-series 1' header");
            header = true;
            continue;
        }
        const auto w = words(line);
        if (w[0] == "modes") {
            std::vector<int> labels;
            for (std::size_t i = 1; i < w.size(); ++i) labels.push_back(to_int(w[i], line_no));
            modes = ModeSet(std::move(labels));
        } else if (w[0] == "max_degree") {
            if (w.size() != 2) throw ParseError(line_no, "max_degree takes one value");
            max_degree = to_int(w[1], line_no);
        } else if (w[0] == "term") {
            if (!modes || !max_degree) throw ParseError(line_no, "'modes' and 'max_degree' must precede terms");
            if (!out) out.emplace(*modes, *max_degree);
            std::size_t pos = 4;
            const auto after = line.find('[');
            if (after == std::string::npos) throw ParseError(line_no, "term needs a multi-index");
            const int target = to_int(strip(std::string_view(line).substr(pos, after - pos)), line_no);
            pos = after;
            const MultiIndex q = parse_index_group(bracket(line, pos, line_no), line_no);
            const TimePoly c = parse_poly_group(bracket(line, pos, line_no), line_no);
            if (!strip(std::string_view(line).substr(pos)).empty()) throw ParseError(line_no, "trailing text after term");
            if (c.is_zero()) throw ParseError(line_no, "zero coefficients are not stored");
            if (!out->coeff(target, q).is_zero()) throw ParseError(line_no, "duplicate term");
            try {
                out->add(target, q, c);
            } catch (const Error& e) {
                throw ParseError(line_no, e.what());
            }
        } else {
            throw ParseError(line_no, "unknown record '" + w[0] + "'");
        }
    }
    if (!header) throw ParseError(0, "empty series file");
    if (!modes || !max_degree) throw ParseError(0, "series file lacks 'modes' or 'max_degree'");
    return out ? *out : ModalSeries(*modes, *max_degree);
}

std::string write_ledger(const NormalFormResult& result) {
    ordered_json root;
    root["format"] = "modalnf-ledger 1";
    root["strategy"] = to_string(result.strategy);
    root["order"] = result.state.order;
    ordered_json orders = ordered_json::array();
    std::map<int, std::pair<ordered_json, ordered_json>> by_order;
    for (const auto& e : result.ledger) {
        auto& slot = by_order[e.order];
        if (slot.first.is_null()) slot.first = ordered_json::array();
        if (slot.second.is_null()) slot.second = ordered_json::array();
        (e.eliminated ? slot.first : slot.second).push_back(entry_json(e));
    }
    for (auto& [p, lists] : by_order) {
        ordered_json o;
        o["order"] = p;
        o["eliminated"] = std::move(lists.first);
        o["kept"] = std::move(lists.second);
        orders.push_back(std::move(o));
    }
    root["orders"] = std::move(orders);
    return root.dump(2) + "\n";
}

LedgerFile parse_ledger(std::string_view text) {
    LedgerFile file;
    auto& out = file.entries;
    try {
        const auto root = ordered_json::parse(text);
        if (root.at("format") != "modalnf-ledger 1") throw ParseError(0, "not a modalnf ledger");
        file.order = root.at("order").get<int>();
        file.strategy = parse_strategy(root.at("strategy").get<std::string>());
        for (const auto& o : root.at("orders")) {
            const int p = o.at("order").get<int>();
            for (const char* kind : {"eliminated", "kept"}) {
                for (const auto& j : o.at(kind)) {
                    LedgerEntry e;
                    e.order = p;
                    e.eliminated = std::string(kind) == "eliminated";
                    e.target = j.at("target").get<int>();
                    std::size_t pos = 0;
                    const std::string q = j.at("q").get<std::string>();
                    e.q = parse_index_group(bracket(q, pos, 0), 0);
                    e.mu = CRational(Rational::parse(j.at("mu").at("re").get<std::string>()),
                                     Rational::parse(j.at("mu").at("im").get<std::string>()));
                    e.in_Jq = j.at("in_Jq").get<bool>();
                    e.re_margin = Rational::parse(j.at("re_margin").get<std::string>());
                    e.a = parse_time_poly_record(j.at("a").get<std::string>());
                    e.update.xi_hat = parse_time_poly_record(j.at("xi_hat").get<std::string>());
                    e.update.F_hat = parse_time_poly_record(j.at("F_hat").get<std::string>());
                    e.truncation_sensitive = j.at("truncation_sensitive").get<bool>();
                    out.push_back(std::move(e));
                }
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed ledger: ") + e.what());
    }
    return file;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(0, "cannot write '" + path + "'");
    out << contents;
}

}  // namespace modalnf
