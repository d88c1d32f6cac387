#include "modalnf/problem.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "modalnf/errors.hpp"

namespace modalnf {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

Polynomial Polynomial::constant(std::vector<std::string> vars, CRational c) {
    Polynomial p(std::move(vars));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
}

Polynomial Polynomial::variable(std::vector<std::string> vars, std::size_t which) {
    Polynomial p(std::move(vars));
    Exponents e(p.vars_.size(), 0);
    e.at(which) = 1;
    p.add_term(e, CRational(1));
    return p;
}

void Polynomial::add_term(const Exponents& e, const CRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

CRational Polynomial::evaluate(const std::vector<Rational>& at) const {
    CRational acc;
    for (const auto& [e, c] : terms_) {
        Rational mono(1);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) mono *= at.at(i);
        acc += c * CRational(mono);
    }
    return acc;
}

TimePoly Polynomial::as_time_poly() const {
    if (vars_.size() != 1) throw std::logic_error("as_time_poly needs a univariate polynomial");
    TimePoly p;
    for (const auto& [e, c] : terms_) p += TimePoly::monomial(c, e[0]);
    return p;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << (c.is_real() ? c.re.str() : c.re.str() + " + " + c.im.str() + "*i") << ')';
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) os << '*' << vars_[i] << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return os.str();
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Polynomial::Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(0, "in expression '" + std::string(s_) + "': " + why);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        skip_ws();
        Polynomial acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc += -term();
            else
                return acc;
        }
    }

    Polynomial term() {
        if (accept('-')) return -term();
        accept('+');
        Polynomial acc = power();
        for (;;) {
            if (accept('*')) {
                acc = acc * power();
            } else if (accept('/')) {
                const Rational d = integer();
                if (d.is_zero()) fail("division by zero");
                acc = acc * Polynomial::constant(vars_, CRational(Rational(1) / d));
            } else {
                return acc;
            }
        }
    }

    Polynomial power() {
        Polynomial base = factor();
        if (accept('^')) {
            const Rational e = integer();
            if (e.sign() < 0 || e.denominator() != "1") fail("exponent must be a non-negative integer");
            const long n = std::stol(e.numerator());
            Polynomial r = Polynomial::constant(vars_, CRational(1));
            for (long k = 0; k < n; ++k) r = r * base;
            return r;
        }
        return base;
    }

    Polynomial factor() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            Polynomial p = expr();
            if (!accept(')')) fail("missing ')'");
            return p;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return Polynomial::constant(vars_, CRational(integer()));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it != vars_.end())
                return Polynomial::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
            if (name == "i") return Polynomial::constant(vars_, CRational(Rational(0), Rational(1)));
            fail("unknown symbol '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Rational integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
            fail("floating-point literals are not accepted; use exact n/d rationals");
        return Rational::parse(s_.substr(start, pos_ - start));
    }

    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

int parse_int(std::string_view s, int line) {
    s = trim(s);
    int v = 0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [p, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError(line, "expected an integer, got '" + std::string(s) + "'");
    return v;
}

double parse_double(std::string_view s, int line) {
    const std::string str(trim(s));
    try {
        std::size_t used = 0;
        const double v = std::stod(str, &used);
        if (used != str.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + str + "'");
    }
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// "lo..hi" or a comma separated list.
ModeSet parse_modes(std::string_view s, int line) {
    s = trim(s);
    const auto dots = s.find("..");
    if (dots != std::string_view::npos) {
        const int lo = parse_int(s.substr(0, dots), line);
        const int hi = parse_int(s.substr(dots + 2), line);
        if (hi < lo) throw ParseError(line, "empty mode range");
        return ModeSet::range(lo, hi);
    }
    std::vector<int> v;
    for (auto part : split(s, ',')) v.push_back(parse_int(part, line));
    return ModeSet(std::move(v));
}

CRational parse_complex_constant(std::string_view s, int line) {
    try {
        const Polynomial p = parse_polynomial(s, {});
        return p.evaluate({});
    } catch (const ParseError& e) {
        throw ParseError(line, e.what());
    }
}

// "2 : 1^2 -1 : t/6 - 1/18"
ExplicitTerm parse_term(std::string_view s, int line) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ParseError(line, "term must read '<target> : <mode>^<exp> ... : <poly in t>'");
    ExplicitTerm term;
    term.target = parse_int(parts[0], line);
    std::vector<MultiIndex::Entry> entries;
    std::istringstream is{std::string(parts[1])};
    std::string tok;
    while (is >> tok) {
        const auto caret = tok.find('^');
        const int mode = parse_int(std::string_view(tok).substr(0, caret), line);
        const int e = caret == std::string::npos ? 1 : parse_int(std::string_view(tok).substr(caret + 1), line);
        if (e <= 0) throw ParseError(line, "exponents must be positive");
        entries.emplace_back(mode, e);
    }
    term.q = MultiIndex(std::move(entries));
    try {
        term.coeff = parse_polynomial(parts[2], {"t"}).as_time_poly();
    } catch (const ParseError& e) {
        throw ParseError(line, e.what());
    }
    return term;
}

StateVector parse_state(std::string_view s, int line) {
    StateVector v;
    if (trim(s).empty()) return v;
    for (auto part : split(s, ',')) {
        const auto f = split(part, ':');
        if (f.size() < 2 || f.size() > 3) throw ParseError(line, "state entries read '<mode>:<re>[:<im>]'");
        const int mode = parse_int(f[0], line);
        const double re = parse_double(f[1], line);
        const double im = f.size() == 3 ? parse_double(f[2], line) : 0.0;
        v[mode] = {re, im};
    }
    return v;
}

std::string time_poly_expr(const TimePoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int m = 0; m <= p.degree(); ++m) {
        const CRational c = p.coeff(m);
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << c.re.str();
        if (!c.im.is_zero()) os << " + (" << c.im.str() << ")*i";
        os << ')';
        if (m > 0) os << "*t^" << m;
    }
    return os.str();
}

std::string complex_expr(const CRational& c) {
    std::string s = "(" + c.re.str() + ")";
    if (!c.im.is_zero()) s += " + (" + c.im.str() + ")*i";
    return s;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
    return ExprParser(text, vars).parse();
}

// ---------------------------------------------------------------------------
// Generator and problem assembly

ModalSeries generate_quadratic_convolution(const Polynomial& b, const TimePoly& time_factor, const ModeSet& modes) {
    ModalSeries f(modes, 2);
    for (int j : modes.labels()) {
        for (int k : modes.labels()) {
            const int other = j - k;
            if (!modes.contains(other) || k > other) continue;  // visit each unordered pair once
            CRational c = b.evaluate({Rational(j), Rational(k)});
            if (k != other) c += b.evaluate({Rational(j), Rational(other)});
            if (c.is_zero()) continue;
            f.add(j, MultiIndex({{k, 1}, {other, 1}}), time_factor * c);
        }
    }
    return f;
}

SpectralModel ProblemSpec::model() const { return SpectralModel(modes, eigenvalues, gap, truncation); }

ModalSeries ProblemSpec::nonlinearity() const {
    int max_deg = 2;
    for (const auto& t : terms) max_deg = std::max(max_deg, t.q.degree());
    ModalSeries f(modes, max_deg);
    if (convolution) {
        const ModalSeries g = generate_quadratic_convolution(convolution->b, convolution->time_factor, modes);
        f = series_combine(1, f, 1, g);
    }
    for (const auto& t : terms) f.add(t.target, t.q, t.coeff);
    return f;
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
    return a.modes == b.modes && a.eigenvalues == b.eigenvalues && a.gap.alpha == b.gap.alpha &&
           a.gap.beta == b.gap.beta && a.gap.gamma == b.gap.gamma && a.gap.mu_tilde == b.gap.mu_tilde &&
           a.truncation == b.truncation && a.convolution == b.convolution && a.terms == b.terms &&
           a.order == b.order && a.strategy == b.strategy && a.simulation == b.simulation;
}

ProblemSpec parse_problem(std::string_view text) {
    ProblemSpec spec;
    std::string section;
    std::set<std::string> seen;
    std::optional<ModeSet> modes;
    std::optional<Polynomial> eigen_poly;
    std::map<int, std::pair<CRational, int>> eigen_explicit;  // value, line
    std::optional<Polynomial> conv_b;
    std::optional<TimePoly> conv_time;
    std::vector<std::pair<ExplicitTerm, int>> terms;
    std::optional<Rational> alpha, mu_tilde, mu_override;
    std::optional<ExtRational> beta, gamma;
    std::optional<int> truncation;

    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "model" && section != "nonlinearity" && section != "run")
                throw ParseError(line_no, "unknown section [" + section + "]");
            if (!seen.insert("[" + section + "]").second) throw ParseError(line_no, "duplicate section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) throw ParseError(line_no, "entry outside of a section");

        const bool repeatable = key == "term" || key.rfind("eigenvalue[", 0) == 0;
        if (!repeatable && !seen.insert(section + "." + key).second)
            throw ParseError(line_no, "duplicate key '" + key + "'");

        auto rational = [&](std::string_view v) {
            try {
                return Rational::parse(v);
            } catch (const ParseError& e) {
                throw ParseError(line_no, key + ": " + e.what());
            }
        };
        auto ext_rational = [&](std::string_view v) {
            try {
                return ExtRational::parse(v);
            } catch (const ParseError& e) {
                throw ParseError(line_no, key + ": " + e.what());
            }
        };
        auto poly = [&](std::string_view v, std::vector<std::string> vars) {
            try {
                return parse_polynomial(v, vars);
            } catch (const ParseError& e) {
                throw ParseError(line_no, key + ": " + e.what());
            }
        };

        if (section == "model") {
            if (key == "modes") {
                modes = parse_modes(value, line_no);
            } else if (key == "truncation") {
                truncation = parse_int(value, line_no);
            } else if (key == "eigenvalue_poly") {
                eigen_poly = poly(value, {"j"});
            } else if (key.rfind("eigenvalue[", 0) == 0 && key.back() == ']') {
                const int j = parse_int(std::string_view(key).substr(11, key.size() - 12), line_no);
                if (eigen_explicit.count(j)) throw ParseError(line_no, "eigenvalue for mode " + std::to_string(j) + " given twice");
                eigen_explicit.emplace(j, std::make_pair(parse_complex_constant(value, line_no), line_no));
            } else if (key == "alpha") {
                alpha = rational(value);
            } else if (key == "beta") {
                beta = ext_rational(value);
            } else if (key == "gamma") {
                gamma = ext_rational(value);
            } else if (key == "mu_tilde") {
                mu_tilde = rational(value);
            } else {
                throw ParseError(line_no, "unknown key '" + key + "' in [model]");
            }
        } else if (section == "nonlinearity") {
            if (key == "convolution_b") {
                conv_b = poly(value, {"j", "k"});
            } else if (key == "convolution_time") {
                conv_time = poly(value, {"t"}).as_time_poly();
            } else if (key == "term") {
                terms.emplace_back(parse_term(value, line_no), line_no);
            } else {
                throw ParseError(line_no, "unknown key '" + key + "' in [nonlinearity]");
            }
        } else {
            auto& sim = spec.simulation;
            if (key == "order") {
                spec.order = parse_int(value, line_no);
            } else if (key == "strategy") {
                try {
                    spec.strategy = parse_strategy(std::string(value));
                } catch (const ParseError& e) {
                    throw ParseError(line_no, e.what());
                }
            } else if (key == "mu_tilde") {
                mu_override = rational(value);
            } else if (key == "t0") {
                sim.t0 = parse_double(value, line_no);
            } else if (key == "t1") {
                sim.t1 = parse_double(value, line_no);
            } else if (key == "dt") {
                sim.dt = parse_double(value, line_no);
            } else if (key == "horizon") {
                sim.horizon = parse_double(value, line_no);
            } else if (key == "x0") {
                sim.x0 = parse_state(value, line_no);
            } else if (key == "which") {
                sim.which = std::string(value);
            } else if (key == "samples") {
                sim.samples = parse_int(value, line_no);
            } else if (key == "radius") {
                sim.radius = parse_double(value, line_no);
            } else if (key == "t_min") {
                sim.t_min = parse_double(value, line_no);
            } else if (key == "t_max") {
                sim.t_max = parse_double(value, line_no);
            } else if (key == "seed") {
                sim.seed = static_cast<unsigned long long>(parse_int(value, line_no));
            } else {
                throw ParseError(line_no, "unknown key '" + key + "' in [run]");
            }
        }
    }

    if (!truncation) throw ParseError(0, "[model] needs 'truncation'");
    spec.truncation = *truncation;
    spec.modes = modes ? *modes : ModeSet::range(-spec.truncation, spec.truncation);
    if (!alpha || !beta || !gamma || !mu_tilde) throw ParseError(0, "[model] needs alpha, beta, gamma and mu_tilde");
    spec.gap = GapParameters{*alpha, *beta, *gamma, mu_override ? *mu_override : *mu_tilde};

    for (const auto& [j, v] : eigen_explicit)
        if (!spec.modes.contains(j)) throw ParseError(v.second, "eigenvalue for mode " + std::to_string(j) + " outside the mode set");
    for (int j : spec.modes.labels()) {
        auto it = eigen_explicit.find(j);
        if (it != eigen_explicit.end())
            spec.eigenvalues[j] = it->second.first;
        else if (eigen_poly)
            spec.eigenvalues[j] = eigen_poly->evaluate({Rational(j)});
        else
            throw ParseError(0, "no eigenvalue for mode " + std::to_string(j) + " (give eigenvalue_poly or eigenvalue[j])");
    }

    if (conv_b || conv_time) {
        if (!conv_b || !conv_time) throw ParseError(0, "convolution needs both convolution_b and convolution_time");
        spec.convolution = ConvolutionGenerator{*conv_b, *conv_time};
    }
    for (auto& [t, line] : terms) {
        if (t.q.degree() < 2)
            throw ParseError(line, "nonlinearity terms must have degree >= 2 (f must vanish to second order)");
        if (!spec.modes.contains(t.target))
            throw ParseError(line, "term target " + std::to_string(t.target) + " outside the mode set");
        for (const auto& [m, e] : t.q.entries())
            if (!spec.modes.contains(m)) throw ParseError(line, "term uses mode " + std::to_string(m) + " outside the mode set");
        spec.terms.push_back(std::move(t));
    }
    if (spec.order < 2) throw ParseError(0, "[run] order must be >= 2");
    if (!(spec.simulation.dt > 0.0)) throw ParseError(0, "[run] dt must be positive");
    for (const auto& [j, z] : spec.simulation.x0.entries())
        if (!spec.modes.contains(j)) throw ParseError(0, "x0 uses mode " + std::to_string(j) + " outside the mode set");

    // validates the gap ordering and the forbidden bands
    (void)spec.model();
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
    std::ostringstream os;
    os << "[model]\n";
    os << "truncation = " << spec.truncation << '\n';
    os << "modes = ";
    for (std::size_t i = 0; i < spec.modes.size(); ++i) os << (i ? ", " : "") << spec.modes.labels()[i];
    os << '\n';
    for (const auto& [j, a] : spec.eigenvalues) os << "eigenvalue[" << j << "] = " << complex_expr(a) << '\n';
    os << "alpha = " << spec.gap.alpha << '\n';
    os << "beta = " << spec.gap.beta.str() << '\n';
    os << "gamma = " << spec.gap.gamma.str() << '\n';
    os << "mu_tilde = " << spec.gap.mu_tilde << '\n';
    os << "\n[nonlinearity]\n";
    if (spec.convolution) {
        os << "convolution_b = " << spec.convolution->b.str() << '\n';
        os << "convolution_time = " << time_poly_expr(spec.convolution->time_factor) << '\n';
    }
    for (const auto& t : spec.terms) {
        os << "term = " << t.target << " :";
        for (const auto& [m, e] : t.q.entries()) os << ' ' << m << '^' << e;
        os << " : " << time_poly_expr(t.coeff) << '\n';
    }
    const auto& sim = spec.simulation;
    os << "\n[run]\n";
    os << "order = " << spec.order << '\n';
    os << "strategy = " << to_string(spec.strategy) << '\n';
    os << "t0 = " << fmt_double(sim.t0) << '\n';
    os << "t1 = " << fmt_double(sim.t1) << '\n';
    os << "dt = " << fmt_double(sim.dt) << '\n';
    os << "horizon = " << fmt_double(sim.horizon) << '\n';
    if (!sim.x0.entries().empty()) {
        os << "x0 = ";
        bool first = true;
        for (const auto& [j, z] : sim.x0.entries()) {
            os << (first ? "" : ", ") << j << ':' << fmt_double(z.real()) << ':' << fmt_double(z.imag());
            first = false;
        }
        os << '\n';
    }
    os << "which = " << sim.which << '\n';
    os << "samples = " << sim.samples << '\n';
    os << "radius = " << fmt_double(sim.radius) << '\n';
    os << "t_min = " << fmt_double(sim.t_min) << '\n';
    os << "t_max = " << fmt_double(sim.t_max) << '\n';
    os << "seed = " << sim.seed << '\n';
    return os.str();
}

}  // namespace modalnf
