#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modalnf/engine.hpp"
#include "modalnf/modal_series.hpp"
#include "modalnf/spectral_model.hpp"

namespace modalnf {

// Polynomial in named variables with exact complex coefficients. Keys are
// exponent vectors aligned with vars().
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(std::vector<std::string> vars = {});
    static Polynomial constant(std::vector<std::string> vars, CRational c);
    static Polynomial variable(std::vector<std::string> vars, std::size_t which);

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const std::map<Exponents, CRational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    CRational evaluate(const std::vector<Rational>& at) const;
    // Restricted to a single variable, as a TimePoly (requires vars().size() == 1).
    TimePoly as_time_poly() const;
    std::string str() const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial operator-() const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += -b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

private:
    void add_term(const Exponents& e, const CRational& c);
    std::vector<std::string> vars_;
    std::map<Exponents, CRational> terms_;
};

// Parses sums of products of integer/rational literals, the listed variables,
// the imaginary unit `i`, parentheses and non-negative integer powers.
// Floating-point literals are rejected.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars);

struct ExplicitTerm {
    int target = 0;
    MultiIndex q;
    TimePoly coeff;
    friend bool operator==(const ExplicitTerm&, const ExplicitTerm&) = default;
};

// Quadratic convolution nonlinearity  f_j = c(t) sum_k b(j, k) x_{j-k} x_k.
struct ConvolutionGenerator {
    Polynomial b{{"j", "k"}};
    TimePoly time_factor;
    friend bool operator==(const ConvolutionGenerator&, const ConvolutionGenerator&) = default;
};

struct SimulationOptions {
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-3;
    double horizon = 2.0;
    StateVector x0;
    std::string which = "c";
    int samples = 100;
    double radius = 0.01;
    double t_min = 0.0;
    double t_max = 1.0;
    unsigned long long seed = 20261018ULL;
    friend bool operator==(const SimulationOptions&, const SimulationOptions&) = default;
};

struct ProblemSpec {
    ModeSet modes;
    std::map<int, CRational> eigenvalues;
    GapParameters gap;
    int truncation = 0;
    std::optional<ConvolutionGenerator> convolution;
    std::vector<ExplicitTerm> terms;
    int order = 2;
    EliminationStrategy strategy = EliminationStrategy::separating;
    SimulationOptions simulation;

    SpectralModel model() const;
    ModalSeries nonlinearity() const;

    friend bool operator==(const ProblemSpec& a, const ProblemSpec& b);
};

// Parses the sectioned key = value problem format and validates the model
// and the nonlinearity. Throws ParseError (with line) on malformed input and
// ModelInvariantViolation / UnclassifiableMode on an invalid model.
ProblemSpec parse_problem(std::string_view text);
ProblemSpec load_problem(const std::string& path);
std::string serialize_problem(const ProblemSpec& spec);

// f_j = c(t) sum_k b(j,k) x_{j-k} x_k, with each unordered pair {k, j-k}
// stored once.
ModalSeries generate_quadratic_convolution(const Polynomial& b, const TimePoly& time_factor, const ModeSet& modes);

}  // namespace modalnf
