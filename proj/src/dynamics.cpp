#include "modalnf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

#include "modalnf/errors.hpp"

namespace modalnf {

namespace {

using CVec = std::vector<std::complex<double>>;

// A series flattened onto dense mode indices for repeated evaluation.
class DenseSeries {
public:
    DenseSeries(const ModalSeries& s, const ModeSet& modes) {
        terms_.reserve(s.size());
        for (const auto& [key, c] : s.terms()) {
            Term term;
            term.target = modes.index_of(key.target);
            for (const auto& [m, e] : key.q.entries()) term.factors.emplace_back(modes.index_of(m), e);
            term.coeff = c;
            terms_.push_back(std::move(term));
        }
    }

    // out += S(t, x)
    void accumulate(double t, const CVec& x, CVec& out) const {
        for (const auto& term : terms_) {
            std::complex<double> v = term.coeff.evaluate(t);
            for (const auto& [idx, e] : term.factors)
                for (int k = 0; k < e; ++k) v *= x[idx];
            out[term.target] += v;
        }
    }

private:
    struct Term {
        std::size_t target = 0;
        std::vector<std::pair<std::size_t, int>> factors;
        TimePoly coeff;
    };
    std::vector<Term> terms_;
};

CVec to_dense(const StateVector& v, const ModeSet& modes) {
    CVec x(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const int j = modes.labels()[i];
        x[i] = v.has(j) ? v.at(j) : 0.0;
    }
    for (const auto& [j, val] : v.entries())
        if (!modes.contains(j)) throw MissingMode("state has mode " + std::to_string(j) + " outside the model");
    return x;
}

StateVector from_dense(const CVec& x, const ModeSet& modes) {
    StateVector v;
    for (std::size_t i = 0; i < modes.size(); ++i) v[modes.labels()[i]] = x[i];
    return v;
}

double dense_norm(const CVec& x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return std::sqrt(s);
}

CVec eigen_dense(const SpectralModel& model) {
    CVec a(model.modes().size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = model.eigenvalue(model.modes().labels()[i]).to_complex();
    return a;
}

StateVector restrict_to(const StateVector& v, const SpectralModel& model, ModeClass c) {
    StateVector out;
    for (const auto& [j, x] : v.entries())
        if (model.classify_mode(j) == c) out[j] = x;
    return out;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    if (m.isZero(0.0)) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

}  // namespace

Trajectory integrate(const SpectralModel& model, const ModalSeries& S, const StateVector& x0, double t0, double t1,
                     double dt, std::string system) {
    if (!(dt > 0.0)) throw InvalidTerm("integrate: dt must be positive");
    const ModeSet& modes = model.modes();
    const DenseSeries field(S, modes);
    const CVec lambda = eigen_dense(model);
    const std::size_t n = modes.size();

    const double span = t1 - t0;
    const auto steps = static_cast<long>(std::ceil(std::abs(span) / dt - 1e-9));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;

    auto rhs = [&](double t, const CVec& x, CVec& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = lambda[i] * x[i];
        field.accumulate(t, x, out);
    };

    Trajectory traj;
    traj.dt = h;
    traj.system = std::move(system);
    traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
    CVec x = to_dense(x0, modes);
    traj.samples.push_back({t0, from_dense(x, modes)});

    CVec k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * h;
        rhs(t, x, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()))
                throw NonFinite("state became non-finite at t = " + std::to_string(t + h) + " (mode " +
                                std::to_string(modes.labels()[i]) + ")");
        }
        const double t_next = (s + 1 == steps) ? t1 : t0 + static_cast<double>(s + 1) * h;
        traj.samples.push_back({t_next, from_dense(x, modes)});
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ModeSet& modes) {
    os << "t";
    for (int j : modes.labels()) os << ",x" << j << "_re,x" << j << "_im";
    os << '\n' << std::setprecision(17);
    for (const auto& s : traj.samples) {
        os << s.t;
        for (int j : modes.labels()) {
            const auto z = s.state.has(j) ? s.state.at(j) : std::complex<double>{};
            os << ',' << z.real() << ',' << z.imag();
        }
        os << '\n';
    }
}

ConjugacyReport check_conjugacy(const SpectralModel& model, const ModalSeries& f, const NormalFormResult& result,
                                const StateVector& x0, double t0, double t1, double dt, bool include_residual) {
    const ModeSet& modes = model.modes();
    const Trajectory traj = integrate(model, result.state.F, x0, t0, t1, dt);
    const DenseSeries xi(result.state.xi, modes);
    const DenseSeries nonlinearity(f, modes);
    const DenseSeries resid(result.residual_full, modes);
    const CVec lambda = eigen_dense(model);
    const std::size_t n = modes.size();

    std::vector<CVec> xs;
    xs.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        CVec x(n);
        xi.accumulate(s.t, to_dense(s.state, modes), x);
        xs.push_back(std::move(x));
    }

    ConjugacyReport report;
    for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        const double t = traj.samples[k].t;
        const double h2 = traj.samples[k + 1].t - traj.samples[k - 1].t;
        CVec rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = lambda[i] * xs[k][i];
        nonlinearity.accumulate(t, xs[k], rhs);
        if (include_residual) resid.accumulate(t, to_dense(traj.samples[k].state, modes), rhs);
        CVec defect(n);
        for (std::size_t i = 0; i < n; ++i) defect[i] = (xs[k + 1][i] - xs[k - 1][i]) / h2 - rhs[i];
        const double d = dense_norm(defect);
        if (d > report.max_defect) {
            report.max_defect = d;
            report.t_at_max = t;
        }
        ++report.samples_checked;
    }
    return report;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    if (n <= 1) return {lo};
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / (n - 1)));
    return g;
}

double residual_scaling(const ModalSeries& R, const StateVector& direction, double t,
                        const std::vector<double>& eps_grid) {
    std::vector<double> xs, ys;
    for (double eps : eps_grid) {
        StateVector v;
        for (const auto& [j, z] : direction.entries()) v[j] = eps * z;
        const double val = series_eval(R, t, v).norm();
        if (val > 0.0) {
            xs.push_back(std::log(eps));
            ys.push_back(std::log(val));
        }
    }
    if (xs.size() < 2) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::MatrixXcd tilde_matrix(const ModalSeries& F, const ModeSet& modes, double t, const StateVector& v) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [key, c] : F.terms()) {
        const auto row = static_cast<Eigen::Index>(modes.index_of(key.target));
        const std::complex<double> ct = c.evaluate(t) / static_cast<double>(key.q.degree());
        for (const auto& [k, e] : key.q.entries()) {
            const auto col = static_cast<Eigen::Index>(modes.index_of(k));
            m(row, col) += ct * static_cast<double>(e) * mono_eval(key.q.without_one(k), v);
        }
    }
    return m;
}

DomainProbe tilde_probe(const ModalSeries& F, const SpectralModel& model, double t, const StateVector& v) {
    DomainProbe p;
    p.t = t;
    p.v = v;
    StateVector full = StateVector::zeros(model.modes());
    for (const auto& [j, z] : v.entries()) full[j] = z;
    p.tilde_norm = spectral_norm(tilde_matrix(F, model.modes(), t, full));
    p.inside = p.tilde_norm < model.gap().mu_tilde.to_double();
    return p;
}

bool DecayReport::all_hold() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.holds; });
}

DecayReport decay_check(const NormalFormResult& result, const SpectralModel& model, const StateVector& x0,
                        double horizon, double dt) {
    constexpr double kTolerance = 1.0 + 1e-6;
    const GapParameters& gap = model.gap();
    const double mu = gap.mu_tilde.to_double();
    const bool forward = horizon >= 0.0;

    const Trajectory traj = integrate(model, result.state.F, x0, 0.0, horizon, dt);

    struct Bound {
        BoundCheck check;
        ModeClass cls;
        double rate;  // rhs = |X_a(0)| exp(rate * |t|)
        double initial;
    };
    std::vector<Bound> bounds;
    if (forward && !gap.beta.is_infinite())
        bounds.push_back({{"stable-forward"}, ModeClass::stable, -(gap.beta.to_double() - mu), 0.0});
    if (!forward && !gap.gamma.is_infinite())
        bounds.push_back({{"unstable-backward"}, ModeClass::unstable, -(gap.gamma.to_double() - mu), 0.0});
    const bool centre_applies =
        restrict_to(x0, model, ModeClass::stable).norm() == 0.0 || restrict_to(x0, model, ModeClass::unstable).norm() == 0.0;
    if (centre_applies)
        bounds.push_back({{forward ? "centre-forward" : "centre-backward"}, ModeClass::centre,
                          gap.alpha.to_double() + mu, 0.0});
    for (auto& b : bounds) b.initial = restrict_to(x0, model, b.cls).norm();

    DecayReport report;
    report.horizon = horizon;
    for (const auto& s : traj.samples) {
        const DomainProbe probe = tilde_probe(result.state.F, model, s.t, s.state);
        report.max_tilde_norm = std::max(report.max_tilde_norm, probe.tilde_norm);
        if (!probe.inside)
            throw InsideViolation("trajectory leaves the trust domain at t = " + std::to_string(s.t) +
                                  " (|F~| = " + std::to_string(probe.tilde_norm) + ")");
        for (auto& b : bounds) {
            const double lhs = restrict_to(s.state, model, b.cls).norm();
            const double rhs = b.initial * std::exp(b.rate * std::abs(s.t));
            const double ratio = lhs == 0.0 ? 0.0 : lhs / rhs;
            if (ratio > b.check.worst_ratio) {
                b.check.worst_ratio = ratio;
                b.check.worst_t = s.t;
            }
            if (lhs > rhs * kTolerance) b.check.holds = false;
            ++b.check.samples;
        }
    }
    for (auto& b : bounds) report.bounds.push_back(b.check);
    return report;
}

SubspaceChoice parse_subspace(const std::string& name) {
    if (name == "c") return SubspaceChoice::c;
    if (name == "s") return SubspaceChoice::s;
    if (name == "u") return SubspaceChoice::u;
    if (name == "cs") return SubspaceChoice::cs;
    if (name == "cu") return SubspaceChoice::cu;
    throw ParseError(0, "unknown subspace '" + name + "' (expected c|s|u|cs|cu)");
}

const char* to_string(SubspaceChoice c) noexcept {
    switch (c) {
        case SubspaceChoice::c: return "c";
        case SubspaceChoice::s: return "s";
        case SubspaceChoice::u: return "u";
        case SubspaceChoice::cs: return "cs";
        case SubspaceChoice::cu: return "cu";
    }
    return "?";
}

std::vector<ManifoldPoint> invariant_subset_sample(const NormalFormResult& result, const SpectralModel& model,
                                                   SubspaceChoice which, int samples, double radius,
                                                   const SampleOptions& options) {
    auto allowed = [&](ModeClass c) {
        switch (which) {
            case SubspaceChoice::c: return c == ModeClass::centre;
            case SubspaceChoice::s: return c == ModeClass::stable;
            case SubspaceChoice::u: return c == ModeClass::unstable;
            case SubspaceChoice::cs: return c != ModeClass::unstable;
            case SubspaceChoice::cu: return c != ModeClass::stable;
        }
        return false;
    };
    std::vector<int> support;
    for (int j : model.modes().labels())
        if (allowed(model.classify_mode(j))) support.push_back(j);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;

    std::vector<ManifoldPoint> out;
    const long max_attempts = 100L * std::max(samples, 1);
    for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < samples; ++attempt) {
        ManifoldPoint pt;
        pt.t = options.t_min + (options.t_max - options.t_min) * unit(rng);
        pt.v = StateVector::zeros(model.modes());
        if (radius > 0.0 && !support.empty()) {
            StateVector dir;
            for (int j : support) dir[j] = {gauss(rng), gauss(rng)};
            const double scale = radius * unit(rng) / dir.norm();
            for (int j : support) pt.v[j] = dir.at(j) * scale;
        }
        if (!tilde_probe(result.state.F, model, pt.t, pt.v).inside) continue;
        pt.x = series_eval(result.state.xi, pt.t, pt.v);
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace modalnf
