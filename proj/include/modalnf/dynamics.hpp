#pragma once

#include <complex>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modalnf/engine.hpp"
#include "modalnf/modal_series.hpp"
#include "modalnf/spectral_model.hpp"

namespace modalnf {

struct TrajectorySample {
    double t = 0.0;
    StateVector state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double dt = 0.0;         // signed step actually used
    std::string integrator = "rk4";
    std::string system;      // free-form label of the integrated field
};

// Fixed-step classical RK4 for X' = diag(alpha) X + S(t, X) from t0 to t1
// (t1 < t0 integrates backward). The step is shrunk so that |t1 - t0| is a
// whole number of steps no larger than dt. Throws NonFinite on blow-up.
Trajectory integrate(const SpectralModel& model, const ModalSeries& S, const StateVector& x0, double t0, double t1,
                     double dt, std::string system = "normal-form");

// CSV: t, then re/im per mode in model order.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ModeSet& modes);

struct ConjugacyReport {
    double max_defect = 0.0;
    double t_at_max = 0.0;
    std::size_t samples_checked = 0;
};

// Integrates the normal form, maps through xi and measures
// |x' - A x - f(t, x) - R(t, X)| with centered differences for x'.
ConjugacyReport check_conjugacy(const SpectralModel& model, const ModalSeries& f, const NormalFormResult& result,
                                const StateVector& x0, double t0, double t1, double dt, bool include_residual = true);

// Least-squares slope of log|R(t, eps*direction)| against log eps. Returns
// +infinity when every evaluation is exactly zero.
double residual_scaling(const ModalSeries& R, const StateVector& direction, double t,
                        const std::vector<double>& eps_grid);

// Log-spaced grid of n points from lo to hi.
std::vector<double> log_grid(double lo, double hi, int n);

struct DomainProbe {
    double t = 0.0;
    StateVector v;
    double tilde_norm = 0.0;
    bool inside = true;
};

// F~(t, v) as a matrix over the model's modes (row = target, column = k).
Eigen::MatrixXcd tilde_matrix(const ModalSeries& F, const ModeSet& modes, double t, const StateVector& v);
DomainProbe tilde_probe(const ModalSeries& F, const SpectralModel& model, double t, const StateVector& v);

struct BoundCheck {
    std::string name;
    bool holds = true;
    double worst_ratio = 0.0;  // max over samples of lhs / rhs (0 when lhs is 0)
    double worst_t = 0.0;
    std::size_t samples = 0;
};

struct DecayReport {
    double horizon = 0.0;
    double max_tilde_norm = 0.0;
    std::vector<BoundCheck> bounds;
    bool all_hold() const;
};

// Integrates the normal form from x0 over [0, horizon] (horizon < 0 runs
// backward) and checks the exponential bounds that apply in that direction:
// stable decay forward, unstable decay backward, and the centre growth bound
// whenever X_s(0) = 0 or X_u(0) = 0. Throws InsideViolation if a sample
// leaves the domain where the F~ norm is below mu_tilde.
DecayReport decay_check(const NormalFormResult& result, const SpectralModel& model, const StateVector& x0,
                        double horizon, double dt);

enum class SubspaceChoice { c, s, u, cs, cu };
SubspaceChoice parse_subspace(const std::string& name);  // throws ParseError
const char* to_string(SubspaceChoice c) noexcept;

struct ManifoldPoint {
    double t = 0.0;
    StateVector v;  // normal-form coordinates
    StateVector x;  // xi(t, v)
};

struct SampleOptions {
    double t_min = 0.0;
    double t_max = 1.0;
    unsigned long long seed = 20261018ULL;
};

// Draws v in the chosen subspace with |v| <= radius, keeps those inside the
// trust domain and maps them through xi.
std::vector<ManifoldPoint> invariant_subset_sample(const NormalFormResult& result, const SpectralModel& model,
                                                   SubspaceChoice which, int samples, double radius,
                                                   const SampleOptions& options = {});

}  // namespace modalnf
