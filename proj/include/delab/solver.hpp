#ifndef DELAB_SOLVER_HPP
#define DELAB_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "delab/damping.hpp"
#include "delab/thermo.hpp"

namespace delab {

/// Uniform cell-centered 1D grid.
struct Grid1D {
    double x_left = -24.0;
    double x_right = 24.0;
    int n_cells = 2000;

    double dx() const { return (x_right - x_left) / n_cells; }
    double x(int i) const { return x_left + (i + 0.5) * dx(); }
    void validate() const;
};

/** Grid snapshot of the state at one time. u, v are primal; r, s, c are the
 *  Riemann-invariant caches, kept consistent (r = v - eta(u), s = v + eta(u),
 *  c = c(u)) whenever a state leaves the solver. */
struct FieldState {
    double t = 0.0;
    std::vector<double> u, v, r, s, c;

    int size() const { return static_cast<int>(u.size()); }
};

/** Bounded C^1 profile with prescribed limits at +-infinity, used to build
 *  small-perturbation initial data. Canonical shapes have O(1) amplitude and
 *  slope; an optional multiplier rescales both. */
class Shape {
  public:
    static Shape zero();
    static Shape gaussian();        // exp(-x^2)
    static Shape gaussian_slope1(); // scaled so min slope is exactly -1
    static Shape bump();            // compact C^1 bump, support |x| < 3
    static Shape tanh_step();       // (1 + tanh x)/2
    /// Accepts "name" or "name*multiplier", e.g. "gaussian*-3".
    static Shape parse(const std::string& text);

    double value(double x) const;
    double deriv(double x) const;
    double left_limit() const;
    double right_limit() const;
    /// Radius beyond which the shape equals its limits to machine level.
    double support_radius() const;
    std::string describe() const;

  private:
    enum class Kind { Zero, Gaussian, GaussianSlope1, Bump, TanhStep };
    Kind kind_ = Kind::Zero;
    double scale_ = 1.0;
};

/** Initial data family. The default small-perturbation form is
 *  (u0, v0) = (u_minus + eps*phi, v_minus + eps*psi); an explicit tabulated
 *  profile (linear interpolation, clamped ends) can override it. */
struct InitialDataFamily {
    double epsilon = 0.1;
    Shape phi = Shape::zero();
    Shape psi = Shape::gaussian();
    double u_minus = 1.0;
    double v_minus = 0.0;
    double delta0 = 0.05;

    std::vector<double> explicit_x, explicit_u, explicit_v;

    bool is_explicit() const { return !explicit_x.empty(); }
    double u0(double x) const;
    double v0(double x) const;
    double du0(double x) const;
    double dv0(double x) const;
    double u_left_far() const;
    double v_left_far() const;
    double u_right_far() const;
    double v_right_far() const;
    double support_radius() const;
};

enum class EventType { HorizonReached, GradientBlowup, VacuumEvent, NonFiniteEvent };

std::string event_name(EventType e);

struct Event {
    EventType type = EventType::HorizonReached;
    double t = 0.0;
    double witness_x = 0.0;
};

/// Scalar monitors recorded along a run.
struct MonitorSample {
    double t = 0.0;
    double min_u = 0.0, max_u = 0.0;
    double max_abs_v = 0.0;
    double max_grad_r = 0.0, max_grad_s = 0.0;
    double phi_norm = 0.0, psi_norm = 0.0;
    double max_abs_dp = 0.0;
};

struct RunConfig {
    double gamma = 3.0;
    DampingModel model = DampingModel::none();
    InitialDataFamily family;
    Grid1D grid;
    double cfl = 0.4;
    double t_max = 12.0;
    double record_interval = 0.05;
    /// Absolute threshold on max(|r_x|, |s_x|); 0 selects the default
    /// 1e4 * max(1, initial max gradient).
    double gradient_threshold = 0.0;
    double vacuum_floor = 1e-10;
    /// Snapshot every k-th step for characteristic tracing; 0 disables.
    int snapshot_stride = 0;
    bool enforce_domain = true;
};

/// Extra information captured when the gradient monitor crosses the threshold.
struct CrossingInfo {
    bool crossed = false;
    double t = 0.0;
    double witness_x = 0.0;
    double witness_u = 1.0;
    /// Most negative of sqrt(c) * {r_x, s_x} over the grid at crossing time.
    double min_weighted_gradient = 0.0;
};

struct Trajectory {
    std::vector<MonitorSample> monitors;
    Event terminal;
    Grid1D grid;
    double dx = 0.0;
    double gamma = 3.0;
    double u_minus = 1.0, v_minus = 0.0;
    double initial_max_gradient = 0.0;
    double gradient_threshold_used = 0.0;
    CrossingInfo crossing;
    std::vector<FieldState> snapshots;
    FieldState final_state;
};

FieldState make_initial(const InitialDataFamily& family, const Grid1D& grid,
                        const PressureLaw& law);

/// CFL-limited step size cfl * dx / max c.
double cfl_dt(const FieldState& state, const Grid1D& grid, double cfl);

struct StepResult {
    FieldState state;
    std::optional<Event> event;
};

/** One Heun step of the characteristic-form scheme: r advected at -c, s at
 *  +c, both with the -(a/2)(r+s) source inside each stage; MUSCL minmod
 *  reconstruction; ghost cells clamped to the damped far-field state. */
StepResult step(const FieldState& state, const Grid1D& grid, const PressureLaw& law,
                const DampingModel& model, const InitialDataFamily& family, double dt,
                double vacuum_floor = 1e-10);

/// Drives step until t_max or a terminal event; records monitors.
Trajectory run(const RunConfig& config);

/// Minimum domain half-width required by the no-reflection sizing rule.
double required_domain_radius(const RunConfig& config);

} // namespace delab

#endif
