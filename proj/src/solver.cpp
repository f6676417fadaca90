#include "delab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace delab {

namespace {

// Generalized minmod slope: minmod(theta*dl, (dl+dr)/2, theta*dr). The
// central choice keeps second order on smooth monotone profiles; the
// theta-scaled one-sided differences bound it TVD-style at fronts.
constexpr double kPlmTheta = 1.5;

double minmod_slope(double dl, double dr) {
    if (dl > 0.0 && dr > 0.0) {
        return std::min(0.5 * (dl + dr), kPlmTheta * std::min(dl, dr));
    }
    if (dl < 0.0 && dr < 0.0) {
        return std::max(0.5 * (dl + dr), kPlmTheta * std::max(dl, dr));
    }
    return 0.0;
}

double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - w) * ys[i] + w * ys[i + 1];
}

double interp_slope(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front() || x >= xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
}

/// Exact integral of a(tau, x_b) over [0, t] at a fixed boundary abscissa.
double damping_time_integral(const DampingModel& model, double t, double x_b) {
    switch (model.kind()) {
        case DampingModel::Kind::None:
            return 0.0;
        case DampingModel::Kind::PowerTime:
            return 2.0 * std::log(model.amplification(t));
        case DampingModel::Kind::SpacePower:
            return model.eval(0.0, x_b).a * t;
        case DampingModel::Kind::Tabulated: {
            // Piecewise linear in tau at fixed x, clamped outside the table:
            // trapezoid over the knots is exact.
            double acc = 0.0;
            double prev_t = 0.0;
            double prev_a = model.eval(0.0, x_b).a;
            auto push = [&](double tk) {
                if (tk <= prev_t || tk > t) return;
                double ak = model.eval(tk, x_b).a;
                acc += 0.5 * (prev_a + ak) * (tk - prev_t);
                prev_t = tk;
                prev_a = ak;
            };
            // Knot times come implicitly through eval; sample finely enough
            // to land on every table knot by visiting a dense refinement.
            const int kSamples = 512;
            for (int k = 1; k <= kSamples; ++k) push(t * k / kSamples);
            return acc;
        }
    }
    return 0.0;
}

/// Far-field state on each side, evolved by the exact uniform-state ODE
/// v' = -a(t, x_boundary) v while u stays constant.
class FarField {
  public:
    FarField(const InitialDataFamily& family, const DampingModel& model, const Grid1D& grid,
             const PressureLaw& law)
        : model_(&model),
          x_left_(grid.x_left),
          x_right_(grid.x_right),
          v_left0_(family.v_left_far()),
          v_right0_(family.v_right_far()),
          eta_left_(law.eta(family.u_left_far())),
          eta_right_(law.eta(family.u_right_far())) {}

    double r_left(double t) const { return v_left(t) - eta_left_; }
    double s_left(double t) const { return v_left(t) + eta_left_; }
    double r_right(double t) const { return v_right(t) - eta_right_; }
    double s_right(double t) const { return v_right(t) + eta_right_; }

    double v_left(double t) const {
        return v_left0_ * std::exp(-damping_time_integral(*model_, t, x_left_));
    }
    double v_right(double t) const {
        return v_right0_ * std::exp(-damping_time_integral(*model_, t, x_right_));
    }

  private:
    const DampingModel* model_;
    double x_left_, x_right_;
    double v_left0_, v_right0_;
    double eta_left_, eta_right_;
};

/** Working buffers for the characteristic-form scheme. Arrays are padded
 *  with two ghost cells per side; real nodes live at p in [2, n+1]. */
class Stepper {
  public:
    Stepper(const Grid1D& grid, const PressureLaw& law, const DampingModel& model,
            const FarField& far, double vacuum_floor)
        : grid_(grid),
          law_(&law),
          model_(&model),
          far_(&far),
          vacuum_floor_(vacuum_floor),
          n_(grid.n_cells),
          pad_(n_ + 4),
          dx_(grid.dx()) {
        r_.assign(pad_, 0.0);
        s_.assign(pad_, 0.0);
        c_.assign(pad_, 0.0);
        r1_.assign(pad_, 0.0);
        s1_.assign(pad_, 0.0);
        c1_.assign(pad_, 0.0);
        dr0_.assign(pad_, 0.0);
        ds0_.assign(pad_, 0.0);
        dr1_.assign(pad_, 0.0);
        ds1_.assign(pad_, 0.0);
        sig_.assign(pad_, 0.0);
        grad_up_.assign(pad_, 0.0);
        if (model.kind() == DampingModel::Kind::SpacePower ||
            model.kind() == DampingModel::Kind::Tabulated) {
            a_static_.assign(pad_, 0.0);
            static_profile_ = model.kind() == DampingModel::Kind::SpacePower;
            if (static_profile_) {
                for (int p = 0; p < pad_; ++p) {
                    a_static_[p] = model.eval(0.0, x_of(p)).a;
                }
            }
        }
    }

    double x_of(int p) const { return grid_.x_left + (p - 2 + 0.5) * dx_; }

    void load(const FieldState& state) {
        t_ = state.t;
        for (int i = 0; i < n_; ++i) {
            r_[i + 2] = state.r[i];
            s_[i + 2] = state.s[i];
        }
        set_ghosts(r_, s_, t_);
        refresh_c(r_, s_, c_, t_);
    }

    double time() const { return t_; }

    double max_c() const {
        double m = 0.0;
        for (int p = 2; p < n_ + 2; ++p) m = std::max(m, c_[p]);
        return m;
    }

    std::optional<Event> advance(double dt) {
        tendency(r_, s_, c_, t_, dr0_, ds0_);
        for (int p = 2; p < n_ + 2; ++p) {
            r1_[p] = r_[p] + dt * dr0_[p];
            s1_[p] = s_[p] + dt * ds0_[p];
        }
        set_ghosts(r1_, s1_, t_ + dt);
        if (auto ev = refresh_c(r1_, s1_, c1_, t_ + dt)) return ev;
        tendency(r1_, s1_, c1_, t_ + dt, dr1_, ds1_);
        for (int p = 2; p < n_ + 2; ++p) {
            r_[p] += 0.5 * dt * (dr0_[p] + dr1_[p]);
            s_[p] += 0.5 * dt * (ds0_[p] + ds1_[p]);
        }
        t_ += dt;
        set_ghosts(r_, s_, t_);
        return refresh_c(r_, s_, c_, t_);
    }

    /// Central-difference gradients at interior nodes, one-sided at the two
    /// boundary nodes; returns max |r_x| and |s_x| and the witness node.
    void gradient_scan(double& max_gr, double& max_gs, int& witness) const {
        max_gr = 0.0;
        max_gs = 0.0;
        witness = 2;
        double best = -1.0;
        for (int p = 2; p < n_ + 2; ++p) {
            double gr = grad_r_at(p);
            double gs = grad_s_at(p);
            double agr = std::fabs(gr);
            double ags = std::fabs(gs);
            if (agr > max_gr) max_gr = agr;
            if (ags > max_gs) max_gs = ags;
            double a = std::max(agr, ags);
            if (a > best) {
                best = a;
                witness = p;
            }
        }
    }

    double grad_r_at(int p) const {
        if (p == 2) return (r_[3] - r_[2]) / dx_;
        if (p == n_ + 1) return (r_[n_ + 1] - r_[n_]) / dx_;
        return (r_[p + 1] - r_[p - 1]) / (2.0 * dx_);
    }
    double grad_s_at(int p) const {
        if (p == 2) return (s_[3] - s_[2]) / dx_;
        if (p == n_ + 1) return (s_[n_ + 1] - s_[n_]) / dx_;
        return (s_[p + 1] - s_[p - 1]) / (2.0 * dx_);
    }

    // Tolerates terminal vacuum states: a nonpositive Riemann gap maps to
    // u = +inf rather than throwing, so the last diagnostic row can be
    // recorded.
    double u_from_gap(double gap) const {
        if (std::isnan(gap)) return gap;
        if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
        return law_->eta_inverse(0.5 * gap);
    }

    MonitorSample monitors() const {
        MonitorSample m;
        m.t = t_;
        double r_min = r_[2], r_max = r_[2], s_min = s_[2], s_max = s_[2];
        double gap_min = s_[2] - r_[2], gap_max = gap_min;
        double sum_min = s_[2] + r_[2], sum_max = sum_min;
        for (int p = 2; p < n_ + 2; ++p) {
            double rv = r_[p], sv = s_[p];
            r_min = std::min(r_min, rv);
            r_max = std::max(r_max, rv);
            s_min = std::min(s_min, sv);
            s_max = std::max(s_max, sv);
            double gap = sv - rv, sum = sv + rv;
            gap_min = std::min(gap_min, gap);
            gap_max = std::max(gap_max, gap);
            sum_min = std::min(sum_min, sum);
            sum_max = std::max(sum_max, sum);
        }
        m.min_u = u_from_gap(gap_max);
        m.max_u = u_from_gap(gap_min);
        m.max_abs_v = 0.5 * std::max(std::fabs(sum_min), std::fabs(sum_max));
        int witness;
        gradient_scan(m.max_grad_r, m.max_grad_s, witness);
        m.phi_norm = std::max(r_max + s_max, -(r_min + s_min));
        m.psi_norm = std::max(s_max - r_min, r_max - s_min);
        m.max_abs_dp = m.min_u > 0.0 ? -law_->dpressure(m.min_u)
                                     : std::numeric_limits<double>::infinity();
        return m;
    }

    CrossingInfo crossing_scan() const {
        CrossingInfo info;
        info.crossed = true;
        info.t = t_;
        double max_abs = -1.0;
        double min_weighted = std::numeric_limits<double>::infinity();
        int witness = 2;
        for (int p = 2; p < n_ + 2; ++p) {
            double gr = grad_r_at(p);
            double gs = grad_s_at(p);
            double a = std::max(std::fabs(gr), std::fabs(gs));
            if (a > max_abs) {
                max_abs = a;
                witness = p;
            }
            double w = std::sqrt(c_[p]) * std::min(gr, gs);
            min_weighted = std::min(min_weighted, w);
        }
        info.witness_x = x_of(witness);
        info.witness_u = law_->eta_inverse(0.5 * (s_[witness] - r_[witness]));
        info.min_weighted_gradient = min_weighted;
        return info;
    }

    FieldState materialize() const {
        FieldState f;
        f.t = t_;
        f.u.resize(n_);
        f.v.resize(n_);
        f.r.resize(n_);
        f.s.resize(n_);
        f.c.resize(n_);
        for (int i = 0; i < n_; ++i) {
            int p = i + 2;
            f.r[i] = r_[p];
            f.s[i] = s_[p];
            f.c[i] = c_[p];
            f.u[i] = u_from_gap(s_[p] - r_[p]);
            f.v[i] = 0.5 * (r_[p] + s_[p]);
        }
        return f;
    }

  private:
    void set_ghosts(std::vector<double>& r, std::vector<double>& s, double t) const {
        double rl = far_->r_left(t), sl = far_->s_left(t);
        double rr = far_->r_right(t), sr = far_->s_right(t);
        r[0] = r[1] = rl;
        s[0] = s[1] = sl;
        r[n_ + 2] = r[n_ + 3] = rr;
        s[n_ + 2] = s[n_ + 3] = sr;
    }

    std::optional<Event> refresh_c(const std::vector<double>& r, const std::vector<double>& s,
                                   std::vector<double>& c, double t) {
        for (int p = 0; p < pad_; ++p) {
            double gap = s[p] - r[p];
            if (!(gap > vacuum_floor_)) {
                if (std::isfinite(gap)) {
                    return Event{EventType::VacuumEvent, t, x_of(p)};
                }
                return Event{EventType::NonFiniteEvent, t, x_of(p)};
            }
            if (!std::isfinite(gap)) {
                return Event{EventType::NonFiniteEvent, t, x_of(p)};
            }
            c[p] = law_->sound_speed_from_eta(0.5 * gap);
        }
        return std::nullopt;
    }

    void tendency(const std::vector<double>& r, const std::vector<double>& s,
                  const std::vector<double>& c, double t, std::vector<double>& dr,
                  std::vector<double>& ds) {
        const double inv_dx = 1.0 / dx_;

        // r is advected leftward at -c: upwind from the right.
        for (int p = 1; p < n_ + 3; ++p) {
            sig_[p] = minmod_slope(r[p] - r[p - 1], r[p + 1] - r[p]);
        }
        for (int p = 2; p < n_ + 2; ++p) {
            grad_up_[p] = ((r[p + 1] - r[p]) - 0.5 * (sig_[p + 1] - sig_[p])) * inv_dx;
            dr[p] = c[p] * grad_up_[p];
        }

        // s is advected rightward at +c: upwind from the left.
        for (int p = 1; p < n_ + 3; ++p) {
            sig_[p] = minmod_slope(s[p] - s[p - 1], s[p + 1] - s[p]);
        }
        for (int p = 2; p < n_ + 2; ++p) {
            grad_up_[p] = ((s[p] - s[p - 1]) + 0.5 * (sig_[p] - sig_[p - 1])) * inv_dx;
            ds[p] = -c[p] * grad_up_[p];
        }

        // Source -(a/2)(r+s) evaluated inside the stage.
        switch (model_->kind()) {
            case DampingModel::Kind::None:
                break;
            case DampingModel::Kind::PowerTime: {
                double half_a = 0.5 * model_->eval(t, 0.0).a;
                if (half_a != 0.0) {
                    for (int p = 2; p < n_ + 2; ++p) {
                        double src = -half_a * (r[p] + s[p]);
                        dr[p] += src;
                        ds[p] += src;
                    }
                }
                break;
            }
            case DampingModel::Kind::SpacePower: {
                for (int p = 2; p < n_ + 2; ++p) {
                    double src = -0.5 * a_static_[p] * (r[p] + s[p]);
                    dr[p] += src;
                    ds[p] += src;
                }
                break;
            }
            case DampingModel::Kind::Tabulated: {
                for (int p = 2; p < n_ + 2; ++p) {
                    double src = -0.5 * model_->eval(t, x_of(p)).a * (r[p] + s[p]);
                    dr[p] += src;
                    ds[p] += src;
                }
                break;
            }
        }
    }

    Grid1D grid_;
    const PressureLaw* law_;
    const DampingModel* model_;
    const FarField* far_;
    double vacuum_floor_;
    int n_, pad_;
    double dx_;
    double t_ = 0.0;
    std::vector<double> r_, s_, c_, r1_, s1_, c1_;
    std::vector<double> dr0_, ds0_, dr1_, ds1_;
    std::vector<double> sig_, grad_up_;
    std::vector<double> a_static_;
    bool static_profile_ = false;
};

} // namespace

void Grid1D::validate() const {
    if (n_cells < 16) {
        throw std::invalid_argument("grid needs n_cells >= 16, got " + std::to_string(n_cells));
    }
    if (!(x_right > x_left)) {
        throw std::invalid_argument("grid needs x_right > x_left");
    }
    if (!(dx() > 0.0)) {
        throw std::invalid_argument("grid spacing must be positive");
    }
}

std::string event_name(EventType e) {
    switch (e) {
        case EventType::HorizonReached: return "HorizonReached";
        case EventType::GradientBlowup: return "GradientBlowup";
        case EventType::VacuumEvent: return "VacuumEvent";
        case EventType::NonFiniteEvent: return "NonFiniteEvent";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- shapes

Shape Shape::zero() { return Shape{}; }

Shape Shape::gaussian() {
    Shape s;
    s.kind_ = Kind::Gaussian;
    return s;
}

Shape Shape::gaussian_slope1() {
    Shape s;
    s.kind_ = Kind::GaussianSlope1;
    return s;
}

Shape Shape::bump() {
    Shape s;
    s.kind_ = Kind::Bump;
    return s;
}

Shape Shape::tanh_step() {
    Shape s;
    s.kind_ = Kind::TanhStep;
    return s;
}

Shape Shape::parse(const std::string& text) {
    std::string name = text;
    double scale = 1.0;
    auto star = text.find('*');
    if (star != std::string::npos) {
        name = text.substr(0, star);
        std::string tail = text.substr(star + 1);
        std::size_t used = 0;
        try {
            scale = std::stod(tail, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad shape multiplier in '" + text + "'");
        }
        while (used < tail.size() && std::isspace(static_cast<unsigned char>(tail[used]))) ++used;
        if (used != tail.size()) {
            throw std::invalid_argument("bad shape multiplier in '" + text + "'");
        }
    }
    auto strip = [](std::string v) {
        auto b = v.find_first_not_of(" \t");
        auto e = v.find_last_not_of(" \t");
        return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
    };
    name = strip(name);
    Shape s;
    if (name == "zero") {
        s.kind_ = Kind::Zero;
    } else if (name == "gaussian") {
        s.kind_ = Kind::Gaussian;
    } else if (name == "gaussian_slope1") {
        s.kind_ = Kind::GaussianSlope1;
    } else if (name == "bump") {
        s.kind_ = Kind::Bump;
    } else if (name == "tanh_step") {
        s.kind_ = Kind::TanhStep;
    } else {
        throw std::invalid_argument("unknown shape '" + name + "'");
    }
    s.scale_ = scale;
    return s;
}

namespace {
// exp(1/2)/sqrt(2): rescales exp(-x^2) so the steepest slope is exactly -1.
const double kGaussSlope1 = std::exp(0.5) / std::sqrt(2.0);
} // namespace

double Shape::value(double x) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Gaussian: return scale_ * std::exp(-x * x);
        case Kind::GaussianSlope1: return scale_ * kGaussSlope1 * std::exp(-x * x);
        case Kind::Bump: {
            if (std::fabs(x) >= 3.0) return 0.0;
            double z = x / 3.0;
            double w = 1.0 - z * z;
            return scale_ * w * w;
        }
        case Kind::TanhStep: return scale_ * 0.5 * (1.0 + std::tanh(x));
    }
    return 0.0;
}

double Shape::deriv(double x) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Gaussian: return scale_ * -2.0 * x * std::exp(-x * x);
        case Kind::GaussianSlope1: return scale_ * kGaussSlope1 * -2.0 * x * std::exp(-x * x);
        case Kind::Bump: {
            if (std::fabs(x) >= 3.0) return 0.0;
            double z = x / 3.0;
            return scale_ * 2.0 * (1.0 - z * z) * (-2.0 * x / 9.0);
        }
        case Kind::TanhStep: {
            double c = std::cosh(x);
            return scale_ * 0.5 / (c * c);
        }
    }
    return 0.0;
}

double Shape::left_limit() const { return 0.0; }

double Shape::right_limit() const { return kind_ == Kind::TanhStep ? scale_ : 0.0; }

double Shape::support_radius() const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Gaussian:
        case Kind::GaussianSlope1: return 6.0;
        case Kind::Bump: return 3.0;
        case Kind::TanhStep: return 19.0;
    }
    return 0.0;
}

std::string Shape::describe() const {
    std::string name;
    switch (kind_) {
        case Kind::Zero: name = "zero"; break;
        case Kind::Gaussian: name = "gaussian"; break;
        case Kind::GaussianSlope1: name = "gaussian_slope1"; break;
        case Kind::Bump: name = "bump"; break;
        case Kind::TanhStep: name = "tanh_step"; break;
    }
    if (scale_ != 1.0) {
        name += "*" + std::to_string(scale_);
    }
    return name;
}

// --------------------------------------------------------- initial data

double InitialDataFamily::u0(double x) const {
    if (is_explicit()) return interp_clamped(explicit_x, explicit_u, x);
    return u_minus + epsilon * phi.value(x);
}

double InitialDataFamily::v0(double x) const {
    if (is_explicit()) return interp_clamped(explicit_x, explicit_v, x);
    return v_minus + epsilon * psi.value(x);
}

double InitialDataFamily::du0(double x) const {
    if (is_explicit()) return interp_slope(explicit_x, explicit_u, x);
    return epsilon * phi.deriv(x);
}

double InitialDataFamily::dv0(double x) const {
    if (is_explicit()) return interp_slope(explicit_x, explicit_v, x);
    return epsilon * psi.deriv(x);
}

double InitialDataFamily::u_left_far() const {
    return is_explicit() ? explicit_u.front() : u_minus + epsilon * phi.left_limit();
}

double InitialDataFamily::v_left_far() const {
    return is_explicit() ? explicit_v.front() : v_minus + epsilon * psi.left_limit();
}

double InitialDataFamily::u_right_far() const {
    return is_explicit() ? explicit_u.back() : u_minus + epsilon * phi.right_limit();
}

double InitialDataFamily::v_right_far() const {
    return is_explicit() ? explicit_v.back() : v_minus + epsilon * psi.right_limit();
}

double InitialDataFamily::support_radius() const {
    if (is_explicit()) {
        return std::max(std::fabs(explicit_x.front()), std::fabs(explicit_x.back()));
    }
    if (epsilon == 0.0) return 0.0;
    return std::max(phi.support_radius(), psi.support_radius());
}

// ----------------------------------------------------------------- ops

FieldState make_initial(const InitialDataFamily& family, const Grid1D& grid,
                        const PressureLaw& law) {
    grid.validate();
    if (!(family.delta0 > 0.0)) {
        throw std::invalid_argument("delta0 must be positive");
    }
    if (family.epsilon < 0.0) {
        throw std::invalid_argument("epsilon must be nonnegative");
    }
    double radius = family.support_radius();
    if (!family.is_explicit() && radius > 0.0) {
        if (grid.x_left > -radius || grid.x_right < radius) {
            throw std::invalid_argument(
                "grid does not contain the initial-data support (|x| <= " +
                std::to_string(radius) + ")");
        }
    }
    FieldState f;
    f.t = 0.0;
    int n = grid.n_cells;
    f.u.resize(n);
    f.v.resize(n);
    f.r.resize(n);
    f.s.resize(n);
    f.c.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = grid.x(i);
        double u = family.u0(x);
        double v = family.v0(x);
        if (u < family.delta0) {
            throw std::invalid_argument("u0(" + std::to_string(x) + ") = " + std::to_string(u) +
                                        " violates the floor delta0 = " +
                                        std::to_string(family.delta0));
        }
        f.u[i] = u;
        f.v[i] = v;
        auto [r, s] = law.to_riemann(u, v);
        f.r[i] = r;
        f.s[i] = s;
        f.c[i] = law.sound_speed(u);
    }
    return f;
}

double cfl_dt(const FieldState& state, const Grid1D& grid, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw std::invalid_argument("cfl must lie in (0, 1]");
    }
    double cmax = 0.0;
    for (double c : state.c) {
        if (!std::isfinite(c) || c <= 0.0) {
            throw std::invalid_argument("state has invalid sound speeds");
        }
        cmax = std::max(cmax, c);
    }
    return cfl * grid.dx() / cmax;
}

StepResult step(const FieldState& state, const Grid1D& grid, const PressureLaw& law,
                const DampingModel& model, const InitialDataFamily& family, double dt,
                double vacuum_floor) {
    FarField far(family, model, grid, law);
    Stepper stepper(grid, law, model, far, vacuum_floor);
    stepper.load(state);
    auto ev = stepper.advance(dt);
    StepResult out{stepper.materialize(), std::nullopt};
    if (ev) out.event = *ev;
    return out;
}

double required_domain_radius(const RunConfig& config) {
    PressureLaw law(config.gamma);
    double radius = config.family.support_radius();
    // Fastest initial signal speed over the grid and the far fields.
    double cmax = std::max(law.sound_speed(config.family.u_left_far()),
                           law.sound_speed(config.family.u_right_far()));
    for (int i = 0; i < config.grid.n_cells; ++i) {
        double u = config.family.u0(config.grid.x(i));
        if (u > 0.0) cmax = std::max(cmax, law.sound_speed(u));
    }
    return radius + cmax * config.t_max;
}

Trajectory run(const RunConfig& config) {
    PressureLaw law(config.gamma);
    config.grid.validate();
    if (!(config.t_max > 0.0)) {
        throw std::invalid_argument("t_max must be positive");
    }
    if (config.enforce_domain) {
        double need = required_domain_radius(config);
        if (config.grid.x_right < need || config.grid.x_left > -need) {
            throw std::invalid_argument(
                "domain [" + std::to_string(config.grid.x_left) + ", " +
                std::to_string(config.grid.x_right) +
                "] cannot contain the support inflated by max c * t_max = " +
                std::to_string(need) + "; enlarge the grid or reduce t_max");
        }
    }

    FieldState init = make_initial(config.family, config.grid, law);
    FarField far(config.family, config.model, config.grid, law);
    Stepper stepper(config.grid, law, config.model, far, config.vacuum_floor);
    stepper.load(init);

    Trajectory traj;
    traj.grid = config.grid;
    traj.dx = config.grid.dx();
    traj.gamma = config.gamma;
    traj.u_minus = config.family.u_left_far();
    traj.v_minus = config.family.v_left_far();

    double g0_r, g0_s;
    int witness0;
    stepper.gradient_scan(g0_r, g0_s, witness0);
    traj.initial_max_gradient = std::max(g0_r, g0_s);
    double threshold = config.gradient_threshold > 0.0
                           ? config.gradient_threshold
                           : 1e4 * std::max(1.0, traj.initial_max_gradient);
    traj.gradient_threshold_used = threshold;

    traj.monitors.push_back(stepper.monitors());
    if (config.snapshot_stride > 0) {
        traj.snapshots.push_back(stepper.materialize());
    }

    const double t_eps = 1e-12;
    double next_record = config.record_interval;
    long step_count = 0;
    bool done = false;
    while (!done) {
        double dt = config.cfl * config.grid.dx() / stepper.max_c();
        double t = stepper.time();
        dt = std::min(dt, config.t_max - t);
        if (config.record_interval > 0.0 && next_record > t) {
            dt = std::min(dt, next_record - t);
        }
        if (dt <= t_eps) {
            traj.terminal = Event{EventType::HorizonReached, stepper.time(), 0.0};
            if (traj.monitors.back().t < stepper.time() - t_eps) {
                traj.monitors.push_back(stepper.monitors());
            }
            break;
        }

        auto ev = stepper.advance(dt);
        ++step_count;
        if (ev) {
            traj.terminal = *ev;
            done = true;
        } else {
            if (config.snapshot_stride > 0 && step_count % config.snapshot_stride == 0) {
                traj.snapshots.push_back(stepper.materialize());
            }
            double max_gr, max_gs;
            int witness;
            stepper.gradient_scan(max_gr, max_gs, witness);
            if (std::max(max_gr, max_gs) >= threshold) {
                traj.crossing = stepper.crossing_scan();
                traj.terminal =
                    Event{EventType::GradientBlowup, stepper.time(), traj.crossing.witness_x};
                done = true;
            } else if (stepper.time() >= config.t_max - t_eps) {
                traj.terminal = Event{EventType::HorizonReached, stepper.time(), 0.0};
                done = true;
            }
        }

        bool record_now = done || (config.record_interval > 0.0 &&
                                   stepper.time() >= next_record - t_eps);
        if (record_now) {
            traj.monitors.push_back(stepper.monitors());
            while (next_record <= stepper.time() + t_eps) next_record += config.record_interval;
        }
    }

    if (config.snapshot_stride > 0 &&
        (traj.snapshots.empty() || traj.snapshots.back().t < stepper.time() - t_eps)) {
        traj.snapshots.push_back(stepper.materialize());
    }
    traj.final_state = stepper.materialize();
    return traj;
}

} // namespace delab
