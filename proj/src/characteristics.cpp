#include "delab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace delab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Linear interpolation helpers over one snapshot.
struct SnapshotView {
    const FieldState* state;
    const Grid1D* grid;

    double locate(double x) const {
        double pos = (x - grid->x_left) / grid->dx() - 0.5;
        if (pos < 0.0 || pos > grid->n_cells - 1.0) {
            throw PathLeftDomain(state->t, x);
        }
        return pos;
    }

    double field(const std::vector<double>& f, double x) const {
        double pos = locate(x);
        int j = std::min(static_cast<int>(pos), grid->n_cells - 2);
        double w = pos - j;
        return (1.0 - w) * f[j] + w * f[j + 1];
    }

    double grad(const std::vector<double>& f, double x) const {
        double pos = locate(x);
        int j = std::min(static_cast<int>(pos), grid->n_cells - 2);
        double w = pos - j;
        return (1.0 - w) * grad_at(f, j) + w * grad_at(f, j + 1);
    }

    double grad_at(const std::vector<double>& f, int i) const {
        int n = grid->n_cells;
        double dx = grid->dx();
        if (i == 0) return (f[1] - f[0]) / dx;
        if (i == n - 1) return (f[n - 1] - f[n - 2]) / dx;
        return (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
};

double bisect_increasing(const std::function<double(double)>& g, double target, double lo,
                         double hi) {
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

CharacteristicPath trace(const Trajectory& run_output, const DampingModel& model,
                         double start_x, int sign, double t_end) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("characteristic sign must be +1 or -1");
    }
    const auto& snaps = run_output.snapshots;
    if (snaps.size() < 2) {
        throw std::invalid_argument("trace needs a run with at least two stored snapshots "
                                    "(snapshot_stride > 0)");
    }

    CharacteristicPath path;
    path.sign = sign;
    double x = start_x;

    auto record = [&](const FieldState& st) {
        SnapshotView view{&st, &run_output.grid};
        PathNode node;
        node.t = st.t;
        node.x = x;
        node.u = view.field(st.u, x);
        node.r = view.field(st.r, x);
        node.s = view.field(st.s, x);
        node.grad_r = view.grad(st.r, x);
        node.grad_s = view.grad(st.s, x);
        path.nodes.push_back(node);
    };

    record(snaps.front());
    for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
        if (snaps[k].t >= t_end) break;
        const auto& a = snaps[k];
        const auto& b = snaps[k + 1];
        SnapshotView va{&a, &run_output.grid};
        SnapshotView vb{&b, &run_output.grid};
        double dt = b.t - a.t;
        double k1 = sign * va.field(a.c, x);
        double k2 = sign * vb.field(b.c, x + dt * k1);
        x += 0.5 * dt * (k1 + k2);
        record(b);
        if (b.t >= t_end) break;
    }

    if (model.x_independent()) {
        path.amplification.reserve(path.nodes.size());
        for (const auto& node : path.nodes) {
            path.amplification.push_back(model.amplification(node.t));
        }
    } else {
        std::vector<double> ts, xs;
        ts.reserve(path.nodes.size());
        xs.reserve(path.nodes.size());
        for (const auto& node : path.nodes) {
            ts.push_back(node.t);
            xs.push_back(node.x);
        }
        path.amplification = model.path_amplification(ts, xs);
    }
    return path;
}

PathFunctionals along_path_functionals(const CharacteristicPath& path, const PressureLaw& law,
                                       const DampingModel& model) {
    if (path.nodes.empty()) {
        throw std::invalid_argument("along_path_functionals requires a nonempty path");
    }
    PathFunctionals out;
    std::size_t n = path.nodes.size();
    out.t.resize(n);
    out.y.resize(n);
    out.q.resize(n);
    out.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = path.nodes[i];
        double amp = path.amplification[i];
        double sc = std::sqrt(law.sound_speed(node.u));
        out.t[i] = node.t;
        out.y[i] = amp * sc * node.grad_r;
        out.q[i] = amp * sc * node.grad_s;
        out.theta[i] = law.theta(node.u);
    }
    return out;
}

double riccati_blowup_time(double y0, const DampingModel& model, double coeff) {
    if (!(coeff > 0.0)) {
        throw std::invalid_argument("riccati_blowup_time requires coeff > 0");
    }
    if (!model.x_independent()) {
        throw std::invalid_argument("riccati_blowup_time requires an x-independent model");
    }
    if (y0 >= 0.0) return kInf;
    double mass = 1.0 / (-y0 * coeff);
    if (mass >= model.reciprocal_integral_total()) return kInf;
    double lambda = model.lambda();
    double mu = model.mu();
    if (lambda == 0.0) return mass;
    if (mu == 1.0) {
        if (lambda == 2.0) return std::expm1(mass);
        double e = 1.0 - 0.5 * lambda;
        return std::pow(1.0 + e * mass, 1.0 / e) - 1.0;
    }
    double hi = 1.0;
    while (model.amplification_reciprocal_integral(hi) < mass) {
        hi *= 2.0;
        if (hi > 1e12) return kInf;
    }
    return bisect_increasing(
        [&](double t) { return model.amplification_reciprocal_integral(t); }, mass, 0.0, hi);
}

double riccati_continuation_time(double t0, double y0, const DampingModel& model, double coeff) {
    if (!(coeff > 0.0)) {
        throw std::invalid_argument("riccati_continuation_time requires coeff > 0");
    }
    if (y0 >= 0.0) return kInf;
    double mass = 1.0 / (-y0 * coeff);
    if (!model.x_independent()) {
        // Bounded-amplification approximation: with y0 already carrying the
        // local amplification, A cancels from the frozen-coefficient tail.
        return mass;
    }
    double i0 = model.amplification_reciprocal_integral(t0);
    double total = model.reciprocal_integral_total();
    if (std::isfinite(total) && i0 + mass >= total) return kInf;
    double lambda = model.lambda();
    double mu = model.mu();
    if (lambda == 0.0) return mass;
    if (mu == 1.0) {
        if (lambda == 2.0) return (1.0 + t0) * std::expm1(mass);
        double e = 1.0 - 0.5 * lambda;
        return std::pow(std::pow(1.0 + t0, e) + e * mass, 1.0 / e) - 1.0 - t0;
    }
    double hi = std::max(1.0, t0);
    while (model.amplification_reciprocal_integral(t0 + hi) - i0 < mass) {
        hi *= 2.0;
        if (hi > 1e12) return kInf;
    }
    double t_star = bisect_increasing(
        [&](double t) { return model.amplification_reciprocal_integral(t); }, i0 + mass, t0,
        t0 + hi);
    return t_star - t0;
}

LaxIdentityTerms lax_identity_terms(const CharacteristicPath& path, const PressureLaw& law,
                                    const DampingModel& model) {
    if (path.nodes.empty()) {
        throw std::invalid_argument("lax identity needs a nonempty path");
    }
    std::size_t n = path.nodes.size();
    double gamma = law.gamma();

    // Pointwise ingredients along the path. The identity is invariant to an
    // additive constant in theta; anchoring theta at the path start makes
    // every term vanish identically on constant states instead of only
    // cancelling in exact arithmetic.
    const double theta_anchor = law.theta(path.nodes[0].u);
    std::vector<double> f(n), theta(n), g1(n), g2(n), g3(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = path.nodes[i];
        double amp = path.amplification[i];
        double c = law.sound_speed(node.u);
        double sc = std::sqrt(c);
        double grad = path.sign < 0 ? node.grad_r : node.grad_s;
        f[i] = amp * sc * grad;
        theta[i] = law.theta(node.u) - theta_anchor;
        DampingValue dv = model.eval(node.t, node.x);
        double a_path_rate = dv.a_t + path.sign * c * dv.a_x;
        g1[i] = amp * (0.5 * dv.a * dv.a + a_path_rate) * theta[i];
        g2[i] = amp * dv.a_x * sc * (node.r + node.s);
        g3[i] = (1.0 / amp) * std::pow(node.u, (gamma - 3.0) / 4.0) * f[i] * f[i];
    }

    LaxIdentityTerms out;
    out.f_start = f[0];
    out.f_end = f[n - 1];
    double a0 = model.eval(path.nodes[0].t, path.nodes[0].x).a;

    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            double h = path.nodes[i].t - path.nodes[i - 1].t;
            t1 += 0.5 * h * (g1[i] + g1[i - 1]);
            t2 += 0.5 * h * (g2[i] + g2[i - 1]);
            t3 += 0.5 * h * (g3[i] + g3[i - 1]);
        }
        double a_i = model.eval(path.nodes[i].t, path.nodes[i].x).a;
        double boundary =
            -0.5 * (path.amplification[i] * a_i * theta[i] - a0 * theta[0]);
        double rhs = f[0] + boundary + 0.5 * t1 - 0.5 * t2 - 0.25 * (gamma + 1.0) * t3;
        double res = std::fabs(f[i] - rhs);
        if (res > out.max_residual) out.max_residual = res;
        if (i == n - 1) {
            out.boundary_term = boundary;
            out.theta_integral = 0.5 * t1;
            out.ax_integral = -0.5 * t2;
            out.riccati_integral = -0.25 * (gamma + 1.0) * t3;
        }
    }
    return out;
}

double lax_identity_residual(const CharacteristicPath& path, const PressureLaw& law,
                             const DampingModel& model) {
    return lax_identity_terms(path, law, model).max_residual;
}

} // namespace delab
