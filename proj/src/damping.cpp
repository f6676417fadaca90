#include "delab/damping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "delab/quadrature.hpp"

namespace delab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the interpolation cell for value q in an ascending grid; the
// returned i satisfies grid[i] <= q <= grid[i+1] after clamping.
std::size_t cell_index(const std::vector<double>& grid, double q) {
    if (q <= grid.front()) return 0;
    if (q >= grid.back()) return grid.size() - 2;
    auto it = std::upper_bound(grid.begin(), grid.end(), q);
    return static_cast<std::size_t>(it - grid.begin()) - 1;
}

} // namespace

DampingModel DampingModel::none() {
    DampingModel m;
    m.kind_ = Kind::None;
    m.lambda_ = 0.0;
    m.mu_ = 1.0;
    return m;
}

DampingModel DampingModel::power_time(double lambda, double mu) {
    if (lambda < 0.0 || mu < 0.0) {
        throw std::invalid_argument("power_time damping requires lambda >= 0 and mu >= 0");
    }
    DampingModel m;
    m.kind_ = Kind::PowerTime;
    m.lambda_ = lambda;
    m.mu_ = mu;
    return m;
}

DampingModel DampingModel::space_power(double amplitude, double mu) {
    if (amplitude < 0.0 || mu < 0.0) {
        throw std::invalid_argument("space_power damping requires amplitude >= 0 and mu >= 0");
    }
    DampingModel m;
    m.kind_ = Kind::SpacePower;
    m.lambda_ = amplitude;
    m.mu_ = mu;
    return m;
}

DampingModel DampingModel::tabulated(std::vector<double> t_grid, std::vector<double> x_grid,
                                     std::vector<double> values) {
    if (t_grid.size() < 2 || x_grid.size() < 2) {
        throw std::invalid_argument("tabulated damping needs at least a 2x2 grid");
    }
    if (values.size() != t_grid.size() * x_grid.size()) {
        throw std::invalid_argument("tabulated damping value count does not match grid");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("tabulated damping t grid must be strictly increasing");
        }
    }
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1])) {
            throw std::invalid_argument("tabulated damping x grid must be strictly increasing");
        }
    }
    for (double v : values) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("tabulated damping values must be nonnegative");
        }
    }
    DampingModel m;
    m.kind_ = Kind::Tabulated;
    m.t_grid_ = std::move(t_grid);
    m.x_grid_ = std::move(x_grid);
    m.table_ = std::move(values);
    return m;
}

DampingModel DampingModel::tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open damping table: " + path);
    }
    std::size_t nt = 0, nx = 0;
    if (!(in >> nt >> nx) || nt < 2 || nx < 2) {
        throw std::runtime_error("damping table header must be 't-count x-count' with counts >= 2");
    }
    std::vector<double> tg(nt), xg(nx), vals(nt * nx);
    for (auto& v : tg) {
        if (!(in >> v)) throw std::runtime_error("damping table: truncated t grid");
    }
    for (auto& v : xg) {
        if (!(in >> v)) throw std::runtime_error("damping table: truncated x grid");
    }
    for (auto& v : vals) {
        if (!(in >> v)) throw std::runtime_error("damping table: truncated values");
    }
    return tabulated(std::move(tg), std::move(xg), std::move(vals));
}

DampingValue DampingModel::eval_tabulated(double t, double x) const {
    std::size_t i = cell_index(t_grid_, t);
    std::size_t j = cell_index(x_grid_, x);
    double t0 = t_grid_[i], t1 = t_grid_[i + 1];
    double x0 = x_grid_[j], x1 = x_grid_[j + 1];
    // Clamped extrapolation: freeze the local coordinate at the edge, keep
    // the interpolant's slope as the derivative inside the table and zero
    // it outside.
    double wt = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    double wx = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
    auto at = [&](std::size_t ti, std::size_t xi) { return table_[ti * x_grid_.size() + xi]; };
    double f00 = at(i, j), f01 = at(i, j + 1), f10 = at(i + 1, j), f11 = at(i + 1, j + 1);
    double a = (1 - wt) * ((1 - wx) * f00 + wx * f01) + wt * ((1 - wx) * f10 + wx * f11);
    bool inside_t = t >= t_grid_.front() && t <= t_grid_.back();
    bool inside_x = x >= x_grid_.front() && x <= x_grid_.back();
    double a_t = inside_t ? ((1 - wx) * (f10 - f00) + wx * (f11 - f01)) / (t1 - t0) : 0.0;
    double a_x = inside_x ? ((1 - wt) * (f01 - f00) + wt * (f11 - f10)) / (x1 - x0) : 0.0;
    return {a, a_t, a_x};
}

DampingValue DampingModel::eval(double t, double x) const {
    switch (kind_) {
        case Kind::None:
            return {0.0, 0.0, 0.0};
        case Kind::PowerTime: {
            double base = 1.0 + t;
            double a = lambda_ * std::pow(base, -mu_);
            return {a, -mu_ * a / base, 0.0};
        }
        case Kind::SpacePower: {
            double ax = std::fabs(x);
            double base = 1.0 + ax;
            double a = lambda_ * std::pow(base, -mu_);
            // Symmetric in x; the derivative at the ridge x = 0 is taken as 0.
            double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            return {a, 0.0, -sign * mu_ * a / base};
        }
        case Kind::Tabulated:
            return eval_tabulated(t, x);
    }
    return {0.0, 0.0, 0.0};
}

double DampingModel::amplification(double t) const {
    if (!x_independent()) {
        throw std::logic_error(
            "amplification is defined for x-independent damping only; use path_amplification");
    }
    if (t < 0.0) {
        throw std::invalid_argument("amplification requires t >= 0");
    }
    if (lambda_ == 0.0) return 1.0;
    if (mu_ == 1.0) {
        return std::pow(1.0 + t, 0.5 * lambda_);
    }
    return std::exp(0.5 * lambda_ * (std::pow(1.0 + t, 1.0 - mu_) - 1.0) / (1.0 - mu_));
}

double DampingModel::amplification_reciprocal_integral(double t) const {
    if (!x_independent()) {
        throw std::logic_error(
            "amplification_reciprocal_integral is defined for x-independent damping only");
    }
    if (t < 0.0) {
        throw std::invalid_argument("amplification_reciprocal_integral requires t >= 0");
    }
    if (lambda_ == 0.0) return t;
    if (mu_ == 1.0) {
        if (lambda_ == 2.0) return std::log1p(t);
        double e = 1.0 - 0.5 * lambda_;
        return (std::pow(1.0 + t, e) - 1.0) / e;
    }
    return integrate_adaptive([this](double tau) { return 1.0 / amplification(tau); }, 0.0, t,
                              1e-10);
}

double DampingModel::reciprocal_integral_total() const {
    if (!x_independent()) {
        throw std::logic_error("reciprocal_integral_total is defined for x-independent damping");
    }
    if (lambda_ == 0.0) return kInf;
    if (mu_ == 1.0) {
        // (1+t)^(-lambda/2): integrable iff lambda > 2.
        return lambda_ > 2.0 ? 1.0 / (0.5 * lambda_ - 1.0) : kInf;
    }
    if (mu_ > 1.0) {
        // A(t) converges to a finite constant, so A^-1 is not integrable.
        return kInf;
    }
    // mu < 1: A^-1 decays like exp(-kappa (1+t)^(1-mu)); integrate until the
    // tail is negligible.
    double total = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 80; ++iter) {
        total += integrate_adaptive([this](double tau) { return 1.0 / amplification(tau); }, lo,
                                    hi, 1e-12);
        if (1.0 / amplification(hi) * hi < 1e-14) break;
        lo = hi;
        hi *= 2.0;
    }
    return total;
}

std::vector<double> DampingModel::path_amplification(std::span<const double> times,
                                                     std::span<const double> xs) const {
    if (times.empty() || times.size() != xs.size()) {
        throw std::invalid_argument("path_amplification requires a nonempty path");
    }
    std::vector<double> out(times.size());
    double acc = 0.0;
    double prev = eval(times[0], xs[0]).a;
    out[0] = 1.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double cur = eval(times[i], xs[i]).a;
        acc += 0.25 * (prev + cur) * (times[i] - times[i - 1]);
        out[i] = std::exp(acc);
        prev = cur;
    }
    return out;
}

ValidationReport validate_bounds(const DampingModel& model, const HypothesisSpec& hypothesis,
                                 const LatticeSpec& lattice) {
    if (!(hypothesis.mu > 1.0)) {
        throw std::invalid_argument("decay hypotheses require mu > 1");
    }
    if (lattice.nt < 2 || lattice.nx < 2) {
        throw std::invalid_argument("validation lattice needs at least 2 points per axis");
    }
    ValidationReport rep;
    rep.min_a = kInf;
    double dt = (lattice.t_max - lattice.t_min) / (lattice.nt - 1);
    double dx = (lattice.x_max - lattice.x_min) / (lattice.nx - 1);
    for (int it = 0; it < lattice.nt; ++it) {
        double t = lattice.t_min + it * dt;
        for (int ix = 0; ix < lattice.nx; ++ix) {
            double x = lattice.x_min + ix * dx;
            DampingValue v = model.eval(t, x);
            rep.min_a = std::min(rep.min_a, v.a);
            double decay = hypothesis.kind == DecayHypothesis::TimeDecay
                               ? std::pow(1.0 + t, -hypothesis.mu)
                               : std::pow(1.0 + std::fabs(x), -hypothesis.mu);
            double amp_ratio = v.a / (hypothesis.amp_bound * decay);
            if (amp_ratio > rep.worst_amp_ratio) {
                rep.worst_amp_ratio = amp_ratio;
                rep.amp_witness_t = t;
                rep.amp_witness_x = x;
            }
            double deriv_ratio =
                (std::fabs(v.a_t) + std::fabs(v.a_x)) / (hypothesis.deriv_bound * decay);
            if (deriv_ratio > rep.worst_deriv_ratio) {
                rep.worst_deriv_ratio = deriv_ratio;
                rep.deriv_witness_t = t;
                rep.deriv_witness_x = x;
            }
        }
    }
    rep.nonneg_ok = rep.min_a >= 0.0;
    rep.amp_ok = rep.worst_amp_ratio <= 1.0;
    rep.deriv_ok = rep.worst_deriv_ratio <= 1.0;
    rep.pass = rep.nonneg_ok && rep.amp_ok && rep.deriv_ok;
    return rep;
}

} // namespace delab
