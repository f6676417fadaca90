#include "delab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace delab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extremes {
    double r_min, r_max, s_min, s_max;
};

Extremes extremes(const FieldState& state) {
    Extremes e{state.r[0], state.r[0], state.s[0], state.s[0]};
    for (int i = 0; i < state.size(); ++i) {
        e.r_min = std::min(e.r_min, state.r[i]);
        e.r_max = std::max(e.r_max, state.r[i]);
        e.s_min = std::min(e.s_min, state.s[i]);
        e.s_max = std::max(e.s_max, state.s[i]);
    }
    return e;
}

double grad_at(const std::vector<double>& f, int i, int n, double dx) {
    if (i == 0) return (f[1] - f[0]) / dx;
    if (i == n - 1) return (f[n - 1] - f[n - 2]) / dx;
    return (f[i + 1] - f[i - 1]) / (2.0 * dx);
}

/// Classifies a finished run by the first monitor crossing, with the tie
/// order gradient, vacuum, pressure derivative.
BlowupClass classify(const Trajectory& traj) {
    if (traj.terminal.type == EventType::NonFiniteEvent) return BlowupClass::NonFiniteEvent;
    const auto& rows = traj.monitors;
    double g_thresh = traj.gradient_threshold_used;
    double u_thresh = 1e4 * std::max(1.0, rows.front().max_u);
    double dp_thresh = 1e4 * std::max(1.0, rows.front().max_abs_dp);
    for (const auto& row : rows) {
        if (std::max(row.max_grad_r, row.max_grad_s) >= g_thresh) {
            return BlowupClass::GradientBlowup;
        }
        if (row.max_u >= u_thresh) return BlowupClass::VacuumEvent;
        if (row.max_abs_dp >= dp_thresh) return BlowupClass::PressureDerivativeBlowup;
    }
    switch (traj.terminal.type) {
        case EventType::GradientBlowup: return BlowupClass::GradientBlowup;
        case EventType::VacuumEvent: return BlowupClass::VacuumEvent;
        default: return BlowupClass::HorizonReached;
    }
}

double lifespan_sample(const Trajectory& traj, BlowupClass cls, const PressureLaw& law,
                       const DampingModel& model, const DetectOptions& options) {
    if (cls != BlowupClass::GradientBlowup || !options.riccati_tail_correction ||
        !traj.crossing.crossed) {
        return traj.terminal.t;
    }
    double y_hat = traj.crossing.min_weighted_gradient;
    if (!(y_hat < 0.0)) return traj.terminal.t;
    double gamma = law.gamma();
    double coeff = 0.25 * (gamma + 1.0) * std::pow(traj.crossing.witness_u, (gamma - 3.0) / 4.0);
    double y0 = y_hat;
    if (model.x_independent()) {
        y0 *= model.amplification(traj.crossing.t);
    }
    double tail = riccati_continuation_time(traj.crossing.t, y0, model, coeff);
    if (!std::isfinite(tail)) return traj.terminal.t;
    return traj.crossing.t + tail;
}

} // namespace

double phi_norm(const FieldState& state) {
    if (state.size() == 0) throw std::invalid_argument("phi_norm needs a nonempty state");
    Extremes e = extremes(state);
    return std::max(e.r_max + e.s_max, -(e.r_min + e.s_min));
}

double psi_norm(const FieldState& state) {
    if (state.size() == 0) throw std::invalid_argument("psi_norm needs a nonempty state");
    Extremes e = extremes(state);
    return std::max(e.s_max - e.r_min, e.r_max - e.s_min);
}

std::string blowup_class_name(BlowupClass c) {
    switch (c) {
        case BlowupClass::GradientBlowup: return "GradientBlowup";
        case BlowupClass::VacuumEvent: return "VacuumEvent";
        case BlowupClass::PressureDerivativeBlowup: return "PressureDerivativeBlowup";
        case BlowupClass::HorizonReached: return "HorizonReached";
        case BlowupClass::NonFiniteEvent: return "NonFiniteEvent";
    }
    return "Unknown";
}

AprioriReport check_apriori(const Trajectory& traj, const PressureLaw& law,
                            const DampingModel& model, double tolerance_per_dx) {
    AprioriReport rep;
    const auto& rows = traj.monitors;
    if (rows.empty()) throw std::invalid_argument("check_apriori needs a recorded trajectory");
    double slack = tolerance_per_dx * traj.dx;
    double phi0 = rows.front().phi_norm;
    double psi0 = rows.front().psi_norm;

    rep.phi_monotone.applicable = true;
    rep.psi_monotone.applicable = true;
    for (const auto& row : rows) {
        double dphi = row.phi_norm - phi0;
        if (dphi > rep.phi_monotone.worst_margin) {
            rep.phi_monotone.worst_margin = dphi;
            rep.phi_monotone.witness_t = row.t;
        }
        double dpsi = row.psi_norm - psi0;
        if (dpsi > rep.psi_monotone.worst_margin) {
            rep.psi_monotone.worst_margin = dpsi;
            rep.psi_monotone.witness_t = row.t;
        }
    }
    rep.phi_monotone.pass = rep.phi_monotone.worst_margin <= slack;
    rep.psi_monotone.pass = rep.psi_monotone.worst_margin <= slack;

    // Far-field box: Phi(0) below the eta scale of u_- pins u into
    // [eta^-1(eta_- + 2 Phi0), eta^-1(eta_- - 2 Phi0)] and |v| under Phi0/2.
    double eta_minus = law.eta(traj.u_minus);
    if (phi0 < 0.5 * eta_minus) {
        rep.u_box.applicable = true;
        rep.v_bound.applicable = true;
        double lo = law.eta_inverse(eta_minus + 2.0 * phi0 + slack);
        double hi = law.eta_inverse(std::max(eta_minus - 2.0 * phi0 - slack, 1e-12));
        rep.delta1 = lo;
        rep.m1 = hi;
        for (const auto& row : rows) {
            double under = lo - row.min_u;
            double over = row.max_u - hi;
            double worst = std::max(under, over);
            if (worst > rep.u_box.worst_margin) {
                rep.u_box.worst_margin = worst;
                rep.u_box.witness_t = row.t;
            }
            double v_over = row.max_abs_v - (0.5 * phi0 + slack);
            if (v_over > rep.v_bound.worst_margin) {
                rep.v_bound.worst_margin = v_over;
                rep.v_bound.witness_t = row.t;
            }
        }
        rep.u_box.pass = rep.u_box.worst_margin <= 0.0;
        rep.v_bound.pass = rep.v_bound.worst_margin <= 0.0;
    }

    // Damped growth envelope for 1 < gamma < 3: u^{(3-gamma)/4} under
    // K (1+t)^{1-lambda/2} (mu = 1, lambda < 2), K log(e+t) (mu = 1,
    // lambda = 2), K (1+t) (mu > 1); K fitted on the early window and held.
    double gamma = law.gamma();
    bool envelope_regime = gamma > 1.0 && gamma < 3.0 && model.x_independent() &&
                           (model.lambda() == 0.0 ||
                            (model.mu() >= 1.0 && model.lambda() <= 2.0));
    if (envelope_regime && rows.size() >= 4) {
        rep.growth_envelope.applicable = true;
        double mu = model.lambda() == 0.0 ? 1.0 : model.mu();
        double lambda = model.lambda();
        auto env = [&](double t) {
            if (mu > 1.0) return 1.0 + t;
            if (lambda == 2.0) return std::log(std::exp(1.0) + t);
            return std::pow(1.0 + t, 1.0 - 0.5 * lambda);
        };
        double t_end = rows.back().t;
        double t_fit = std::min(9.0, 0.5 * t_end);
        double k_fit = 0.0;
        for (const auto& row : rows) {
            if (row.t > t_fit && k_fit > 0.0) break;
            k_fit = std::max(k_fit, std::pow(row.max_u, (3.0 - gamma) / 4.0) / env(row.t));
        }
        for (const auto& row : rows) {
            double m = std::pow(row.max_u, (3.0 - gamma) / 4.0);
            double over = m - (k_fit * env(row.t) + slack);
            if (over > rep.growth_envelope.worst_margin) {
                rep.growth_envelope.worst_margin = over;
                rep.growth_envelope.witness_t = row.t;
            }
        }
        rep.growth_envelope.pass = rep.growth_envelope.worst_margin <= 0.0;
    }

    // Space-decaying damping box u in [u_-/4, 4 u_-].
    if (!model.x_independent()) {
        rep.spatial_box.applicable = true;
        double u_minus = traj.u_minus;
        for (const auto& row : rows) {
            double under = (0.25 * u_minus - slack) - row.min_u;
            double over = row.max_u - (4.0 * u_minus + slack);
            double worst = std::max(under, over);
            if (worst > rep.spatial_box.worst_margin) {
                rep.spatial_box.worst_margin = worst;
                rep.spatial_box.witness_t = row.t;
            }
        }
        rep.spatial_box.pass = rep.spatial_box.worst_margin <= 0.0;
    }

    return rep;
}

BlowupReport detect_blowup(const RunConfig& config, int mesh_levels,
                           const DetectOptions& options) {
    if (mesh_levels < 2) {
        throw std::invalid_argument("detect_blowup needs at least 2 mesh levels");
    }
    PressureLaw law(config.gamma);
    BlowupReport rep;
    std::vector<double> samples;
    std::vector<BlowupClass> classes;
    Trajectory finest;
    for (int level = 0; level < mesh_levels; ++level) {
        RunConfig cfg = config;
        cfg.grid.n_cells = config.grid.n_cells << level;
        cfg.snapshot_stride = 0;
        Trajectory traj = run(cfg);
        BlowupClass cls = classify(traj);
        classes.push_back(cls);
        samples.push_back(lifespan_sample(traj, cls, law, config.model, options));
        rep.extrapolation.emplace_back(cfg.grid.dx(), samples.back());
        if (level == mesh_levels - 1) finest = std::move(traj);
    }
    for (std::size_t i = 1; i < classes.size(); ++i) {
        if (classes[i] != classes[0]) {
            throw InconsistentClassification(
                "mesh levels disagree on the event type: " + blowup_class_name(classes[0]) +
                " vs " + blowup_class_name(classes[i]) + " at level " + std::to_string(i));
        }
    }
    rep.event = classes[0];

    // Richardson on the two finest with the order measured from the last
    // three samples, clamped into the sample bracket.
    std::size_t n = samples.size();
    double est = samples[n - 1];
    if (n >= 3) {
        double d1 = samples[n - 2] - samples[n - 3];
        double d2 = samples[n - 1] - samples[n - 2];
        if (d1 * d2 > 0.0 && std::fabs(d2) < std::fabs(d1)) {
            double ratio = d1 / d2;
            rep.measured_order = std::log2(ratio);
            est = samples[n - 1] + d2 / (ratio - 1.0);
        }
    }
    double lo = *std::min_element(samples.begin(), samples.end());
    double hi = *std::max_element(samples.begin(), samples.end());
    rep.t_star_estimate = std::clamp(est, lo, hi);

    rep.witness_x = finest.terminal.witness_x;
    const auto& first = finest.monitors.front();
    const auto& last = finest.monitors.back();
    auto& b = rep.bounded_confirmed;
    b.sup_u0 = first.max_u;
    b.inv_inf_u0 = 1.0 / first.min_u;
    b.sup_v0 = first.max_abs_v;
    b.sup_dp0 = first.max_abs_dp;
    b.sup_u = last.max_u;
    b.inv_inf_u = 1.0 / last.min_u;
    b.sup_v = last.max_abs_v;
    b.sup_dp = last.max_abs_dp;
    b.u_upper = b.sup_u < 10.0 * b.sup_u0;
    b.u_lower = b.inv_inf_u < 10.0 * b.inv_inf_u0;
    b.v_sup = b.sup_v < 10.0 * std::max(b.sup_v0, 1e-12);
    b.dp_sup = b.sup_dp < 10.0 * b.sup_dp0;
    rep.m1 = 0.0;
    rep.delta1 = kInf;
    for (const auto& row : finest.monitors) {
        rep.m1 = std::max(rep.m1, row.max_u + row.max_abs_v);
        rep.delta1 = std::min(rep.delta1, row.min_u);
    }
    return rep;
}

double initial_min_weighted_gradient(const InitialDataFamily& family, const PressureLaw& law,
                                     double* witness_x) {
    double radius = std::max(family.support_radius(), 1.0);
    const int samples = 8192;
    double best = kInf;
    double best_x = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double x = -radius + 2.0 * radius * i / samples;
        double u = family.u0(x);
        if (!(u > 0.0)) continue;
        double c = law.sound_speed(u);
        double dv = family.dv0(x);
        double du = family.du0(x);
        double rx = dv + c * du;
        double sx = dv - c * du;
        double w = std::sqrt(c) * std::min(rx, sx);
        if (w < best) {
            best = w;
            best_x = x;
        }
    }
    if (witness_x) *witness_x = best_x;
    return best;
}

std::vector<SweepEntry> estimate_lifespan_sweep(const RunConfig& base,
                                                const std::vector<double>& epsilons,
                                                const SweepOptions& options) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) {
            throw std::invalid_argument("sweep epsilons must be positive");
        }
        if (i > 0 && epsilons[i] < epsilons[i - 1]) {
            throw std::invalid_argument("sweep epsilons must be sorted ascending");
        }
    }
    std::vector<SweepEntry> out(epsilons.size());
    PressureLaw law(base.gamma);

    auto job = [&](std::size_t idx) {
        SweepEntry& entry = out[idx];
        entry.epsilon = epsilons[idx];
        try {
            RunConfig cfg = base;
            cfg.family.epsilon = entry.epsilon;
            double witness = 0.0;
            double y0 = initial_min_weighted_gradient(cfg.family, law, &witness);
            double u_w = cfg.family.u0(witness);
            double coeff =
                0.25 * (base.gamma + 1.0) * std::pow(u_w, (base.gamma - 3.0) / 4.0);
            double oracle = y0 < 0.0 ? riccati_continuation_time(0.0, y0, base.model, coeff)
                                     : kInf;
            for (int attempt = 0; attempt < 2; ++attempt) {
                double horizon = base.t_max;
                if (std::isfinite(oracle)) {
                    horizon = options.t_max_factor * oracle * (attempt == 0 ? 1.0 : 2.0);
                }
                cfg.t_max = horizon;
                if (options.auto_domain) {
                    double c_needed = 0.0;
                    RunConfig probe = cfg;
                    probe.grid = base.grid;
                    c_needed = required_domain_radius(probe);
                    double dx = base.grid.dx();
                    int half_cells = static_cast<int>(std::ceil((c_needed + dx) / dx));
                    cfg.grid.x_left = -half_cells * dx;
                    cfg.grid.x_right = half_cells * dx;
                    cfg.grid.n_cells = 2 * half_cells;
                }
                BlowupReport rep = detect_blowup(cfg, options.mesh_levels, options.detect);
                entry.dx = cfg.grid.dx() / (1 << (options.mesh_levels - 1));
                entry.report = rep;
                entry.ok = true;
                bool expected_blowup = std::isfinite(oracle);
                if (rep.event != BlowupClass::HorizonReached || !expected_blowup) break;
                // Oracle under-predicted the lifespan: one doubled retry.
            }
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
        }
    };

    int jobs = std::max(1, options.jobs);
    if (jobs == 1 || epsilons.size() <= 1) {
        for (std::size_t i = 0; i < epsilons.size(); ++i) job(i);
    } else {
        std::vector<std::thread> workers;
        std::size_t next = 0;
        std::mutex mtx;
        auto worker = [&]() {
            while (true) {
                std::size_t idx;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (next >= epsilons.size()) return;
                    idx = next++;
                }
                job(idx);
            }
        };
        int count = std::min<std::size_t>(jobs, epsilons.size());
        workers.reserve(count);
        for (int i = 0; i < count; ++i) workers.emplace_back(worker);
        for (auto& w : workers) w.join();
    }
    return out;
}

ScalingFit fit_scaling_samples(const std::vector<std::pair<double, double>>& samples,
                               FitRegime regime) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [eps, t] : samples) {
        if (eps > 0.0 && t > 0.0 && std::isfinite(t)) usable.emplace_back(eps, t);
    }
    if (usable.size() < 3) {
        throw InsufficientData("scaling fit needs at least 3 finite lifespan samples, got " +
                               std::to_string(usable.size()));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = usable.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = regime == FitRegime::PowerLaw ? std::log(usable[i].first) : 1.0 / usable[i].first;
        ys[i] = std::log(usable[i].second);
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    ScalingFit out;
    out.regime = regime;
    out.samples = std::move(usable);
    out.n_samples = static_cast<int>(n);
    out.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    if (regime == FitRegime::PowerLaw) {
        out.fitted_exponent = slope;
        out.fitted_log_coefficient = intercept;
    } else {
        out.fitted_exponent = 0.0;
        out.fitted_log_coefficient = slope;
    }
    return out;
}

ScalingFit fit_scaling(const std::vector<SweepEntry>& sweep, FitRegime regime) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& e : sweep) {
        if (e.ok && e.report.event != BlowupClass::HorizonReached &&
            e.report.event != BlowupClass::NonFiniteEvent) {
            samples.emplace_back(e.epsilon, e.report.t_star_estimate);
        }
    }
    return fit_scaling_samples(samples, regime);
}

HypothesisVerdict check_blowup_hypothesis(const FieldState& state0, const Grid1D& grid,
                                          const PressureLaw& law, const DampingModel& model,
                                          double u_minus, HypothesisVariant variant,
                                          const AnalysisThresholds& thresholds) {
    if (state0.size() < 2) {
        throw std::invalid_argument("hypothesis check needs an initial state with >= 2 nodes");
    }
    double gamma = law.gamma();
    double lambda = model.x_independent() ? model.lambda() : 0.0;
    double mu = model.mu();

    if (variant == HypothesisVariant::WeightedSlope) {
        if (!(gamma > 1.0 && gamma < 3.0) || !model.x_independent() || mu < 1.0 ||
            lambda > 2.0) {
            throw std::domain_error(
                "weighted-slope hypothesis requires 1 < gamma < 3, x-independent damping, "
                "mu >= 1 and lambda <= 2");
        }
    }

    HypothesisVerdict verdict;
    int n = state0.size();
    double dx = grid.dx();

    double phi0 = phi_norm(state0);
    double smallness = thresholds.phi_smallness > 0.0
                           ? thresholds.phi_smallness
                           : 0.5 * law.eta(u_minus);

    if (variant == HypothesisVariant::KThreshold || variant == HypothesisVariant::SpaceTimeK) {
        if (variant == HypothesisVariant::KThreshold) {
            bool regime = model.x_independent() &&
                          ((mu == 1.0 && lambda >= 0.0 && lambda <= 2.0) ||
                           (mu > 1.0 && lambda >= 0.0));
            if (!regime) {
                verdict.kind = HypothesisVerdict::Kind::HypothesisViolated;
                verdict.reason = "damping decay outside the finite-lifespan regime "
                                 "(needs mu = 1 with lambda <= 2, or mu > 1)";
                return verdict;
            }
        } else {
            if (!(mu > 1.0)) {
                verdict.kind = HypothesisVerdict::Kind::HypothesisViolated;
                verdict.reason = "space-time hypothesis requires decay rate mu > 1";
                return verdict;
            }
        }
        if (!(phi0 < smallness)) {
            verdict.kind = HypothesisVerdict::Kind::HypothesisViolated;
            verdict.measured = phi0;
            verdict.threshold = smallness;
            verdict.reason = "initial Phi norm is not small against the far-field scale";
            return verdict;
        }
        double worst = kInf;
        double worst_x = 0.0;
        for (int i = 0; i < n; ++i) {
            double g = std::min(grad_at(state0.r, i, n, dx), grad_at(state0.s, i, n, dx));
            if (g < worst) {
                worst = g;
                worst_x = grid.x(i);
            }
        }
        verdict.measured = worst;
        verdict.threshold = -thresholds.k_threshold;
        if (worst <= -thresholds.k_threshold) {
            verdict.kind = HypothesisVerdict::Kind::PredictsBlowup;
            verdict.witness_x = worst_x;
            verdict.witness_set.push_back(worst_x);
        } else {
            verdict.kind = HypothesisVerdict::Kind::NoPrediction;
        }
        return verdict;
    }

    // Weighted slope: witness set where sqrt(c0) {r,s}_x < -(lambda/2) theta(u0).
    double worst_gap = kInf;
    double worst_x = 0.0;
    for (int i = 0; i < n; ++i) {
        double sc = std::sqrt(state0.c[i]);
        double bound = -0.5 * lambda * law.theta(state0.u[i]);
        double g = sc * std::min(grad_at(state0.r, i, n, dx), grad_at(state0.s, i, n, dx));
        if (g < bound) verdict.witness_set.push_back(grid.x(i));
        double gap = g - bound;
        if (gap < worst_gap) {
            worst_gap = gap;
            worst_x = grid.x(i);
            verdict.measured = g;
            verdict.threshold = bound;
        }
    }
    if (!verdict.witness_set.empty()) {
        verdict.kind = HypothesisVerdict::Kind::PredictsBlowup;
        verdict.witness_x = worst_x;
    } else {
        verdict.kind = HypothesisVerdict::Kind::NoPrediction;
    }
    return verdict;
}

HypothesisVerdict check_blowup_hypothesis(const RunConfig& config, HypothesisVariant variant,
                                          const AnalysisThresholds& thresholds) {
    PressureLaw law(config.gamma);
    FieldState state0 = make_initial(config.family, config.grid, law);
    return check_blowup_hypothesis(state0, config.grid, law, config.model,
                                   config.family.u_left_far(), variant, thresholds);
}

} // namespace delab
