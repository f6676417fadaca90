#include "delab/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace delab {

namespace {

nlohmann::json json_number(double v) {
    // JSON has no infinity; report it as a string marker.
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

} // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,min_u,max_u,max_abs_v,max_grad_r,max_grad_s,phi_norm,psi_norm,max_abs_dp\n";
    for (const auto& m : traj.monitors) {
        out << fmt17(m.t) << ',' << fmt17(m.min_u) << ',' << fmt17(m.max_u) << ','
            << fmt17(m.max_abs_v) << ',' << fmt17(m.max_grad_r) << ',' << fmt17(m.max_grad_s)
            << ',' << fmt17(m.phi_norm) << ',' << fmt17(m.psi_norm) << ',' << fmt17(m.max_abs_dp)
            << '\n';
    }
}

nlohmann::json event_json(const Trajectory& traj) {
    return nlohmann::json{{"event", event_name(traj.terminal.type)},
                          {"t_end", json_number(traj.terminal.t)},
                          {"witness_x", json_number(traj.terminal.witness_x)}};
}

void write_path_csv(std::ostream& out, const CharacteristicPath& path, const PressureLaw& law,
                    const DampingModel& model) {
    auto fn = along_path_functionals(path, law, model);
    out << "t,x,u,r,s,grad_r,grad_s,amplification,y,q\n";
    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        const auto& node = path.nodes[i];
        out << fmt17(node.t) << ',' << fmt17(node.x) << ',' << fmt17(node.u) << ','
            << fmt17(node.r) << ',' << fmt17(node.s) << ',' << fmt17(node.grad_r) << ','
            << fmt17(node.grad_s) << ',' << fmt17(path.amplification[i]) << ',' << fmt17(fn.y[i])
            << ',' << fmt17(fn.q[i]) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& sweep) {
    out << "epsilon,dx,t_star,event,witness_x\n";
    for (const auto& e : sweep) {
        if (!e.ok) {
            out << fmt17(e.epsilon) << ",,," << "error:" << e.error << ",\n";
            continue;
        }
        out << fmt17(e.epsilon) << ',' << fmt17(e.dx) << ','
            << fmt17(e.report.t_star_estimate) << ',' << blowup_class_name(e.report.event) << ','
            << fmt17(e.report.witness_x) << '\n';
    }
}

nlohmann::json fit_json(const ScalingFit& fit) {
    return nlohmann::json{
        {"regime", fit.regime == FitRegime::PowerLaw ? "PowerLaw" : "ExpLaw"},
        {"exponent_or_coefficient", json_number(fit.regime == FitRegime::PowerLaw
                                                    ? fit.fitted_exponent
                                                    : fit.fitted_log_coefficient)},
        {"r_squared", json_number(fit.r_squared)},
        {"n_samples", fit.n_samples}};
}

nlohmann::json verdict_json(const HypothesisVerdict& verdict, const std::string& variant) {
    const char* kind = "NoPrediction";
    if (verdict.kind == HypothesisVerdict::Kind::PredictsBlowup) kind = "PredictsBlowup";
    if (verdict.kind == HypothesisVerdict::Kind::HypothesisViolated) kind = "HypothesisViolated";
    nlohmann::json j{{"variant", variant},
                     {"verdict", kind},
                     {"measured", json_number(verdict.measured)},
                     {"threshold", json_number(verdict.threshold)}};
    if (verdict.kind == HypothesisVerdict::Kind::PredictsBlowup) {
        j["witness_x"] = json_number(verdict.witness_x);
        j["witness_count"] = verdict.witness_set.size();
    }
    if (!verdict.reason.empty()) j["reason"] = verdict.reason;
    return j;
}

nlohmann::json validation_json(const ValidationReport& report, const HypothesisSpec& hypothesis) {
    return nlohmann::json{
        {"hypothesis", hypothesis.kind == DecayHypothesis::TimeDecay ? "TimeDecay" : "SpaceDecay"},
        {"mu", hypothesis.mu},
        {"amp_bound", hypothesis.amp_bound},
        {"deriv_bound", hypothesis.deriv_bound},
        {"pass", report.pass},
        {"nonneg_ok", report.nonneg_ok},
        {"amp_ok", report.amp_ok},
        {"deriv_ok", report.deriv_ok},
        {"min_a", json_number(report.min_a)},
        {"worst_amp_ratio", json_number(report.worst_amp_ratio)},
        {"amp_witness", {{"t", report.amp_witness_t}, {"x", report.amp_witness_x}}},
        {"worst_deriv_ratio", json_number(report.worst_deriv_ratio)},
        {"deriv_witness", {{"t", report.deriv_witness_t}, {"x", report.deriv_witness_x}}}};
}

nlohmann::json blowup_report_json(const BlowupReport& report) {
    nlohmann::json extrap = nlohmann::json::array();
    for (const auto& [dx, t] : report.extrapolation) {
        extrap.push_back({{"dx", dx}, {"t_star", json_number(t)}});
    }
    const auto& b = report.bounded_confirmed;
    return nlohmann::json{
        {"event", blowup_class_name(report.event)},
        {"t_star_estimate", json_number(report.t_star_estimate)},
        {"witness_x", json_number(report.witness_x)},
        {"measured_order", json_number(report.measured_order)},
        {"extrapolation", extrap},
        {"bounded_confirmed",
         {{"u_upper", b.u_upper},
          {"u_lower", b.u_lower},
          {"v_sup", b.v_sup},
          {"dp_sup", b.dp_sup},
          {"sup_u", json_number(b.sup_u)},
          {"inv_inf_u", json_number(b.inv_inf_u)},
          {"sup_v", json_number(b.sup_v)},
          {"sup_dp", json_number(b.sup_dp)}}},
        {"box_constants", {{"m1", json_number(report.m1)}, {"delta1", json_number(report.delta1)}}}};
}

} // namespace delab
