// Command-line front end for the damped p-system laboratory.
//
// Subcommands: simulate, trace, oracle, check, sweep, validate-damping.
// Exit codes: 0 success, 1 config error, 2 expectation mismatch or runtime
// failure, 64 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "delab/analysis.hpp"
#include "delab/characteristics.hpp"
#include "delab/config.hpp"
#include "delab/report_io.hpp"
#include "delab/solver.hpp"

namespace {

using namespace delab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitUsage = 64;

std::optional<ParsedConfig> load_config(const std::string& path) {
    ParsedConfig cfg = parse_config_file(path);
    if (!cfg.ok()) {
        std::cerr << "config error(s) in " << path << ":\n" << cfg.error_summary();
        return std::nullopt;
    }
    return cfg;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    return out;
}

int run_simulate(const std::string& config_path, const std::string& out_dir_flag,
                 const std::string& expect) {
    auto cfg = load_config(config_path);
    if (!cfg) return kExitConfig;
    std::string out_dir = out_dir_flag.empty() ? cfg->output_dir : out_dir_flag;
    Trajectory traj = run(cfg->run);
    {
        auto csv = open_output(out_dir, "trajectory.csv");
        write_trajectory_csv(csv, traj);
    }
    nlohmann::json ev = event_json(traj);
    {
        auto js = open_output(out_dir, "event.json");
        js << ev.dump(2) << '\n';
    }
    std::cout << ev.dump() << std::endl;
    if (!expect.empty()) {
        bool is_blowup = traj.terminal.type == EventType::GradientBlowup;
        bool is_horizon = traj.terminal.type == EventType::HorizonReached;
        bool is_vacuum = traj.terminal.type == EventType::VacuumEvent;
        if ((expect == "blowup" && !is_blowup) || (expect == "horizon" && !is_horizon) ||
            (expect == "vacuum" && !is_vacuum)) {
            std::cerr << "expected " << expect << ", got " << event_name(traj.terminal.type)
                      << "\n";
            return kExitMismatch;
        }
    }
    return kExitOk;
}

int run_trace(const std::string& config_path, double start_x, const std::string& sign_text,
              double t_end, int stride, const std::string& out_dir_flag) {
    auto cfg = load_config(config_path);
    if (!cfg) return kExitConfig;
    int sign = sign_text == "plus" ? +1 : -1;
    RunConfig rc = cfg->run;
    rc.snapshot_stride = stride;
    if (t_end > 0.0) rc.t_max = std::min(rc.t_max, t_end);
    Trajectory traj = run(rc);
    PressureLaw law(rc.gamma);
    CharacteristicPath path = trace(traj, rc.model, start_x, sign);
    std::string out_dir = out_dir_flag.empty() ? cfg->output_dir : out_dir_flag;
    auto csv = open_output(out_dir, "path.csv");
    write_path_csv(csv, path, law, rc.model);
    std::cout << nlohmann::json{{"nodes", path.nodes.size()},
                                {"t_end", path.nodes.back().t},
                                {"x_end", path.nodes.back().x}}
                     .dump()
              << std::endl;
    return kExitOk;
}

int run_oracle(double y0, double lambda, double mu, double coeff) {
    DampingModel model =
        lambda == 0.0 ? DampingModel::none() : DampingModel::power_time(lambda, mu);
    double t = riccati_blowup_time(y0, model, coeff);
    nlohmann::json j{{"y0", y0},
                     {"lambda", lambda},
                     {"mu", mu},
                     {"coeff", coeff},
                     {"t_blowup", std::isinf(t) ? nlohmann::json("inf") : nlohmann::json(t)}};
    std::cout << j.dump() << std::endl;
    return kExitOk;
}

int run_check(const std::string& config_path, const std::string& variant_text,
              const std::string& out_dir_flag) {
    auto cfg = load_config(config_path);
    if (!cfg) return kExitConfig;
    HypothesisVariant variant;
    if (variant_text == "k-threshold") {
        variant = HypothesisVariant::KThreshold;
    } else if (variant_text == "weighted-slope") {
        variant = HypothesisVariant::WeightedSlope;
    } else if (variant_text == "spacetime-k") {
        variant = HypothesisVariant::SpaceTimeK;
    } else {
        std::cerr << "unknown variant '" << variant_text
                  << "' (k-threshold, weighted-slope, spacetime-k)\n";
        return kExitUsage;
    }
    try {
        HypothesisVerdict verdict = check_blowup_hypothesis(cfg->run, variant, cfg->thresholds);
        nlohmann::json j = verdict_json(verdict, variant_text);
        std::string out_dir = out_dir_flag.empty() ? cfg->output_dir : out_dir_flag;
        auto js = open_output(out_dir, "verdict.json");
        js << j.dump(2) << '\n';
        std::cout << j.dump() << std::endl;
        return kExitOk;
    } catch (const std::domain_error& e) {
        std::cerr << "hypothesis range error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int run_sweep(const std::string& config_path, const std::string& epsilons_text, int mesh_levels,
              int jobs, const std::string& regime_text, double t_max_factor,
              const std::string& out_dir_flag) {
    auto cfg = load_config(config_path);
    if (!cfg) return kExitConfig;
    std::vector<double> epsilons = cfg->sweep_epsilons;
    if (!epsilons_text.empty()) {
        epsilons.clear();
        std::istringstream list(epsilons_text);
        std::string item;
        while (std::getline(list, item, ',')) {
            try {
                epsilons.push_back(std::stod(item));
            } catch (const std::exception&) {
                std::cerr << "bad epsilon '" << item << "'\n";
                return kExitUsage;
            }
        }
    }
    if (epsilons.size() < 1) {
        std::cerr << "sweep needs epsilons (flag --epsilons or key sweep.epsilons)\n";
        return kExitConfig;
    }
    SweepOptions opts;
    opts.mesh_levels = mesh_levels > 0 ? mesh_levels : cfg->sweep_mesh_levels;
    opts.t_max_factor = t_max_factor;
    if (const char* env = std::getenv("DAMPED_EULER_LAB_JOBS")) {
        opts.jobs = std::max(1, std::atoi(env));
    } else if (jobs > 0) {
        opts.jobs = jobs;
    } else {
        opts.jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    FitRegime regime = regime_text == "exp" ? FitRegime::ExpLaw : FitRegime::PowerLaw;

    auto sweep = estimate_lifespan_sweep(cfg->run, epsilons, opts);
    std::string out_dir = out_dir_flag.empty() ? cfg->output_dir : out_dir_flag;
    {
        auto csv = open_output(out_dir, "sweep.csv");
        write_sweep_csv(csv, sweep);
    }
    nlohmann::json out;
    try {
        ScalingFit fit = fit_scaling(sweep, regime);
        out = fit_json(fit);
    } catch (const InsufficientData& e) {
        out = nlohmann::json{{"error", e.what()}};
    }
    {
        auto js = open_output(out_dir, "fit.json");
        js << out.dump(2) << '\n';
    }
    std::cout << out.dump() << std::endl;
    return kExitOk;
}

int run_validate(const std::string& config_path, const std::string& hypothesis_text,
                 double amp_bound, double deriv_bound, double mu_bound,
                 const std::string& out_dir_flag) {
    auto cfg = load_config(config_path);
    if (!cfg) return kExitConfig;
    HypothesisSpec spec;
    spec.kind =
        hypothesis_text == "space" ? DecayHypothesis::SpaceDecay : DecayHypothesis::TimeDecay;
    spec.amp_bound = amp_bound;
    spec.deriv_bound = deriv_bound;
    spec.mu = mu_bound;
    try {
        ValidationReport report = validate_bounds(cfg->run.model, spec);
        nlohmann::json j = validation_json(report, spec);
        std::string out_dir = out_dir_flag.empty() ? cfg->output_dir : out_dir_flag;
        auto js = open_output(out_dir, "damping_validation.json");
        js << j.dump(2) << '\n';
        std::cout << j.dump() << std::endl;
        return report.pass ? kExitOk : kExitMismatch;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped-euler-lab: a numerical laboratory for the damped p-system"};
    app.require_subcommand(1);

    std::string config_path, out_dir, expect;
    auto* simulate = app.add_subcommand("simulate", "run the solver and write trajectory CSV");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--output-dir", out_dir, "output directory (overrides output.dir)");
    simulate->add_option("--expect", expect, "fail with exit 2 unless the terminal event matches")
        ->check(CLI::IsMember({"blowup", "horizon", "vacuum"}));

    std::string trace_config, trace_sign = "minus", trace_dir;
    double trace_start = 0.0, trace_t_end = 0.0;
    int trace_stride = 1;
    auto* trace_cmd = app.add_subcommand("trace", "trace a characteristic through a run");
    trace_cmd->add_option("--config", trace_config, "config file")->required();
    trace_cmd->add_option("--start-x", trace_start, "starting abscissa")->required();
    trace_cmd->add_option("--sign", trace_sign, "plus or minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    trace_cmd->add_option("--t-end", trace_t_end, "stop time (default: config t_max)");
    trace_cmd->add_option("--snapshot-stride", trace_stride, "snapshot every k steps")
        ->check(CLI::PositiveNumber);
    trace_cmd->add_option("--output-dir", trace_dir, "output directory");

    double oracle_y0 = 0.0, oracle_lambda = 0.0, oracle_mu = 1.0, oracle_coeff = 1.0;
    auto* oracle_cmd = app.add_subcommand("oracle", "Riccati comparison blow-up time");
    oracle_cmd->add_option("--y0", oracle_y0, "initial weighted gradient")->required();
    oracle_cmd->add_option("--lambda", oracle_lambda, "damping strength");
    oracle_cmd->add_option("--mu", oracle_mu, "damping decay rate");
    oracle_cmd->add_option("--coeff", oracle_coeff, "comparison coefficient");

    std::string check_config, check_variant = "k-threshold", check_dir;
    auto* check_cmd = app.add_subcommand("check", "evaluate a blow-up hypothesis on the data");
    check_cmd->add_option("--config", check_config, "config file")->required();
    check_cmd->add_option("--variant", check_variant,
                          "k-threshold, weighted-slope or spacetime-k");
    check_cmd->add_option("--output-dir", check_dir, "output directory");

    std::string sweep_config, sweep_epsilons, sweep_regime = "power", sweep_dir;
    int sweep_levels = 0, sweep_jobs = 0;
    double sweep_factor = 10.0;
    auto* sweep_cmd = app.add_subcommand("sweep", "lifespan sweep over epsilon with scaling fit");
    sweep_cmd->add_option("--config", sweep_config, "config file")->required();
    sweep_cmd->add_option("--epsilons", sweep_epsilons, "comma list (overrides sweep.epsilons)");
    sweep_cmd->add_option("--mesh-levels", sweep_levels, "dyadic refinements per epsilon");
    sweep_cmd->add_option("--jobs", sweep_jobs,
                          "parallel workers (env DAMPED_EULER_LAB_JOBS overrides)");
    sweep_cmd->add_option("--regime", sweep_regime, "power or exp")
        ->check(CLI::IsMember({"power", "exp"}));
    sweep_cmd->add_option("--t-max-factor", sweep_factor,
                          "horizon as a multiple of the oracle prediction");
    sweep_cmd->add_option("--output-dir", sweep_dir, "output directory");

    std::string val_config, val_hyp = "time", val_dir;
    double val_amp = 1.0, val_deriv = 2.0, val_mu = 2.0;
    auto* val_cmd = app.add_subcommand("validate-damping", "check decay-hypothesis bounds");
    val_cmd->add_option("--config", val_config, "config file")->required();
    val_cmd->add_option("--hypothesis", val_hyp, "time or space")
        ->check(CLI::IsMember({"time", "space"}));
    val_cmd->add_option("--amp-bound", val_amp, "A1 or A3");
    val_cmd->add_option("--deriv-bound", val_deriv, "A2 or A4");
    val_cmd->add_option("--mu-bound", val_mu, "decay rate in the hypothesis (> 1)");
    val_cmd->add_option("--output-dir", val_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return run_simulate(config_path, out_dir, expect);
        if (trace_cmd->parsed()) {
            return run_trace(trace_config, trace_start, trace_sign, trace_t_end, trace_stride,
                             trace_dir);
        }
        if (oracle_cmd->parsed()) {
            return run_oracle(oracle_y0, oracle_lambda, oracle_mu, oracle_coeff);
        }
        if (check_cmd->parsed()) return run_check(check_config, check_variant, check_dir);
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_config, sweep_epsilons, sweep_levels, sweep_jobs, sweep_regime,
                             sweep_factor, sweep_dir);
        }
        if (val_cmd->parsed()) {
            return run_validate(val_config, val_hyp, val_amp, val_deriv, val_mu, val_dir);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitUsage;
}
