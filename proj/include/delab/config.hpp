#ifndef DELAB_CONFIG_HPP
#define DELAB_CONFIG_HPP

#include <string>
#include <vector>

#include "delab/analysis.hpp"
#include "delab/solver.hpp"

namespace delab {

struct ConfigError {
    int line = 0;
    std::string message;
};

/** Parsed flat key = value configuration. Parsing collects every error (with
 *  its line number) instead of stopping at the first; `run` and the sweep
 *  and analysis settings are only meaningful when ok(). */
struct ParsedConfig {
    std::vector<ConfigError> errors;
    RunConfig run;
    std::vector<double> sweep_epsilons;
    int sweep_mesh_levels = 2;
    AnalysisThresholds thresholds;
    std::string output_dir = ".";

    bool ok() const { return errors.empty(); }
    std::string error_summary() const;
};

ParsedConfig parse_config(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

} // namespace delab

#endif
