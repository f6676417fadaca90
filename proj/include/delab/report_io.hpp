#ifndef DELAB_REPORT_IO_HPP
#define DELAB_REPORT_IO_HPP

#include <ostream>
#include <string>

#include "json.hpp"

#include "delab/analysis.hpp"
#include "delab/characteristics.hpp"
#include "delab/damping.hpp"
#include "delab/solver.hpp"

namespace delab {

/// Doubles rendered with 17 significant digits for exact reproduction.
std::string fmt17(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
nlohmann::json event_json(const Trajectory& traj);

void write_path_csv(std::ostream& out, const CharacteristicPath& path, const PressureLaw& law,
                    const DampingModel& model);

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& sweep);
nlohmann::json fit_json(const ScalingFit& fit);

nlohmann::json verdict_json(const HypothesisVerdict& verdict, const std::string& variant);
nlohmann::json validation_json(const ValidationReport& report, const HypothesisSpec& hypothesis);
nlohmann::json blowup_report_json(const BlowupReport& report);

} // namespace delab

#endif
