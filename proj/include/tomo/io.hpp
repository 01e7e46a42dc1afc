#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tomo/radon.hpp"
#include "tomo/sampler.hpp"
#include "tomo/states.hpp"
#include "tomo/tomogram.hpp"
#include "tomo/uncertainty.hpp"

namespace tomo {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

// State specs:
//   {"kind":"gaussian","mean_q":..,"mean_p":..,"sigma_qq":..,"sigma_pp":..,"sigma_qp":..}
//   {"kind":"fock","n":..}
nlohmann::ordered_json state_to_json(const StateModel& state);
StateModel state_from_json(const nlohmann::json& j);

// Tomogram grid: {"thetas":[..],"xs":[..],"w":[[row per theta]..]}
nlohmann::ordered_json grid_to_json(const OpticalTomogramGrid& grid);
OpticalTomogramGrid grid_from_json(const nlohmann::json& j);

// Wigner grid: {"qs":[..],"ps":[..],"w":[[row per q]..],
//               "normalization":"integral_equals_2pi"}
nlohmann::ordered_json wigner_to_json(const WignerGrid& grid);
WignerGrid wigner_from_json(const nlohmann::json& j);

nlohmann::ordered_json plan_to_json(const AcquisitionPlan& plan);

nlohmann::ordered_json report_to_json(const UncertaintyReport& report);

// Sample CSV: header line exactly "theta,x", one record per line, LF endings.
void write_samples_csv(std::ostream& out, const QuadratureSampleSet& samples);
QuadratureSampleSet read_samples_csv(std::istream& in, std::string source);

void save_samples_csv(const std::filesystem::path& path,
                      const QuadratureSampleSet& samples);
QuadratureSampleSet load_samples_csv(const std::filesystem::path& path);

void save_json(const std::filesystem::path& path, const nlohmann::json& j);
void save_json(const std::filesystem::path& path,
               const nlohmann::ordered_json& j);
nlohmann::json load_json(const std::filesystem::path& path);

}  // namespace tomo
