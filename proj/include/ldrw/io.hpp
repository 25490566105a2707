#pragma once

#include <string>

#include <json.hpp>

#include "ldrw/measure.hpp"
#include "ldrw/variational.hpp"
#include "ldrw/walk.hpp"

namespace ldrw {

// File formats:
//   measure       {"dim": d, "entries": [[[x1,...,xd], w], ...]}
//   compact point {"dim": d, "orbits": [<measure>, ...]}
//   kernel        {"dim": d, "jumps": [[[z1,...,zd], rate], ...]}
//   potential     {"dim": d, "values": [[[z1,...,zd], v], ...]}
//   trajectory    {"dim": d, "start": [...], "horizon": t,
//                  "jump_times": [...], "jump_targets": [[...], ...]}
// Doubles are emitted with shortest round-trip precision.

nlohmann::json to_json(const SparseMeasure& mu);
SparseMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CompactPoint& xi);
CompactPoint compact_point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RateKernel& kernel);
RateKernel kernel_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DifferencePotential& v);
DifferencePotential potential_from_json(const nlohmann::json& j);

nlohmann::json site_function_to_json(int dim, const SiteFunction& f);
std::pair<int, SiteFunction> site_function_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ldrw
