#pragma once

#include <string>

#include <json.hpp>

#include "tomoinfo/density_matrix.hpp"
#include "tomoinfo/measurement.hpp"
#include "tomoinfo/mub.hpp"

namespace tomoinfo {

/// State files: {"dim": p, "re": [[...]], "im": [[...]]}, row-major.
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j, bool require_physical = true);

/// MUB files: {"dim": p, "bases": [[{"re": ..., "im": ...}, ...], ...]}.
nlohmann::json to_json(const MubSet& set);
MubSet mub_from_json(const nlohmann::json& j);

/// Count files: {"dim": p, "scheme": "mub"|"ortho"|"eigen", "N": shots,
/// "counts": [[...], ...]}.
nlohmann::json to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const nlohmann::json& j);

/// Parses the file as JSON; error messages name the path ("file not found",
/// "invalid JSON").
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace tomoinfo
