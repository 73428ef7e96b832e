#pragma once

#include <filesystem>
#include <json.hpp>

#include "netputsim/types.hpp"

namespace netputsim {

using Json = nlohmann::json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);  // array of rows
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

// Keys: industry_id, per_hectare, netput_names, fixed_names, control_names,
// a, b, C, D, alpha, gamma, gamma_m, a_m, numeraire_effects, covariance,
// scale_note.
Json params_to_json(const ParameterSet& params);
ParameterSet params_from_json(const Json& j);

ParameterSet load_params(const std::filesystem::path& path);
void save_params(const ParameterSet& params, const std::filesystem::path& path,
                 const Json& metadata = Json::object(), bool pretty = true);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path, bool pretty);

}  // namespace netputsim
