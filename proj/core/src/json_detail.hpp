#pragma once

#include <string>

#include "cluster_bifurc/potentials.hpp"
#include "json.hpp"

namespace cluster_bifurc::detail {

nlohmann::json potential_to_object(const PotentialSpec& spec);
PotentialSpec potential_from_object(const nlohmann::json& j, const std::string& path);

}  // namespace cluster_bifurc::detail
