#pragma once

#include <string>

#include <json.hpp>

#include "wfchef/workflow.hpp"

namespace wfchef::detail {

// `root` is the JSON path prefix used in parse errors.
workflow workflow_from_json(const nlohmann::json& doc, const std::string& root);
nlohmann::json workflow_to_json(const workflow& w);

} // namespace wfchef::detail
