#pragma once

#include "hetcycle/analysis.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace hetcycle {

inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic full report: identical inputs give byte-identical output.
nlohmann::json analysis_report(const MuAnalysis& an);
std::string report_to_string(const nlohmann::json& report);

// Minimal structural validator for the shipped schema subset
// (type/required/properties/items/enum).
bool validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                             std::string* error = nullptr);

// SVG emitters, fixed 800x600 viewport.
std::string svg_projective(const ProjectiveMap& map, const std::string& title);
std::string svg_cobweb(const ProjectiveMap& map, double start, int iters,
                       const std::string& title);
std::string svg_graph(const HeteroclinicGraph& g, const std::vector<int>& switching,
                      const std::string& title);

} // namespace hetcycle
