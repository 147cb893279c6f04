#pragma once
// JSON/CSV renderers shared by the file exporter and the API server, so a
// served document and its exported file are the same bytes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecamp/model.hpp"

namespace ecamp {

inline constexpr int kTreeSchemaVersion = 1;
inline constexpr int kMajorSchemaVersion = 1;
inline constexpr int kApiSchemaVersion = 1;

std::string render_tree_json(const Model& model);

nlohmann::json majors_json(const Model& model);

nlohmann::json major_graph_json(const Model& model, const NodeLinkScene& scene);
// Default scene (configured k and edge floor).
std::string render_major_json(const Model& model, MajorIx major);

nlohmann::json course_detail_json(const Model& model, MajorIx major, std::size_t position);

// Similarity of `major` to every major; stage-averaged when stage is unset.
nlohmann::json similarity_vector_json(const Model& model, MajorIx major, std::optional<int> stage);

// File name for a major's scene; path separators in codes become '_'.
std::string major_file_name(const std::string& code);

// tree.json, hierarchy.json, similarity_stage<t>.json and one
// major_<code>.json per major with a course graph. Returns written paths.
std::vector<std::string> export_all(const Model& model, const std::string& dir);

// dropouts.csv and attributions.csv. Returns written paths.
std::vector<std::string> write_reports(const Model& model, const std::string& dir);

} // namespace ecamp
