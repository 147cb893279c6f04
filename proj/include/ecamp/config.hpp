#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ecamp {

struct RecordsConfig {
    int censor_gap = 2;        // observed terms between last enrollment and dataset end
    int min_enrollment = 10;   // enrollments needed for a course to join a semester set
    int stage_cap = 8;         // relative indices beyond this fold into the last stage
};

struct HierarchyConfig {
    int stages = 8;
    double theta = 0.5;
    // Optional per-stage override; entry t-1 applies to stage t.
    std::vector<double> theta_per_stage;

    double theta_for(int stage) const {
        const auto i = static_cast<std::size_t>(stage - 1);
        return i < theta_per_stage.size() ? theta_per_stage[i] : theta;
    }
};

struct CorrGraphConfig {
    int min_graduates = 20;
    int min_course_students = 10;
    int core_k = 6;
    bool withdrawal_counts_as_failure = true;
};

struct DropoutConfig {
    double curriculum_min_frac = 0.05;
    int min_courses_for_attribution = 3;
};

enum class LeafRadiusMode { Stage, Outer };

struct LayoutConfig {
    double ring_step = 1.0;
    double w_min = 0.5;
    double w_scale = 1.0;
    double r_min = 3.0;
    double r_max = 12.0;
    int k = 6;
    double edge_floor = 1.0;
    int relax_iterations = 200;
    double min_separation = 0.3;
    double y_max = 4.0;
    double bar_length = 1.0;
    LeafRadiusMode leaf_radius = LeafRadiusMode::Stage;
};

struct Config {
    RecordsConfig records;
    HierarchyConfig hierarchy;
    CorrGraphConfig corrgraph;
    DropoutConfig dropout;
    LayoutConfig layout;

    // Throws ConfigError on out-of-range values.
    void validate() const;
};

void to_json(nlohmann::json& j, const Config& c);
void from_json(const nlohmann::json& j, Config& c);

// Missing keys keep their defaults; unknown keys are rejected.
Config load_config(const std::string& path);
Config config_from_json(const nlohmann::json& j);
// Canonical serialization used for cache keys.
std::string canonical_config(const Config& c);

} // namespace ecamp
