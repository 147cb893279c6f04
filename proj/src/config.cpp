#include "ecamp/config.hpp"

#include <fstream>
#include <set>

#include "ecamp/error.hpp"

namespace ecamp {

using nlohmann::json;

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

void reject_unknown(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.contains(k)) throw ConfigError("unknown config key '" + section + "." + k + "'");
}

const char* radius_mode_name(LeafRadiusMode m) { return m == LeafRadiusMode::Stage ? "stage" : "outer"; }

} // namespace

void Config::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid config: ") + what);
    };
    require(records.censor_gap >= 1, "records.censor_gap must be >= 1");
    require(records.min_enrollment >= 1, "records.min_enrollment must be >= 1");
    require(records.stage_cap >= 1, "records.stage_cap must be >= 1");
    require(hierarchy.stages >= 1 && hierarchy.stages <= records.stage_cap,
            "hierarchy.stages must be in [1, records.stage_cap]");
    require(hierarchy.theta >= 0.0 && hierarchy.theta <= 1.0, "hierarchy.theta must be in [0, 1]");
    for (double t : hierarchy.theta_per_stage)
        require(t >= 0.0 && t <= 1.0, "hierarchy.theta_per_stage entries must be in [0, 1]");
    require(corrgraph.min_graduates >= 2, "corrgraph.min_graduates must be >= 2");
    require(corrgraph.min_course_students >= 1, "corrgraph.min_course_students must be >= 1");
    require(corrgraph.core_k >= 1, "corrgraph.core_k must be >= 1");
    require(dropout.curriculum_min_frac > 0.0 && dropout.curriculum_min_frac <= 1.0,
            "dropout.curriculum_min_frac must be in (0, 1]");
    require(dropout.min_courses_for_attribution >= 1, "dropout.min_courses_for_attribution must be >= 1");
    const auto& l = layout;
    require(l.ring_step > 0 && l.w_min > 0 && l.w_scale > 0 && l.r_min > 0 && l.r_max > 0 && l.edge_floor > 0 &&
                l.relax_iterations > 0 && l.min_separation > 0 && l.y_max > 0 && l.bar_length > 0,
            "layout values must be positive");
    require(l.r_min <= l.r_max, "layout.r_min must not exceed layout.r_max");
    require(l.k >= 1, "layout.k must be >= 1");
}

void to_json(json& j, const Config& c) {
    j = json{
        {"records",
         {{"censor_gap", c.records.censor_gap},
          {"min_enrollment", c.records.min_enrollment},
          {"stage_cap", c.records.stage_cap}}},
        {"hierarchy",
         {{"stages", c.hierarchy.stages},
          {"theta", c.hierarchy.theta},
          {"theta_per_stage", c.hierarchy.theta_per_stage}}},
        {"corrgraph",
         {{"min_graduates", c.corrgraph.min_graduates},
          {"min_course_students", c.corrgraph.min_course_students},
          {"core_k", c.corrgraph.core_k},
          {"withdrawal_counts_as_failure", c.corrgraph.withdrawal_counts_as_failure}}},
        {"dropout",
         {{"curriculum_min_frac", c.dropout.curriculum_min_frac},
          {"min_courses_for_attribution", c.dropout.min_courses_for_attribution}}},
        {"layout",
         {{"ring_step", c.layout.ring_step},
          {"w_min", c.layout.w_min},
          {"w_scale", c.layout.w_scale},
          {"r_min", c.layout.r_min},
          {"r_max", c.layout.r_max},
          {"k", c.layout.k},
          {"edge_floor", c.layout.edge_floor},
          {"relax_iterations", c.layout.relax_iterations},
          {"min_separation", c.layout.min_separation},
          {"y_max", c.layout.y_max},
          {"bar_length", c.layout.bar_length},
          {"leaf_radius", radius_mode_name(c.layout.leaf_radius)}}},
    };
}

void from_json(const json& j, Config& c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        static const std::set<std::string> sections{"records", "hierarchy", "corrgraph", "dropout", "layout", "synth"};
        if (!sections.contains(k)) throw ConfigError("unknown config section '" + k + "'");
    }
    if (auto it = j.find("records"); it != j.end()) {
        reject_unknown(*it, "records", {"censor_gap", "min_enrollment", "stage_cap"});
        take(*it, "censor_gap", c.records.censor_gap);
        take(*it, "min_enrollment", c.records.min_enrollment);
        take(*it, "stage_cap", c.records.stage_cap);
    }
    if (auto it = j.find("hierarchy"); it != j.end()) {
        reject_unknown(*it, "hierarchy", {"stages", "theta", "theta_per_stage"});
        take(*it, "stages", c.hierarchy.stages);
        take(*it, "theta", c.hierarchy.theta);
        take(*it, "theta_per_stage", c.hierarchy.theta_per_stage);
    }
    if (auto it = j.find("corrgraph"); it != j.end()) {
        reject_unknown(*it, "corrgraph",
                       {"min_graduates", "min_course_students", "core_k", "withdrawal_counts_as_failure"});
        take(*it, "min_graduates", c.corrgraph.min_graduates);
        take(*it, "min_course_students", c.corrgraph.min_course_students);
        take(*it, "core_k", c.corrgraph.core_k);
        take(*it, "withdrawal_counts_as_failure", c.corrgraph.withdrawal_counts_as_failure);
    }
    if (auto it = j.find("dropout"); it != j.end()) {
        reject_unknown(*it, "dropout", {"curriculum_min_frac", "min_courses_for_attribution"});
        take(*it, "curriculum_min_frac", c.dropout.curriculum_min_frac);
        take(*it, "min_courses_for_attribution", c.dropout.min_courses_for_attribution);
    }
    if (auto it = j.find("layout"); it != j.end()) {
        reject_unknown(*it, "layout",
                       {"ring_step", "w_min", "w_scale", "r_min", "r_max", "k", "edge_floor", "relax_iterations",
                        "min_separation", "y_max", "bar_length", "leaf_radius"});
        auto& l = c.layout;
        take(*it, "ring_step", l.ring_step);
        take(*it, "w_min", l.w_min);
        take(*it, "w_scale", l.w_scale);
        take(*it, "r_min", l.r_min);
        take(*it, "r_max", l.r_max);
        take(*it, "k", l.k);
        take(*it, "edge_floor", l.edge_floor);
        take(*it, "relax_iterations", l.relax_iterations);
        take(*it, "min_separation", l.min_separation);
        take(*it, "y_max", l.y_max);
        take(*it, "bar_length", l.bar_length);
        std::string mode = radius_mode_name(l.leaf_radius);
        take(*it, "leaf_radius", mode);
        if (mode == "stage") l.leaf_radius = LeafRadiusMode::Stage;
        else if (mode == "outer") l.leaf_radius = LeafRadiusMode::Outer;
        else throw ConfigError("layout.leaf_radius must be 'stage' or 'outer'");
    }
}

Config config_from_json(const json& j) {
    Config c;
    from_json(j, c);
    c.validate();
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

std::string canonical_config(const Config& c) {
    json j = c;
    return j.dump();
}

} // namespace ecamp
