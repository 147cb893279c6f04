#pragma once
// Synthetic student populations with planted structure: a major split
// schedule over the semester stages, per-major core courses that load more
// heavily on a single latent aptitude factor, and withdrawn students whose
// intended major is known. Output goes through the same CSV files the
// ingestion path reads.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ecamp::synth {

struct WorldConfig {
    int majors = 12;
    int students = 20000;
    int stages = 8;

    int gen_ed_courses = 2;  // shared by every major at stages 1..gen_ed_stages
    int gen_ed_stages = 2;
    int group_courses_per_stage = 3;
    int own_courses_per_stage = 2;
    int core_k = 6;

    // grade = clamp(mu + lambda * aptitude + noise * eps) rounded to a letter
    double noise = 0.35;
    double lambda_core = 0.6;
    double lambda_noncore = 0.3;
    double mu_mean = 2.8;
    double mu_spread = 0.3;
    double w_rate = 0.01;  // chance that an enrollment ends in a W

    double withdraw_prob = 0.3;   // mean per-major dropout probability
    int max_dropout_stage = 6;
    double dropout_decay = 0.7;   // stage hazard ratio h(t+1)/h(t)
    // Fraction of the final stage's courses a withdrawn student completes
    // before leaving, drawn uniformly from [partial_load_min, 1].
    double partial_load_min = 0.3;

    double size_skew = 0.3;
    double split_prob = 0.6;
    int first_year = 2005;
    int cohort_years = 8;
    double gender_unknown = 0.05;

    // Optional explicit split schedule: schedule[t-1] is the partition of
    // major indices at stage t. Generated from the seed when empty.
    std::vector<std::vector<std::vector<int>>> schedule;

    // Throws ConfigError when parameters or the schedule are inconsistent.
    void validate() const;

    // Roughly the size of the institutional dataset: ~145k students, 436
    // majors, ~4.7M grade rows.
    static WorldConfig table1_scale();
};

void to_json(nlohmann::json& j, const WorldConfig& c);
void from_json(const nlohmann::json& j, WorldConfig& c);

struct CourseParams {
    std::string id;
    double mu = 0.0;
    double lambda = 0.0;
    bool core = false;
};

struct PlantedMajor {
    std::string code;
    std::string name;
    double weight = 1.0;
    double dropout_prob = 0.0;
    std::vector<double> hazard;       // per-stage dropout probability, sums to dropout_prob
    double female_frac = 0.5;
    std::vector<std::vector<std::string>> own_courses;  // [stage-1]
    std::vector<std::string> core;                      // planted core set, sorted
};

struct GroupCourses {
    int stage = 0;
    std::vector<int> members;  // major indices
    std::vector<std::string> courses;
};

struct PlantedWorld {
    std::uint64_t seed = 0;
    WorldConfig config;
    std::vector<PlantedMajor> majors;
    std::vector<std::vector<std::vector<int>>> partitions;  // [stage-1] -> groups of major indices
    std::vector<std::string> gen_ed;
    std::vector<GroupCourses> groups;  // one entry per (stage, group)
    std::vector<CourseParams> courses; // sorted by id

    // Courses a student of `major` takes at `stage`, sorted by id.
    std::vector<std::string> stage_courses(int major, int stage) const;
    const CourseParams& course(const std::string& id) const;
};

// Deterministic for a fixed seed; validates the config first.
PlantedWorld plan_world(std::uint64_t seed, const WorldConfig& config);

struct WithdrawnTruth {
    std::string student;
    std::string intended_major;
    int dropout_stage = 0;
    int courses_taken = 0;
};

struct WorldManifest {
    nlohmann::json json;  // manifest.json content
    std::size_t grade_rows = 0;
    std::size_t graduates = 0;
    std::vector<WithdrawnTruth> withdrawn;
};

inline constexpr int kManifestSchemaVersion = 1;

// Writes grades.csv, graduations.csv, majors.csv, students.csv and
// manifest.json into out_dir. Nothing is written if the config is invalid.
WorldManifest generate(std::uint64_t seed, const WorldConfig& config, const std::string& out_dir);

struct Discrepancy {
    std::string kind;     // "count", "split", "intended_major", "withdrawn"
    std::string subject;  // file, course or student id
    std::string detail;
};

// Confirms every manifest claim against the CSV files in data_dir.
std::vector<Discrepancy> manifest_check(const std::string& data_dir, const nlohmann::json& manifest);

// Planted partition at every stage as sorted groups of major codes.
std::vector<std::vector<std::vector<std::string>>> planted_partitions(const nlohmann::json& manifest);

} // namespace ecamp::synth
