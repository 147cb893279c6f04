#pragma once
// Shared fixtures: scratch directories, tiny hand-built stores and cached
// synthetic worlds.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecamp/config.hpp"
#include "ecamp/model.hpp"
#include "ecamp/records.hpp"
#include "ecamp/synthgen.hpp"

namespace ecamp::test {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = fs::temp_directory_path() / ("ecamp_test_" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Grade rows as (student, term, course, grade).
struct Row {
    std::string student, term, course, grade;
};

// Builds a store directly. Every major in `graduates` is added to the catalog
// (names equal codes) plus any extra catalog codes.
inline RecordStore make_store(const std::vector<Row>& rows,
                              const std::vector<std::pair<std::string, std::string>>& graduates,
                              const std::vector<std::string>& extra_majors = {}) {
    StoreBuilder b;
    for (const auto& [s, m] : graduates) b.add_major(m, m);
    for (const auto& m : extra_majors) b.add_major(m, m);
    for (const auto& r : rows) b.add_grade(r.student, r.course, *parse_term(r.term), *parse_grade(r.grade));
    for (const auto& [s, m] : graduates) b.add_graduation(s, m, *parse_term("2020-SP"));
    return b.build();
}

inline MajorIx major_ix(const RecordStore& s, const std::string& code) { return *s.find_major(code); }
inline CourseIx course_ix(const RecordStore& s, const std::string& id) { return *s.find_course(id); }

// Small planted world with an explicit or seeded schedule.
inline synth::WorldConfig small_world(int majors, int students, double noise) {
    synth::WorldConfig c;
    c.majors = majors;
    c.students = students;
    c.noise = noise;
    return c;
}

struct GeneratedWorld {
    std::unique_ptr<TempDir> dir;
    synth::WorldManifest manifest;
    std::shared_ptr<const Model> model;
};

// Generates, ingests and models a world in a fresh directory.
inline GeneratedWorld build_world(std::uint64_t seed, const synth::WorldConfig& cfg, const Config& config = {}) {
    GeneratedWorld w;
    w.dir = std::make_unique<TempDir>();
    w.manifest = synth::generate(seed, cfg, w.dir->str());
    auto ingested = ingest_csv(IngestPaths::from_dir(w.dir->str()), config.records);
    w.model = std::make_shared<const Model>(build_model(std::move(ingested.store), config));
    return w;
}

} // namespace ecamp::test
