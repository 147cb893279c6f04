#include <filesystem>
#include <fstream>

#include "ecamp/error.hpp"
#include "ecamp/export.hpp"

namespace ecamp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string node_label(const Model& model, const MajorTreeNode& n) {
    if (n.members.size() == 1) return model.store.majors()[n.members.front()].name;
    if (n.stage == 0) return "All majors";
    return std::to_string(n.members.size()) + " majors";
}

json histogram_json(const CourseStats& s) {
    json h = json::object();
    for (int t = 0; t < kGradeTokenCount; ++t)
        if (s.histogram[static_cast<std::size_t>(t)] > 0)
            h[std::string(grade_name(static_cast<GradeToken>(t)))] = s.histogram[static_cast<std::size_t>(t)];
    return h;
}

json gender_json(const GenderSplit& g) { return {{"f", g.f}, {"m", g.m}, {"u", g.u}}; }

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write " + path.string());
    out << bytes;
    if (!out) throw ArtifactError("write failed: " + path.string());
}

} // namespace

std::string render_tree_json(const Model& model) {
    const auto& h = model.hierarchy;
    json j;
    j["schema_version"] = kTreeSchemaVersion;
    j["stages"] = h.stages;
    j["root"] = h.root;
    auto nodes = json::array();
    for (const auto& n : h.nodes) {
        const auto& geo = model.radial.nodes[static_cast<std::size_t>(n.id)];
        json node;
        node["id"] = n.id;
        node["parent"] = n.parent < 0 ? json(nullptr) : json(n.parent);
        node["stage"] = n.stage;
        node["angle"] = geo.angle;
        node["radius"] = geo.radius;
        node["population"] = n.population;
        auto members = json::array();
        for (MajorIx m : n.members) members.push_back(model.store.majors()[m].code);
        node["members"] = std::move(members);
        node["children"] = n.children;
        node["label"] = node_label(model, n);
        const auto& d = n.dropout;
        node["dropout"] = {{"rate", optional_number(d.rate)},
                           {"confidence", optional_number(d.confidence)},
                           {"graduates", d.graduates},
                           {"dropouts", d.dropouts},
                           {"gray", d.gray},
                           {"red", d.red},
                           {"opacity", d.opacity}};
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    auto ribbons = json::array();
    for (const auto& r : model.radial.ribbons)
        ribbons.push_back({{"parent", r.parent}, {"child", r.child}, {"width", r.width}});
    j["ribbons"] = std::move(ribbons);
    j["leaf_order"] = model.radial.leaf_order;
    return j.dump();
}

json majors_json(const Model& model) {
    json j;
    j["schema_version"] = kApiSchemaVersion;
    auto list = json::array();
    for (MajorIx m = 0; m < model.store.num_majors(); ++m) {
        const auto& e = model.store.majors()[m];
        const auto& d = model.dropout_stats[m];
        list.push_back({{"code", e.code},
                        {"name", e.name},
                        {"graduates", model.store.graduate_count(m)},
                        {"dropouts", d.dropouts},
                        {"average_overlap", optional_number(d.average_overlap)},
                        {"has_graph", model.graph(m) != nullptr}});
    }
    j["majors"] = std::move(list);
    return j;
}

json major_graph_json(const Model& model, const NodeLinkScene& scene) {
    const auto* g = model.graph(scene.major);
    if (!g) throw ModelError("major has no course graph");
    json j;
    j["schema_version"] = kMajorSchemaVersion;
    j["major"] = model.store.majors()[scene.major].code;
    j["name"] = model.store.majors()[scene.major].name;
    j["k"] = scene.k;
    j["edge_floor"] = scene.edge_floor;
    auto courses = json::array();
    for (std::size_t i = 0; i < scene.courses.size(); ++i) {
        const auto& c = scene.courses[i];
        const auto& s = g->stats[i];
        courses.push_back({{"id", model.store.course_ids()[c.course]},
                           {"x", c.x},
                           {"y", c.y},
                           {"radius", c.radius},
                           {"core_rank", c.core_rank},
                           {"core", c.core},
                           {"failure_rate", s.failure_rate},
                           {"gender", gender_json(s.gender)},
                           {"histogram", histogram_json(s)},
                           {"enrollment", s.enrollment},
                           {"avg_semester", s.avg_semester},
                           {"total_c", s.total_c}});
    }
    j["courses"] = std::move(courses);
    auto edges = json::array();
    for (const auto& e : scene.edges)
        edges.push_back({{"a", model.store.course_ids()[g->courses[e.a]]},
                         {"b", model.store.course_ids()[g->courses[e.b]]},
                         {"c_value", e.c_value}});
    j["edges"] = std::move(edges);
    return j;
}

std::string render_major_json(const Model& model, MajorIx major) {
    if (major >= model.scenes.size() || !model.scenes[major]) throw ModelError("major has no course graph");
    return major_graph_json(model, *model.scenes[major]).dump();
}

json course_detail_json(const Model& model, MajorIx major, std::size_t position) {
    const auto* g = model.graph(major);
    if (!g || position >= g->size()) throw ModelError("course not in the major's graph");
    const auto& s = g->stats[position];
    json j;
    j["schema_version"] = kApiSchemaVersion;
    j["major"] = model.store.majors()[major].code;
    j["course"] = model.store.course_ids()[s.course];
    j["enrollment"] = s.enrollment;
    j["histogram"] = histogram_json(s);
    j["gender"] = gender_json(s.gender);
    j["gender_known"] = model.store.has_gender_data();
    j["failure_rate"] = s.failure_rate;
    j["avg_semester"] = s.avg_semester;
    j["total_c"] = s.total_c;
    j["core_rank"] = s.core_rank;
    return j;
}

json similarity_vector_json(const Model& model, MajorIx major, std::optional<int> stage) {
    if (stage && (*stage < 1 || *stage > static_cast<int>(model.stage_matrices.size())))
        throw ModelError("stage out of range");
    const std::size_t nm = model.store.num_majors();
    std::vector<double> values(nm, 0.0);
    auto add_row = [&](const MajorSimilarityMatrix& mat, double scale) {
        std::size_t row = 0;
        while (row < mat.majors.size() && mat.majors[row] != major) ++row;
        if (row == mat.majors.size()) return;
        for (std::size_t j = 0; j < mat.majors.size(); ++j) values[mat.majors[j]] += mat.at(row, j) * scale;
    };
    if (stage) {
        add_row(model.stage_matrices[static_cast<std::size_t>(*stage - 1)], 1.0);
    } else if (!model.stage_matrices.empty()) {
        const double scale = 1.0 / static_cast<double>(model.stage_matrices.size());
        for (const auto& mat : model.stage_matrices) add_row(mat, scale);
    }
    json j;
    j["schema_version"] = kApiSchemaVersion;
    j["major"] = model.store.majors()[major].code;
    j["stage"] = stage ? json(*stage) : json("mean");
    double max_other = 0.0;
    auto list = json::array();
    for (MajorIx m = 0; m < nm; ++m) {
        list.push_back({{"code", model.store.majors()[m].code}, {"value", values[m]}});
        if (m != major) max_other = std::max(max_other, values[m]);
    }
    j["values"] = std::move(list);
    j["max_other"] = max_other;
    return j;
}

std::string major_file_name(const std::string& code) {
    std::string safe = code;
    for (char& c : safe)
        if (c == '/' || c == '\\') c = '_';
    return "major_" + safe + ".json";
}

std::vector<std::string> export_all(const Model& model, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& bytes) {
        const auto path = fs::path(dir) / name;
        write_file(path, bytes);
        written.push_back(path.string());
    };
    emit("tree.json", render_tree_json(model));
    emit("hierarchy.json", hierarchy_json(model.hierarchy, model.store).dump());
    for (const auto& mat : model.stage_matrices)
        emit("similarity_stage" + std::to_string(mat.stage) + ".json", similarity_matrix_json(mat, model.store).dump());
    for (MajorIx m = 0; m < model.store.num_majors(); ++m)
        if (model.scenes[m]) emit(major_file_name(model.store.majors()[m].code), render_major_json(model, m));
    return written;
}

std::vector<std::string> write_reports(const Model& model, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> written;
    {
        const auto path = fs::path(dir) / "dropouts.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ArtifactError("cannot write " + path.string());
        write_dropouts_csv(out, model.dropout_stats, model.store);
        written.push_back(path.string());
    }
    {
        const auto path = fs::path(dir) / "attributions.csv";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ArtifactError("cannot write " + path.string());
        write_attributions_csv(out, model.dropout, model.store);
        written.push_back(path.string());
    }
    return written;
}

} // namespace ecamp
