#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "ecamp/binary_io.hpp"
#include "ecamp/error.hpp"
#include "ecamp/export.hpp"
#include "ecamp/hash.hpp"
#include "ecamp/pipeline.hpp"

namespace ecamp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kStoreMagic = "ECAMPCACHE1";
constexpr std::string_view kModelMagic = "ECAMPMODELFILE1";

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json records_json(const RecordsConfig& r) {
    Config c;
    c.records = r;
    return json(c)["records"];
}

// Writes via a temporary file and rename so readers never see a partial file.
template <typename Fn>
void write_atomically(const fs::path& path, Fn&& fill) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ArtifactError("cannot write " + tmp.string());
        fill(out);
        out.flush();
        if (!out) throw ArtifactError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct StoreHeader {
    std::string key;
    std::string data_dir;
    std::string records;  // canonical records config
    std::vector<InputFile> inputs;
};

void write_header(BinaryWriter& w, const StoreHeader& h) {
    w.tag(kStoreMagic);
    w.write(h.key);
    w.write(h.data_dir);
    w.write(h.records);
    w.write(static_cast<std::uint64_t>(h.inputs.size()));
    for (const auto& f : h.inputs) {
        w.write(f.name);
        w.write(f.path);
        w.write(f.sha256);
    }
}

StoreHeader read_header(BinaryReader& r) {
    StoreHeader h;
    r.expect(kStoreMagic);
    r.read(h.key);
    r.read(h.data_dir);
    r.read(h.records);
    h.inputs.resize(r.get<std::uint64_t>());
    for (auto& f : h.inputs) {
        r.read(f.name);
        r.read(f.path);
        r.read(f.sha256);
    }
    return h;
}

std::optional<StoreHeader> peek_store(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        BinaryReader r(in);
        return read_header(r);
    } catch (const ArtifactError&) {
        return std::nullopt;
    }
}

std::optional<std::string> peek_model_key(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        BinaryReader r(in);
        r.expect(kModelMagic);
        std::string key;
        r.read(key);
        return key;
    } catch (const ArtifactError&) {
        return std::nullopt;
    }
}

void update_manifest(const std::string& work_dir, const std::function<void(json&)>& edit) {
    json m = read_pipeline_manifest(work_dir);
    edit(m);
    m["schema_version"] = kPipelineSchemaVersion;
    write_atomically(fs::path(work_dir) / "pipeline.json", [&](std::ostream& out) { out << m.dump(2) << '\n'; });
}

json inputs_json(const std::vector<InputFile>& inputs) {
    json j = json::object();
    for (const auto& f : inputs) j[f.name] = {{"path", f.path}, {"sha256", f.sha256}};
    return j;
}

} // namespace

std::vector<InputFile> hash_inputs(const IngestPaths& paths) {
    std::vector<InputFile> out;
    const std::pair<const char*, const std::string*> files[] = {{"grades.csv", &paths.grades},
                                                                {"graduations.csv", &paths.graduations},
                                                                {"majors.csv", &paths.majors},
                                                                {"withdrawals.csv", &paths.withdrawals},
                                                                {"students.csv", &paths.students}};
    for (const auto& [name, path] : files)
        out.push_back({name, *path, path->empty() ? std::string("<absent>") : sha256_file_hex(*path)});
    return out;
}

std::string store_key(const std::vector<InputFile>& inputs, const RecordsConfig& config) {
    ContentHasher h;
    for (const auto& f : inputs) {
        h.update(f.name);
        h.update(std::string_view("\0", 1));
        h.update(f.sha256);
        h.update("\n");
    }
    h.update(records_json(config).dump());
    return h.hex_digest();
}

std::string model_key(const std::string& store_key, const Config& config) {
    return sha256_hex(store_key + "\n" + canonical_config(config));
}

nlohmann::json read_pipeline_manifest(const std::string& work_dir) {
    const auto path = fs::path(work_dir) / "pipeline.json";
    std::ifstream in(path);
    if (!in) return json::object();
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        return json::object();
    }
}

IngestOutcome run_ingest(const std::string& data_dir, const std::string& work_dir, const Config& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(work_dir);
    const auto paths = IngestPaths::from_dir(data_dir);
    for (const auto* p : {&paths.grades, &paths.graduations, &paths.majors})
        if (!fs::exists(*p)) throw IngestError("input file not found: " + *p);

    IngestOutcome outcome;
    const auto inputs = hash_inputs(paths);
    outcome.store_key = store_key(inputs, config.records);
    const fs::path store_path = fs::path(work_dir) / "store.bin";
    const fs::path report_path = fs::path(work_dir) / "ingest_report.json";
    if (const auto h = peek_store(store_path); h && h->key == outcome.store_key && fs::exists(report_path)) {
        outcome.cache_hit = true;
        outcome.seconds = seconds_since(t0);
        return outcome;
    }

    auto result = ingest_csv(paths, config.records);
    outcome.report = result.report;

    StoreHeader header{outcome.store_key, fs::absolute(data_dir).lexically_normal().string(),
                       records_json(config.records).dump(), inputs};
    write_atomically(store_path, [&](std::ostream& out) {
        BinaryWriter w(out);
        write_header(w, header);
        result.store.save(out);
    });

    std::vector<std::string> artifacts{store_path.string()};
    for (const auto& f : inputs) {
        if (f.path.empty()) continue;
        const auto path = fs::path(work_dir) / ("rejections." + f.name);
        write_atomically(path, [&](std::ostream& out) { write_rejection_report(out, result.report, f.name); });
        artifacts.push_back(path.string());
    }

    json rep;
    rep["schema_version"] = kPipelineSchemaVersion;
    rep["rows"] = {{"grades.csv", result.report.grade_rows},
                   {"graduations.csv", result.report.graduation_rows},
                   {"majors.csv", result.report.major_rows},
                   {"withdrawals.csv", result.report.withdrawal_rows},
                   {"students.csv", result.report.student_rows}};
    json rejected = json::object();
    for (const auto& f : inputs) rejected[f.name] = 0;
    for (const auto& r : result.report.rejections) rejected[r.file] = rejected[r.file].get<std::size_t>() + 1;
    rep["rejections"] = rejected;
    rep["duplicates_collapsed"] = result.report.duplicates_collapsed;
    rep["warnings"] = result.report.warnings;
    rep["store"] = {{"students", result.store.num_students()},
                    {"courses", result.store.num_courses()},
                    {"majors", result.store.num_majors()},
                    {"events", result.store.num_events()},
                    {"graduations", result.store.graduations().size()}};
    write_atomically(report_path, [&](std::ostream& out) { out << rep.dump(2) << '\n'; });
    artifacts.push_back(report_path.string());

    outcome.seconds = seconds_since(t0);
    update_manifest(work_dir, [&](json& m) {
        m["data_dir"] = header.data_dir;
        m["inputs"] = inputs_json(inputs);
        m["store_key"] = outcome.store_key;
        m["timings"]["ingest_s"] = outcome.seconds;
        m["artifacts"]["ingest"] = artifacts;
    });
    return outcome;
}

ModelOutcome run_model(const std::string& work_dir, const Config& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path store_path = fs::path(work_dir) / "store.bin";
    auto header = peek_store(store_path);
    if (!header)
        throw ArtifactError("no record store cache in " + work_dir + "; run `ecamp ingest` first");

    ModelOutcome outcome;
    for (const auto& f : header->inputs) {
        const std::string now = f.path.empty() ? std::string("<absent>") : sha256_file_hex(f.path);
        if (now != f.sha256)
            throw ArtifactError("input " + f.name + " changed since the record store was built; run `ecamp ingest` again");
    }
    if (header->records != records_json(config.records).dump()) {
        run_ingest(header->data_dir, work_dir, config);
        header = peek_store(store_path);
        if (!header) throw ArtifactError("record store rebuild failed; run `ecamp ingest`");
        outcome.reingested = true;
    }

    outcome.model_key = model_key(header->key, config);
    const fs::path model_path = fs::path(work_dir) / "model.bin";
    if (const auto key = peek_model_key(model_path); key && *key == outcome.model_key) {
        outcome.cache_hit = true;
        outcome.seconds = seconds_since(t0);
        return outcome;
    }

    RecordStore store;
    {
        std::ifstream in(store_path, std::ios::binary);
        BinaryReader r(in);
        read_header(r);
        store = RecordStore::load(in);
    }
    const Model model = build_model(std::move(store), config, &outcome.timings);
    write_atomically(model_path, [&](std::ostream& out) {
        BinaryWriter w(out);
        w.tag(kModelMagic);
        w.write(outcome.model_key);
        save_model(out, model);
    });
    outcome.seconds = seconds_since(t0);

    update_manifest(work_dir, [&](json& m) {
        m["model_key"] = outcome.model_key;
        m["config"] = json::parse(canonical_config(config));
        const auto& tm = outcome.timings;
        m["timings"]["model_s"] = outcome.seconds;
        m["timings"]["model_phases"] = {{"timelines_s", tm.timelines_s}, {"affinity_s", tm.affinity_s},
                                        {"hierarchy_s", tm.hierarchy_s}, {"corrgraph_s", tm.corrgraph_s},
                                        {"dropout_s", tm.dropout_s},     {"layout_s", tm.layout_s}};
        m["artifacts"]["model"] = {model_path.string()};
        m["model_warnings"] = model.warnings;
    });
    return outcome;
}

Model load_model_file(const std::string& work_dir) {
    const fs::path path = fs::path(work_dir) / "model.bin";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("no model artifact in " + work_dir + "; run `ecamp model` first");
    BinaryReader r(in);
    r.expect(kModelMagic);
    std::string key;
    r.read(key);
    return load_model(in);
}

std::vector<std::string> run_export(const std::string& work_dir, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const Model model = load_model_file(work_dir);
    auto written = export_all(model, out_dir);
    const double secs = seconds_since(t0);
    update_manifest(work_dir, [&](json& m) {
        m["timings"]["export_s"] = secs;
        m["artifacts"]["export"] = written;
    });
    return written;
}

std::vector<std::string> run_report(const std::string& work_dir, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    const Model model = load_model_file(work_dir);
    auto written = write_reports(model, out_dir);
    const double secs = seconds_since(t0);
    update_manifest(work_dir, [&](json& m) {
        m["timings"]["report_s"] = secs;
        m["artifacts"]["report"] = written;
    });
    return written;
}

} // namespace ecamp
