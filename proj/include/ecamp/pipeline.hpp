#pragma once
// Batch pipeline over a work directory:
//   ingest  CSV inputs -> store.bin (+ rejection reports, ingest_report.json)
//   model   store.bin  -> model.bin
//   export  model.bin  -> tree.json, hierarchy.json, major_<code>.json, ...
//   report  model.bin  -> dropouts.csv, attributions.csv
// Every phase records input hashes, the config snapshot, timings and written
// artifacts in pipeline.json.

#include <string>
#include <vector>

#include <json.hpp>

#include "ecamp/config.hpp"
#include "ecamp/model.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

inline constexpr int kPipelineSchemaVersion = 1;

struct InputFile {
    std::string name;    // grades.csv, ...
    std::string path;    // empty for an absent optional file
    std::string sha256;
};

// Hashes of the conventional input files of a data directory.
std::vector<InputFile> hash_inputs(const IngestPaths& paths);
std::string store_key(const std::vector<InputFile>& inputs, const RecordsConfig& config);
std::string model_key(const std::string& store_key, const Config& config);

struct IngestOutcome {
    bool cache_hit = false;
    std::string store_key;
    IngestReport report;
    double seconds = 0.0;
};

IngestOutcome run_ingest(const std::string& data_dir, const std::string& work_dir, const Config& config);

struct ModelOutcome {
    bool cache_hit = false;
    bool reingested = false;
    std::string model_key;
    ModelTimings timings;
    double seconds = 0.0;
};

// Throws ArtifactError naming `ecamp ingest` when store.bin is missing or the
// inputs changed after it was built. A changed records section re-runs
// ingestion from the recorded data directory.
ModelOutcome run_model(const std::string& work_dir, const Config& config);

Model load_model_file(const std::string& work_dir);

std::vector<std::string> run_export(const std::string& work_dir, const std::string& out_dir);
std::vector<std::string> run_report(const std::string& work_dir, const std::string& out_dir);

nlohmann::json read_pipeline_manifest(const std::string& work_dir);

} // namespace ecamp
