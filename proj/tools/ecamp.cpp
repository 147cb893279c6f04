// ecamp: synthetic data, batch modeling pipeline and JSON API.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecamp/api.hpp"
#include "ecamp/config.hpp"
#include "ecamp/error.hpp"
#include "ecamp/pipeline.hpp"
#include "ecamp/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ecamp::ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ecamp::ConfigError("config file " + path + ": " + e.what());
    }
}

ecamp::Config load(const std::string& path) {
    if (path.empty()) return {};
    return ecamp::config_from_json(read_json_file(path));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eCamp student-progression analytics"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "JSON config file (all thresholds and defaults)")->check(CLI::ExistingFile);
    app.add_option("--out-dir", out_dir, "work directory for inputs, caches and artifacts");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic world with planted structure");
    std::uint64_t seed = 1;
    std::optional<int> students, majors;
    std::optional<double> noise;
    std::string scale = "default";
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--students", students, "number of students");
    synth->add_option("--majors", majors, "number of majors");
    synth->add_option("--noise", noise, "grade noise standard deviation");
    synth->add_option("--scale", scale, "base world: default | table1")->check(CLI::IsMember({"default", "table1"}));

    // check
    auto* check = app.add_subcommand("check", "verify manifest.json against the generated CSV files");
    std::string data_dir;
    check->add_option("--data-dir", data_dir, "directory with the CSV files (default: --out-dir)");

    auto* ingest = app.add_subcommand("ingest", "parse CSV inputs into the record store cache");
    ingest->add_option("--data-dir", data_dir, "directory with the CSV files (default: --out-dir)");

    auto* model = app.add_subcommand("model", "build hierarchy, course graphs and dropout statistics");

    auto* exp = app.add_subcommand("export", "write tree.json, major_<code>.json and debug dumps");
    std::string export_dir;
    exp->add_option("--export-dir", export_dir, "destination (default: --out-dir)");

    auto* report = app.add_subcommand("report", "write dropouts.csv and attributions.csv");
    report->add_option("--export-dir", export_dir, "destination (default: --out-dir)");

    auto* serve = app.add_subcommand("serve", "serve the JSON API over the built model");
    int port = 8080;
    std::string host = "127.0.0.1";
    serve->add_option("--port", port, "TCP port (0 picks a free port)");
    serve->add_option("--host", host, "bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (data_dir.empty()) data_dir = out_dir;
        if (export_dir.empty()) export_dir = out_dir;

        if (*synth) {
            auto world = scale == "table1" ? ecamp::synth::WorldConfig::table1_scale() : ecamp::synth::WorldConfig{};
            if (!config_path.empty()) {
                const auto j = read_json_file(config_path);
                if (auto it = j.find("synth"); it != j.end()) {
                    json merged = world;
                    merged.update(*it);
                    world = merged.get<ecamp::synth::WorldConfig>();
                }
            }
            if (students) world.students = *students;
            if (majors) world.majors = *majors;
            if (noise) world.noise = *noise;
            const auto t0 = std::chrono::steady_clock::now();
            const auto m = ecamp::synth::generate(seed, world, out_dir);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << "synth: " << world.students << " students, " << world.majors << " majors, " << m.grade_rows
                      << " grade rows, " << m.graduates << " graduates, " << m.withdrawn.size()
                      << " withdrawn -> " << out_dir << " (" << secs << " s)\n";
        } else if (*check) {
            const auto manifest = read_json_file((fs::path(data_dir) / "manifest.json").string());
            const auto issues = ecamp::synth::manifest_check(data_dir, manifest);
            for (const auto& d : issues) std::cout << d.kind << '\t' << d.subject << '\t' << d.detail << '\n';
            std::cout << "check: " << issues.size() << " discrepancies\n";
            return issues.empty() ? 0 : 1;
        } else if (*ingest) {
            const auto cfg = load(config_path);
            const auto r = ecamp::run_ingest(data_dir, out_dir, cfg);
            if (r.cache_hit) {
                std::cout << "ingest: cache hit (" << r.store_key.substr(0, 12) << ")\n";
            } else {
                std::cout << "ingest: " << r.report.grade_rows << " grade rows, " << r.report.rejections.size()
                          << " rejections, " << r.report.duplicates_collapsed << " duplicates collapsed ("
                          << r.seconds << " s)\n";
            }
        } else if (*model) {
            const auto cfg = load(config_path);
            const auto r = ecamp::run_model(out_dir, cfg);
            if (r.cache_hit) std::cout << "model: up to date (" << r.model_key.substr(0, 12) << ")\n";
            else std::cout << "model: built in " << r.seconds << " s\n";
        } else if (*exp) {
            const auto files = ecamp::run_export(out_dir, export_dir);
            std::cout << "export: " << files.size() << " files -> " << export_dir << '\n';
        } else if (*report) {
            const auto files = ecamp::run_report(out_dir, export_dir);
            for (const auto& f : files) std::cout << "report: " << f << '\n';
        } else if (*serve) {
            const fs::path model_path = fs::path(out_dir) / "model.bin";
            ecamp::ApiService service(std::make_shared<const ecamp::Model>(ecamp::load_model_file(out_dir)));
            ecamp::ApiServer server(service);
            const int bound = server.bind(host, port);
            server.start();
            std::cout << "serve: http://" << host << ':' << bound << "/api/tree" << std::endl;
            std::signal(SIGINT, [](int) { g_stop = true; });
            std::signal(SIGTERM, [](int) { g_stop = true; });
            // Pick up a rebuilt model.bin without restarting.
            auto stamp = fs::last_write_time(model_path);
            while (!g_stop) {
                std::this_thread::sleep_for(std::chrono::milliseconds(500));
                std::error_code ec;
                const auto now = fs::last_write_time(model_path, ec);
                if (ec || now == stamp) continue;
                try {
                    service.swap(std::make_shared<const ecamp::Model>(ecamp::load_model_file(out_dir)));
                    stamp = now;
                    std::cout << "serve: reloaded model" << std::endl;
                } catch (const ecamp::Error& e) {
                    std::cerr << "serve: reload failed: " << e.what() << std::endl;
                }
            }
            server.stop();
        }
    } catch (const ecamp::Error& e) {
        std::cerr << "ecamp: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ecamp: unexpected error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
