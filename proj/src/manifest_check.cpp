#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "ecamp/records.hpp"
#include "ecamp/synthgen.hpp"

namespace ecamp::synth {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Discrepancy> manifest_check(const std::string& data_dir, const json& manifest) {
    std::vector<Discrepancy> out;
    auto note = [&](std::string kind, std::string subject, std::string detail) {
        out.push_back({std::move(kind), std::move(subject), std::move(detail)});
    };

    IngestResult ingested;
    try {
        ingested = ingest_csv(IngestPaths::from_dir(data_dir), RecordsConfig{});
    } catch (const std::exception& e) {
        note("files", data_dir, e.what());
        return out;
    }
    const auto& store = ingested.store;
    const auto& report = ingested.report;

    try {
        const auto& counts = manifest.at("counts");
        auto check_count = [&](const char* key, std::size_t actual, const char* file) {
            const auto claimed = counts.at(key).get<std::size_t>();
            if (claimed != actual)
                note("count", file,
                     std::string(key) + ": manifest " + std::to_string(claimed) + ", file " + std::to_string(actual));
        };
        check_count("majors", report.major_rows, "majors.csv");
        check_count("students", report.student_rows, "students.csv");
        check_count("graduates", report.graduation_rows, "graduations.csv");
        check_count("grade_rows", report.grade_rows, "grades.csv");
        if (!report.rejections.empty())
            note("count", report.rejections.front().file,
                 std::to_string(report.rejections.size()) + " rows rejected at ingestion");

        const Timelines tl = build_timelines(store, RecordsConfig{});

        // Split stages: every planted group course is taken by graduates of
        // exactly the group's majors, at the group's stage.
        for (const auto& gc : manifest.at("group_courses")) {
            const int stage = gc.at("stage").get<int>();
            auto members = gc.at("members").get<std::vector<std::string>>();
            std::sort(members.begin(), members.end());
            for (const auto& cid : gc.at("courses")) {
                const auto id = cid.get<std::string>();
                const auto c = store.find_course(id);
                if (!c) {
                    note("split", id, "planted group course never appears in grades.csv");
                    continue;
                }
                std::set<std::string> takers;
                bool stage_ok = true;
                for (EventIx e : store.course_events(*c)) {
                    if (tl.event_index[e] != stage) stage_ok = false;
                    for (MajorIx m : store.student_majors(store.event_students()[e]))
                        takers.insert(store.majors()[m].code);
                }
                if (!std::equal(takers.begin(), takers.end(), members.begin(), members.end()))
                    note("split", id, "taken by a different set of majors than its stage-" + std::to_string(stage) +
                                          " group");
                if (!stage_ok) note("split", id, "taken outside stage " + std::to_string(stage));
            }
        }

        // Intended majors: a withdrawn student's courses all lie in the
        // curriculum of the major the manifest names.
        std::map<std::string, std::set<std::string>> curriculum;
        for (const auto& m : manifest.at("majors")) {
            auto& set = curriculum[m.at("code").get<std::string>()];
            for (const auto& stage : m.at("curriculum"))
                for (const auto& c : stage) set.insert(c.get<std::string>());
        }
        for (const auto& wd : manifest.at("withdrawn")) {
            const auto sid = wd.at("student").get<std::string>();
            const auto major = wd.at("intended_major").get<std::string>();
            const auto s = store.find_student(sid);
            if (!s) {
                note("withdrawn", sid, "withdrawn student has no grade events");
                continue;
            }
            if (!store.student_majors(*s).empty()) note("withdrawn", sid, "withdrawn student has a graduation record");
            const auto [first, last] = store.student_event_range(*s);
            if (first == last) {
                note("withdrawn", sid, "withdrawn student has no grade events");
                continue;
            }
            auto it = curriculum.find(major);
            if (it == curriculum.end()) {
                note("intended_major", sid, "intended major " + major + " is not in the manifest");
                continue;
            }
            for (EventIx e = first; e < last; ++e) {
                const auto& cid = store.course_ids()[store.event_courses()[e]];
                if (!it->second.contains(cid)) {
                    note("intended_major", sid, "course " + cid + " lies outside the curriculum of " + major);
                    break;
                }
            }
        }
    } catch (const json::exception& e) {
        note("manifest", "manifest.json", e.what());
    }
    return out;
}

} // namespace ecamp::synth
