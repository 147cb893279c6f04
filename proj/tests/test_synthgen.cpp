#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ecamp/corrgraph.hpp"
#include "ecamp/error.hpp"
#include "ecamp/synthgen.hpp"
#include "support.hpp"

using namespace ecamp;
using ecamp::test::read_text;
using ecamp::test::TempDir;
using ecamp::test::write_text;
using nlohmann::json;

namespace {

const char* kFiles[] = {"grades.csv", "graduations.csv", "majors.csv", "students.csv", "manifest.json"};

// Each group at stage t+1 lies inside one group at stage t.
bool refines(const std::vector<std::vector<int>>& finer, const std::vector<std::vector<int>>& coarser) {
    std::map<int, std::size_t> owner;
    for (std::size_t g = 0; g < coarser.size(); ++g)
        for (int m : coarser[g]) owner[m] = g;
    for (const auto& g : finer) {
        std::set<std::size_t> parents;
        for (int m : g) parents.insert(owner.at(m));
        if (parents.size() != 1) return false;
    }
    return true;
}

} // namespace

TEST(Synth, SameSeedSameBytes) {
    TempDir a, b;
    const auto cfg = ecamp::test::small_world(5, 800, 0.35);
    synth::generate(17, cfg, a.str());
    synth::generate(17, cfg, b.str());
    for (const char* f : kFiles) EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
}

TEST(Synth, DifferentSeedsDiffer) {
    TempDir a, b;
    const auto cfg = ecamp::test::small_world(5, 800, 0.35);
    synth::generate(1, cfg, a.str());
    synth::generate(2, cfg, b.str());
    EXPECT_NE(read_text(a / "grades.csv"), read_text(b / "grades.csv"));
}

TEST(Synth, InvalidConfigWritesNothing) {
    TempDir d;
    const auto out = d / "world";
    auto cfg = ecamp::test::small_world(0, 100, 0.35);
    EXPECT_THROW(synth::generate(1, cfg, out.string()), ConfigError);
    EXPECT_FALSE(std::filesystem::exists(out));

    cfg = ecamp::test::small_world(3, 100, -1.0);
    EXPECT_THROW(synth::generate(1, cfg, out.string()), ConfigError);
    cfg = ecamp::test::small_world(3, 100, 0.3);
    cfg.lambda_core = cfg.lambda_noncore;
    EXPECT_THROW(synth::generate(1, cfg, out.string()), ConfigError);
    EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Synth, ExplicitScheduleMustRefine) {
    auto cfg = ecamp::test::small_world(4, 100, 0.3);
    cfg.stages = 2;
    cfg.max_dropout_stage = 2;
    cfg.core_k = 2;
    cfg.schedule = {{{0, 1}, {2, 3}}, {{0, 2}, {1}, {3}}};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.schedule = {{{0, 1}, {2, 3}}, {{0}, {1}, {2, 3}}};
    EXPECT_NO_THROW(cfg.validate());
    const auto w = synth::plan_world(3, cfg);
    EXPECT_EQ(w.partitions, cfg.schedule);
}

TEST(Synth, PlannedPartitionsRefineStageToStage) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto w = synth::plan_world(seed, ecamp::test::small_world(12, 100, 0.35));
        ASSERT_EQ(w.partitions.size(), 8u);
        for (std::size_t t = 1; t < w.partitions.size(); ++t)
            EXPECT_TRUE(refines(w.partitions[t], w.partitions[t - 1])) << "seed " << seed << " stage " << t + 1;
        // Each stage is a partition of all majors.
        for (const auto& part : w.partitions) {
            std::vector<int> all;
            for (const auto& g : part) all.insert(all.end(), g.begin(), g.end());
            std::sort(all.begin(), all.end());
            for (int i = 0; i < 12; ++i) EXPECT_EQ(all[static_cast<std::size_t>(i)], i);
        }
    }
}

TEST(Synth, CoreCoursesLoadMoreThanNonCore) {
    const auto w = synth::plan_world(4, ecamp::test::small_world(6, 100, 0.35));
    for (const auto& m : w.majors) {
        ASSERT_EQ(m.core.size(), 6u);
        for (const auto& c : m.core) EXPECT_TRUE(w.course(c).core);
    }
    for (const auto& c : w.courses) {
        if (c.core) EXPECT_GT(c.lambda, w.config.lambda_noncore);
        else EXPECT_EQ(c.lambda, w.config.lambda_noncore);
    }
}

TEST(Synth, ManifestCountsMatchFiles) {
    TempDir d;
    const auto m = synth::generate(8, ecamp::test::small_world(5, 1000, 0.35), d.str());
    const auto j = json::parse(read_text(d / "manifest.json"));
    EXPECT_EQ(j, m.json);
    EXPECT_EQ(j.at("schema_version"), synth::kManifestSchemaVersion);
    EXPECT_EQ(j.at("counts").at("grade_rows").get<std::size_t>(), m.grade_rows);
    const auto grades = read_text(d / "grades.csv");
    EXPECT_EQ(static_cast<std::size_t>(std::count(grades.begin(), grades.end(), '\n')), m.grade_rows + 1);
    EXPECT_EQ(m.graduates + m.withdrawn.size(), 1000u);
}

TEST(Synth, UntouchedWorldChecksClean) {
    TempDir d;
    const auto m = synth::generate(8, ecamp::test::small_world(5, 1000, 0.35), d.str());
    const auto issues = synth::manifest_check(d.str(), m.json);
    for (const auto& i : issues) ADD_FAILURE() << i.kind << ' ' << i.subject << ' ' << i.detail;
    EXPECT_TRUE(issues.empty());
}

TEST(Synth, DeletedGraduationRowIsOneCountDiscrepancy) {
    TempDir d;
    const auto m = synth::generate(8, ecamp::test::small_world(5, 1000, 0.35), d.str());
    auto text = read_text(d / "graduations.csv");
    const auto first_row = text.find('\n') + 1;
    const auto end_row = text.find('\n', first_row) + 1;
    text.erase(first_row, end_row - first_row);
    write_text(d / "graduations.csv", text);
    const auto issues = synth::manifest_check(d.str(), m.json);
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].kind, "count");
    EXPECT_EQ(issues[0].subject, "graduations.csv");
}

TEST(Synth, PermutedIntendedMajorsAreEachReported) {
    TempDir d;
    const auto m = synth::generate(8, ecamp::test::small_world(6, 2000, 0.35), d.str());
    auto manifest = m.json;
    auto& wd = manifest.at("withdrawn");
    // Pick withdrawn students past stage 1 with pairwise different majors and
    // rotate their labels.
    std::vector<std::size_t> picked;
    std::set<std::string> used;
    for (std::size_t i = 0; i < wd.size() && picked.size() < 4; ++i) {
        const auto major = wd[i].at("intended_major").get<std::string>();
        if (wd[i].at("dropout_stage").get<int>() >= 2 && used.insert(major).second) picked.push_back(i);
    }
    ASSERT_EQ(picked.size(), 4u);
    std::vector<std::string> labels;
    for (auto i : picked) labels.push_back(wd[i].at("intended_major").get<std::string>());
    for (std::size_t k = 0; k < picked.size(); ++k) wd[picked[k]]["intended_major"] = labels[(k + 1) % labels.size()];

    const auto issues = synth::manifest_check(d.str(), manifest);
    ASSERT_EQ(issues.size(), picked.size());
    std::set<std::string> flagged;
    for (const auto& i : issues) {
        EXPECT_EQ(i.kind, "intended_major");
        flagged.insert(i.subject);
    }
    for (auto i : picked) EXPECT_TRUE(flagged.contains(wd[i].at("student").get<std::string>()));
}

TEST(Synth, ManifestPartitionsRoundTrip) {
    const auto cfg = ecamp::test::small_world(7, 100, 0.35);
    TempDir d;
    const auto m = synth::generate(11, cfg, d.str());
    const auto w = synth::plan_world(11, cfg);
    const auto parts = synth::planted_partitions(m.json);
    ASSERT_EQ(parts.size(), w.partitions.size());
    for (std::size_t t = 0; t < parts.size(); ++t) EXPECT_EQ(parts[t].size(), w.partitions[t].size());
}

TEST(Synth, WorldConfigJsonRoundTrip) {
    auto cfg = synth::WorldConfig::table1_scale();
    cfg.noise = 0.123;
    const json j = cfg;
    const auto back = j.get<synth::WorldConfig>();
    EXPECT_EQ(json(back), j);
    EXPECT_EQ(back.majors, 436);
}

TEST(Synth, NoiselessEqualLoadingCoresCorrelatePerfectly) {
    auto cfg = ecamp::test::small_world(3, 1500, 0.0);
    cfg.mu_spread = 0.0;
    cfg.w_rate = 0.0;
    TempDir d;
    const auto m = synth::generate(5, cfg, d.str());
    const auto r = ingest_csv(IngestPaths::from_dir(d.str()), {});
    const auto tl = build_timelines(r.store, {});
    const auto planted = synth::plan_world(5, cfg);
    for (const auto& pm : planted.majors) {
        const auto mi = *r.store.find_major(pm.code);
        const auto g = build_course_graph(r.store, tl, mi, {});
        for (std::size_t i = 0; i < pm.core.size(); ++i)
            for (std::size_t j = i + 1; j < pm.core.size(); ++j) {
                const auto a = g.position(*r.store.find_course(pm.core[i]));
                const auto b = g.position(*r.store.find_course(pm.core[j]));
                ASSERT_TRUE(a && b);
                EXPECT_DOUBLE_EQ(g.pcc_at(*a, *b), 1.0) << pm.core[i] << ' ' << pm.core[j];
            }
    }
    (void)m;
}
