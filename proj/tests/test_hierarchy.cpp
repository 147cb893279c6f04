#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "ecamp/error.hpp"
#include "ecamp/hierarchy.hpp"
#include "support.hpp"

using namespace ecamp;
using ecamp::test::Row;

namespace {

MajorSimilarityMatrix matrix_of(const std::vector<std::vector<double>>& v) {
    MajorSimilarityMatrix m;
    m.stage = 1;
    m.course_count = 1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        m.majors.push_back(static_cast<MajorIx>(i));
        m.values.insert(m.values.end(), v[i].begin(), v[i].end());
    }
    return m;
}

using Partition = std::vector<std::vector<MajorIx>>;

// Every set partition of {0..n-1}, blocks in order of their smallest member.
std::vector<Partition> all_partitions(std::size_t n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(MajorIx)> rec = [&](MajorIx i) {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (std::size_t b = 0; b < cur.size(); ++b) {
            cur[b].push_back(i);
            rec(i + 1);
            cur[b].pop_back();
        }
        cur.push_back({i});
        rec(i + 1);
        cur.pop_back();
    };
    rec(0);
    return out;
}

// Finest partition that no above-threshold edge crosses.
Partition brute_force_split(const std::vector<std::vector<double>>& v, double theta) {
    const std::size_t n = v.size();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) mx = std::max(mx, v[i][j]);
    Partition best;
    for (const auto& p : all_partitions(n)) {
        std::vector<std::size_t> block(n);
        for (std::size_t b = 0; b < p.size(); ++b)
            for (MajorIx m : p[b]) block[m] = b;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j)
                if (mx > 0 && v[i][j] >= theta * mx && block[i] != block[j]) ok = false;
        if (ok && p.size() > best.size()) best = p;
    }
    return best;
}

struct Built {
    RecordStore store;
    std::vector<MajorSimilarityMatrix> matrices;
    MajorHierarchy h;
};

Built build(RecordStore store, const HierarchyConfig& cfg = {}) {
    Built b{std::move(store), {}, {}};
    const auto tl = build_timelines(b.store, {});
    const auto sets = build_semester_sets(b.store, tl, {});
    const EnrollmentCounts counts(b.store);
    b.matrices = stage_similarity_matrices(counts, sets, cfg.stages);
    b.h = build_hierarchy(b.store, b.matrices, cfg);
    return b;
}

// `n` graduates of `major`, each taking `courses` at one term.
void add_cohort(std::vector<Row>& rows, std::vector<std::pair<std::string, std::string>>& grads,
                const std::string& major, int n, const std::vector<std::string>& courses) {
    for (int i = 0; i < n; ++i) {
        const auto id = major + "_" + std::to_string(i);
        grads.emplace_back(id, major);
        for (const auto& c : courses) rows.push_back({id, "2015-FA", c, "B"});
    }
}

void check_structure(const MajorHierarchy& h, std::size_t num_majors) {
    const auto& root = h.nodes[static_cast<std::size_t>(h.root)];
    EXPECT_EQ(root.members.size(), num_majors);
    EXPECT_EQ(root.stage, 0);
    std::vector<int> leaf_count(num_majors, 0);
    for (const auto& n : h.nodes) {
        EXPECT_LE(n.stage, h.stages);
        if (n.children.empty()) {
            for (MajorIx m : n.members) ++leaf_count[m];
            EXPECT_TRUE(n.members.size() == 1 || n.stage == h.stages) << "node " << n.id;
            continue;
        }
        if (n.members.size() == 1) EXPECT_EQ(n.stage, 0);
        std::vector<MajorIx> joined;
        std::uint64_t pop = 0;
        for (int c : n.children) {
            const auto& child = h.nodes[static_cast<std::size_t>(c)];
            EXPECT_EQ(child.stage, n.stage + 1);
            EXPECT_EQ(child.parent, n.id);
            joined.insert(joined.end(), child.members.begin(), child.members.end());
            pop += child.population;
        }
        std::sort(joined.begin(), joined.end());
        EXPECT_EQ(joined, n.members) << "children must partition node " << n.id;
        EXPECT_EQ(pop, n.population) << "population of node " << n.id;
    }
    for (int c : leaf_count) EXPECT_EQ(c, 1);
}

} // namespace

TEST(SplitGroup, BlockDiagonalSplitsForAnyPositiveTheta) {
    const std::vector<std::vector<double>> v{
        {1.0, 0.4, 0.0, 0.0}, {0.4, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.1}, {0.0, 0.0, 0.1, 1.0}};
    for (double theta : {1e-9, 0.1, 0.25}) {
        const auto got = split_group(matrix_of(v), theta);
        EXPECT_EQ(got, (Partition{{0, 1}, {2, 3}})) << theta;
        EXPECT_EQ(got, brute_force_split(v, theta));
    }
}

TEST(SplitGroup, MatchesBruteForceOnRandomMatrices) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
        std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) v[i][j] = v[j][i] = u(rng) < 0.3 ? 0.0 : u(rng);
        for (std::size_t i = 0; i < n; ++i) v[i][i] = 2.0;
        const double theta = u(rng);
        EXPECT_EQ(split_group(matrix_of(v), theta), brute_force_split(v, theta)) << "trial " << trial;
    }
}

TEST(SplitGroup, CompleteGraphAndZeroThetaDoNotSplit) {
    const std::vector<std::vector<double>> v{{1.0, 0.9, 0.8}, {0.9, 1.0, 0.95}, {0.8, 0.95, 1.0}};
    EXPECT_EQ(split_group(matrix_of(v), 0.5).size(), 1u);
    const std::vector<std::vector<double>> sparse{{1.0, 0.0, 0.001}, {0.0, 1.0, 0.0}, {0.001, 0.0, 1.0}};
    EXPECT_EQ(split_group(matrix_of(sparse), 0.0), (Partition{{0, 1, 2}}));
}

TEST(SplitGroup, AllZeroOffDiagonalGivesSingletons) {
    const std::vector<std::vector<double>> v{{0.5, 0.0, 0.0}, {0.0, 0.7, 0.0}, {0.0, 0.0, 0.0}};
    EXPECT_EQ(split_group(matrix_of(v), 0.5), (Partition{{0}, {1}, {2}}));
    EXPECT_EQ(split_group(matrix_of(v), 0.0), (Partition{{0}, {1}, {2}}));
}

TEST(SplitGroup, ComponentsOrderedBySmallestMember) {
    MajorSimilarityMatrix m = matrix_of({{1.0, 0.0, 0.9}, {0.0, 1.0, 0.0}, {0.9, 0.0, 1.0}});
    m.majors = {7, 3, 5};  // rows out of code order
    EXPECT_EQ(split_group(m, 0.5), (Partition{{3}, {5, 7}}));
    EXPECT_THROW(split_group(matrix_of({{1.0}}), 0.5), ModelError);
}

TEST(Hierarchy, SingleMajorIsAPassThroughChain) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    add_cohort(rows, grads, "ONLY", 12, {"c1", "c2"});
    const auto b = build(ecamp::test::make_store(rows, grads));
    const auto& root = b.h.nodes[0];
    ASSERT_EQ(root.children.size(), 1u);
    const auto& child = b.h.nodes[static_cast<std::size_t>(root.children[0])];
    EXPECT_EQ(child.stage, 1);
    EXPECT_EQ(child.members, root.members);
    EXPECT_TRUE(child.children.empty());
    EXPECT_EQ(b.h.nodes.size(), 2u);
}

TEST(Hierarchy, DisjointMajorsSplitAtStageOne) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    add_cohort(rows, grads, "PSY", 3092, {"psy1", "psy2"});
    add_cohort(rows, grads, "ART", 40, {"art1"});
    const auto b = build(ecamp::test::make_store(rows, grads));
    const auto& root = b.h.nodes[0];
    ASSERT_EQ(root.children.size(), 2u);
    EXPECT_EQ(root.population, 3132u);
    const auto psy = ecamp::test::major_ix(b.store, "PSY");
    for (int c : root.children) {
        const auto& n = b.h.nodes[static_cast<std::size_t>(c)];
        EXPECT_EQ(n.stage, 1);
        ASSERT_EQ(n.members.size(), 1u);
        if (n.members[0] == psy) EXPECT_EQ(n.population, 3092u);
        else EXPECT_EQ(n.population, 40u);
    }
    EXPECT_EQ(node_population(b.store, std::vector<MajorIx>{psy}), 3092u);
    check_structure(b.h, 2);
}

TEST(Hierarchy, EmptyStagesAreLoggedAndDoNotSplit) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    add_cohort(rows, grads, "A", 15, {"shared", "a1"});
    add_cohort(rows, grads, "B", 15, {"shared", "b1"});
    const auto b = build(ecamp::test::make_store(rows, grads));
    // Only stage 1 has courses; it keeps A and B together (shared course).
    EXPECT_EQ(b.h.warnings.size(), 7u);
    for (const auto& n : b.h.nodes)
        if (n.stage > 0) EXPECT_EQ(n.members.size(), 2u);
    EXPECT_EQ(b.h.leaves().size(), 1u);
    EXPECT_EQ(b.h.nodes[static_cast<std::size_t>(b.h.leaves()[0])].stage, 8);
    check_structure(b.h, 2);
}

TEST(Hierarchy, PlantedWorldRecoveredExactly) {
    auto w = ecamp::test::build_world(2, ecamp::test::small_world(12, 20000, 0.0));
    const auto got = partition_sequence(w.model->hierarchy, w.model->store);
    const auto want = synth::planted_partitions(w.manifest.json);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t t = 0; t < got.size(); ++t) EXPECT_EQ(got[t], want[t]) << "stage " << t + 1;
    EXPECT_EQ(robinson_foulds(got, want), 0u);
    check_structure(w.model->hierarchy, 12);
}

TEST(Hierarchy, RefinementAndConservationOnNoisyWorld) {
    auto w = ecamp::test::build_world(4, ecamp::test::small_world(15, 6000, 0.35));
    const auto& h = w.model->hierarchy;
    check_structure(h, 15);
    EXPECT_EQ(h.nodes[0].population, w.model->store.graduations().size());
    const auto seq = partition_sequence(h, w.model->store);
    for (std::size_t t = 1; t < seq.size(); ++t)
        for (const auto& g : seq[t]) {
            bool inside = false;
            for (const auto& parent : seq[t - 1])
                inside |= std::includes(parent.begin(), parent.end(), g.begin(), g.end());
            EXPECT_TRUE(inside) << "stage " << t + 1;
        }
}

TEST(Hierarchy, DeterministicForIdenticalInputs) {
    const auto cfg = ecamp::test::small_world(10, 3000, 0.35);
    auto a = ecamp::test::build_world(9, cfg);
    auto b = ecamp::test::build_world(9, cfg);
    EXPECT_EQ(hierarchy_json(a.model->hierarchy, a.model->store).dump(),
              hierarchy_json(b.model->hierarchy, b.model->store).dump());
}

TEST(Hierarchy, PerStageThetaIsRecorded) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    add_cohort(rows, grads, "A", 15, {"shared", "a1"});
    add_cohort(rows, grads, "B", 15, {"shared", "b1"});
    HierarchyConfig cfg;
    cfg.theta_per_stage = {0.9, 0.1};
    const auto b = build(ecamp::test::make_store(rows, grads), cfg);
    ASSERT_EQ(b.h.thetas.size(), 8u);
    EXPECT_EQ(b.h.thetas[0], 0.9);
    EXPECT_EQ(b.h.thetas[1], 0.1);
    EXPECT_EQ(b.h.thetas[2], 0.5);
}

TEST(RobinsonFoulds, CountsSymmetricDifference) {
    const std::vector<CodePartition> a{{{"A", "B"}, {"C"}}, {{"A"}, {"B"}, {"C"}}};
    const std::vector<CodePartition> b{{{"A"}, {"B", "C"}}, {{"A"}, {"B"}, {"C"}}};
    EXPECT_EQ(robinson_foulds(a, a), 0u);
    // {A,B} only in a; {B,C} only in b. Singletons are shared.
    EXPECT_EQ(robinson_foulds(a, b), 2u);
    EXPECT_EQ(robinson_foulds(b, a), 2u);
}

TEST(Hierarchy, JsonDumpListsEveryNode) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    add_cohort(rows, grads, "PSY", 20, {"p"});
    add_cohort(rows, grads, "ART", 20, {"a"});
    const auto b = build(ecamp::test::make_store(rows, grads));
    const auto j = hierarchy_json(b.h, b.store);
    EXPECT_EQ(j.at("schema_version"), kHierarchySchemaVersion);
    ASSERT_EQ(j.at("nodes").size(), b.h.nodes.size());
    EXPECT_TRUE(j.at("nodes")[0].at("parent").is_null());
    EXPECT_EQ(j.at("nodes")[0].at("population"), 40);
    EXPECT_EQ(j.at("nodes")[0].at("members"), nlohmann::json({"ART", "PSY"}));
}
