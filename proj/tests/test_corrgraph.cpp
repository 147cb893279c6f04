#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ecamp/corrgraph.hpp"
#include "ecamp/error.hpp"
#include "support.hpp"

using namespace ecamp;
using ecamp::test::Row;

namespace {

// One-pass textbook formula in long double, written independently of pcc().
double textbook_r(const std::vector<double>& x, const std::vector<double>& y) {
    const long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    if (den == 0) return 0.0;
    return static_cast<double>((n * sxy - sx * sy) / den);
}

CorrGraphConfig loose() {
    CorrGraphConfig c;
    c.min_graduates = 1;
    c.min_course_students = 1;
    return c;
}

// Graduates g0..g{n-1} of M, each taking the listed (course, grade) pairs.
void grads_with(std::vector<Row>& rows, std::vector<std::pair<std::string, std::string>>& grads, int n,
                const std::string& prefix, const std::string& major) {
    for (int i = 0; i < n; ++i) grads.emplace_back(prefix + std::to_string(i), major);
}

} // namespace

TEST(Pcc, Examples) {
    const std::vector<double> x{4, 3, 2};
    const std::vector<double> y{4, 2, 3};
    EXPECT_NEAR(pcc(x, y), 0.5, 1e-15);
    EXPECT_NEAR(c_value(x, y), 1.5, 1e-15);
    EXPECT_EQ(pcc(x, x), 1.0);
    const std::vector<double> neg{-2 * 4 + 1, -2 * 3 + 1, -2 * 2 + 1};
    EXPECT_EQ(pcc(x, neg), -1.0);
    const std::vector<double> five{1, 2, 3, 4, 0.5};
    EXPECT_EQ(c_value(five, five), 5.0);
}

TEST(Pcc, DegenerateInputsGiveZero) {
    const std::vector<double> one{3.0};
    EXPECT_EQ(pcc(one, one), 0.0);
    EXPECT_EQ(c_value(one, one), 0.0);
    const std::vector<double> flat{3.7, 3.7, 3.7};
    const std::vector<double> var{1.0, 2.0, 4.0};
    EXPECT_EQ(pcc(flat, var), 0.0);
    EXPECT_EQ(pcc(var, flat), 0.0);
    EXPECT_EQ(pcc({}, {}), 0.0);
}

TEST(Pcc, MatchesTextbookOracleOnRandomSamples) {
    std::mt19937_64 rng(2024);
    const double scale[] = {4.0, 3.7, 3.3, 3.0, 2.7, 2.3, 2.0, 1.7, 1.3, 1.0, 0.0};
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 300;
        std::vector<double> x(n), y(n);
        const bool continuous = trial % 2 == 1;
        std::normal_distribution<double> z(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (continuous) {
                x[i] = z(rng);
                y[i] = 0.4 * x[i] + z(rng);
            } else {
                x[i] = scale[rng() % 11];
                y[i] = scale[rng() % 11];
            }
        }
        const double r = pcc(x, y);
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        worst = std::max(worst, std::abs(r - textbook_r(x, y)));
        EXPECT_EQ(c_value(x, y), static_cast<double>(n) * r);
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Pcc, DuplicatingObservationsDoublesC) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 5);
            y[i] = static_cast<double>(rng() % 5);
        }
        auto x2 = x, y2 = y;
        x2.insert(x2.end(), x.begin(), x.end());
        y2.insert(y2.end(), y.begin(), y.end());
        // Means of 2n values round differently, so equality holds to a few ulps.
        EXPECT_NEAR(pcc(x2, y2), pcc(x, y), 1e-14);
        EXPECT_NEAR(c_value(x2, y2), 2 * c_value(x, y), 1e-12 * static_cast<double>(n));
    }
}

TEST(Pcc, SmallCohortCannotOutweighBroadCorrelation) {
    // Five students who all did well in both courses versus a broad,
    // moderate correlation.
    const std::vector<double> a{4, 3.7, 4, 3.7, 4};
    const std::vector<double> b{4, 3.7, 4, 3.7, 4};
    std::vector<double> x, y;
    std::mt19937 rng(1);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        x.push_back(z(rng));
        y.push_back(0.3 * x.back() + z(rng));
    }
    EXPECT_GT(pcc(a, b), pcc(x, y));
    EXPECT_LE(c_value(a, b), 5.0);
    EXPECT_GT(c_value(x, y), c_value(a, b));
}

TEST(CourseStats, FailureRateCountsFAndW) {
    std::vector<Row> rows{{"g0", "2015-FA", "X", "A"}, {"g1", "2015-FA", "X", "F"},
                          {"g2", "2015-FA", "X", "W"}, {"g3", "2015-FA", "X", "B"}};
    std::vector<std::pair<std::string, std::string>> grads;
    grads_with(rows, grads, 4, "g", "M");
    const auto s = ecamp::test::make_store(rows, grads);
    const auto tl = build_timelines(s, {});
    const auto g = build_course_graph(s, tl, 0, loose());
    ASSERT_EQ(g.size(), 1u);
    const auto& st = g.stats[0];
    EXPECT_EQ(st.failure_rate, 0.5);
    EXPECT_EQ(st.enrollment, 4u);
    EXPECT_EQ(st.histogram[static_cast<int>(GradeToken::W)], 1u);
    // Without the W rule only F counts.
    auto cfg = loose();
    cfg.withdrawal_counts_as_failure = false;
    EXPECT_EQ(build_course_graph(s, tl, 0, cfg).stats[0].failure_rate, 0.25);
}

TEST(CourseStats, RatesHistogramAndGender) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    for (int i = 0; i < 30; ++i) {
        rows.push_back({"g" + std::to_string(i), "2015-FA", "X", i < 3 ? "F" : "B+"});
        rows.push_back({"g" + std::to_string(i), "2015-FA", "Y", "A"});
    }
    grads_with(rows, grads, 30, "g", "M");
    const auto s = ecamp::test::make_store(rows, grads);
    const auto tl = build_timelines(s, {});
    const auto g = build_course_graph(s, tl, 0, {});
    const auto x = *g.position(ecamp::test::course_ix(s, "X"));
    const auto y = *g.position(ecamp::test::course_ix(s, "Y"));
    EXPECT_NEAR(g.stats[x].failure_rate, 0.1, 1e-15);
    EXPECT_EQ(g.stats[y].failure_rate, 0.0);
    for (const auto& st : g.stats) {
        std::uint32_t total = 0;
        for (auto h : st.histogram) total += h;
        EXPECT_EQ(total, st.enrollment);
        // No students file: every label is unknown.
        EXPECT_EQ(st.gender.u, 1.0);
        EXPECT_EQ(st.gender.f + st.gender.m, 0.0);
        EXPECT_EQ(st.avg_semester, 1.0);
    }
    // Y is constant: zero variance gives r = 0 and C = 0.
    EXPECT_EQ(g.pcc_at(x, y), 0.0);
    EXPECT_EQ(g.c_at(x, y), 0.0);
}

TEST(CourseStats, GenderFractionsFromStudentsFile) {
    StoreBuilder b;
    b.add_major("M", "M");
    const char* genders = "FFMU";
    for (int i = 0; i < 4; ++i) {
        const auto id = "g" + std::to_string(i);
        b.add_grade(id, "X", *parse_term("2015-FA"), GradeToken::B);
        b.add_graduation(id, "M", *parse_term("2019-SP"));
        b.set_gender(id, genders[i] == 'F' ? Gender::F : genders[i] == 'M' ? Gender::M : Gender::U);
    }
    const auto s = b.build();
    const auto g = build_course_graph(s, build_timelines(s, {}), 0, loose());
    EXPECT_EQ(g.stats[0].gender.f, 0.5);
    EXPECT_EQ(g.stats[0].gender.m, 0.25);
    EXPECT_EQ(g.stats[0].gender.u, 0.25);
}

TEST(CourseGraph, RetakeKeepsLastGradeAndNonGraduatesAreExcluded) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    // g0..g3: X then Y, with g0 retaking X (F -> A).
    const double xs[] = {4.0, 3.0, 2.0, 1.0};
    const char* xl[] = {"A", "B", "C", "D"};
    const char* yl[] = {"A", "C", "B", "D"};
    for (int i = 0; i < 4; ++i) {
        const auto id = "g" + std::to_string(i);
        rows.push_back({id, "2016-SP", "X", xl[i]});
        rows.push_back({id, "2016-SP", "Y", yl[i]});
    }
    rows.push_back({"g0", "2015-FA", "X", "F"});
    // Non-graduates with anti-correlated grades must not leak in.
    for (int i = 0; i < 5; ++i) {
        rows.push_back({"n" + std::to_string(i), "2015-FA", "X", "A"});
        rows.push_back({"n" + std::to_string(i), "2015-FA", "Y", "F"});
    }
    rows.push_back({"n0", "2015-FA", "Z", "B"});
    grads_with(rows, grads, 4, "g", "M");
    const auto s = ecamp::test::make_store(rows, grads);
    const auto g = build_course_graph(s, build_timelines(s, {}), 0, loose());
    ASSERT_EQ(g.size(), 2u);  // Z has no graduate takers
    const std::vector<double> x(std::begin(xs), std::end(xs));
    const std::vector<double> y{4.0, 2.0, 3.0, 1.0};
    EXPECT_EQ(g.pcc_at(0, 1), pcc(x, y));
    EXPECT_EQ(g.n_at(0, 1), 4u);
    EXPECT_EQ(g.c_at(0, 1), 4 * pcc(x, y));
    EXPECT_EQ(g.stats[0].enrollment, 4u);
    EXPECT_EQ(g.stats[0].histogram[static_cast<int>(GradeToken::F)], 0u);
    // g0 took X at indices 1 and 2, others at 1: (2 + 1 + 1 + 1 + 1) / 5.
    EXPECT_DOUBLE_EQ(g.stats[0].avg_semester, 6.0 / 5.0);
}

TEST(CourseGraph, MinimumsAreApplied) {
    std::vector<Row> rows;
    std::vector<std::pair<std::string, std::string>> grads;
    for (int i = 0; i < 25; ++i) {
        rows.push_back({"g" + std::to_string(i), "2015-FA", "COMMON", "B"});
        if (i < 9) rows.push_back({"g" + std::to_string(i), "2015-FA", "RARE", "B"});
        if (i < 10) rows.push_back({"g" + std::to_string(i), "2015-FA", "TEN", "B"});
    }
    grads_with(rows, grads, 25, "g", "BIG");
    grads.emplace_back("lone", "SMALL");
    rows.push_back({"lone", "2015-FA", "COMMON", "A"});
    const auto s = ecamp::test::make_store(rows, grads);
    const auto tl = build_timelines(s, {});
    const auto big = ecamp::test::major_ix(s, "BIG");
    const auto small = ecamp::test::major_ix(s, "SMALL");
    const auto g = build_course_graph(s, tl, big, {});
    EXPECT_TRUE(g.position(ecamp::test::course_ix(s, "COMMON")));
    EXPECT_TRUE(g.position(ecamp::test::course_ix(s, "TEN")));
    EXPECT_FALSE(g.position(ecamp::test::course_ix(s, "RARE")));
    EXPECT_THROW(build_course_graph(s, tl, small, {}), ModelError);

    const auto set = build_all_course_graphs(s, tl, {});
    EXPECT_TRUE(set.graphs[big]);
    EXPECT_FALSE(set.graphs[small]);
    ASSERT_EQ(set.skipped.size(), 1u);
    EXPECT_EQ(set.skipped[0].major, small);
}

TEST(CourseGraph, SymmetryRangeAndRankPermutation) {
    auto w = ecamp::test::build_world(3, ecamp::test::small_world(5, 3000, 0.35));
    const auto& m = *w.model;
    for (MajorIx mi = 0; mi < m.store.num_majors(); ++mi) {
        const auto* g = m.graph(mi);
        ASSERT_NE(g, nullptr);
        const auto n = g->size();
        std::vector<int> ranks;
        for (std::size_t a = 0; a < n; ++a) {
            ranks.push_back(g->stats[a].core_rank);
            double total = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                EXPECT_EQ(g->pcc_at(a, b), g->pcc_at(b, a));
                EXPECT_EQ(g->c_at(a, b), g->c_at(b, a));
                EXPECT_EQ(g->c_at(a, b), g->n_at(a, b) * g->pcc_at(a, b));
                EXPECT_GE(g->pcc_at(a, b), -1.0);
                EXPECT_LE(g->pcc_at(a, b), 1.0);
                if (a != b) total += g->c_at(a, b);
            }
            EXPECT_EQ(total, g->stats[a].total_c);
        }
        std::sort(ranks.begin(), ranks.end());
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(ranks[i], static_cast<int>(i) + 1);
        for (std::size_t i = 1; i < n; ++i) {
            const auto& prev = g->stats[g->by_rank[i - 1]];
            const auto& cur = g->stats[g->by_rank[i]];
            EXPECT_GE(prev.total_c, cur.total_c);
            if (prev.total_c == cur.total_c) EXPECT_LT(prev.course, cur.course);
        }
        const auto core = core_set(*g, 6);
        EXPECT_EQ(core.courses.size(), std::min<std::size_t>(6, n));
        EXPECT_EQ(core_set(*g, 1000).courses.size(), n);
    }
}

TEST(CourseGraph, ParallelBuildEqualsSequential) {
    auto w = ecamp::test::build_world(6, ecamp::test::small_world(6, 2000, 0.35));
    const auto& m = *w.model;
    const auto tl = build_timelines(m.store, m.config.records);
    for (MajorIx mi = 0; mi < m.store.num_majors(); ++mi) {
        const auto g = build_course_graph(m.store, tl, mi, m.config.corrgraph);
        EXPECT_EQ(g.r, m.graph(mi)->r);
        EXPECT_EQ(g.n, m.graph(mi)->n);
        EXPECT_EQ(g.by_rank, m.graph(mi)->by_rank);
    }
}

TEST(CourseGraph, NoiselessWorldRecoversPlantedCoresExactly) {
    auto w = ecamp::test::build_world(8, ecamp::test::small_world(6, 6000, 0.0));
    const auto& m = *w.model;
    for (const auto& pm : w.manifest.json.at("majors")) {
        const auto mi = *m.store.find_major(pm.at("code").get<std::string>());
        std::set<std::string> planted;
        for (const auto& c : pm.at("core")) planted.insert(c.get<std::string>());
        std::set<std::string> got;
        for (CourseIx c : core_set(*m.graph(mi), 6).courses) got.insert(m.store.course_ids()[c]);
        EXPECT_EQ(got, planted) << pm.at("code");
    }
}
