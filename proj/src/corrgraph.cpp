#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecamp/corrgraph.hpp"
#include "ecamp/error.hpp"
#include "ecamp/parallel.hpp"

namespace ecamp {

double pcc(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return 0.0;
    // Exact check: a constant column can leave rounding residue in the
    // centered sums instead of a clean zero.
    const bool const_x = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    const bool const_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (const_x || const_y) return 0.0;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

double c_value(std::span<const double> x, std::span<const double> y) {
    return static_cast<double>(x.size()) * pcc(x, y);
}

std::optional<std::size_t> CourseGraph::position(CourseIx c) const {
    const auto it = std::lower_bound(courses.begin(), courses.end(), c);
    if (it == courses.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - courses.begin());
}

CoreSet core_set(const CourseGraph& g, int k) {
    CoreSet out;
    out.major = g.major;
    out.k = k;
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), g.size());
    for (std::size_t i = 0; i < take; ++i) out.courses.push_back(g.courses[g.by_rank[i]]);
    return out;
}

CourseGraph build_course_graph(const RecordStore& store, const Timelines& timelines, MajorIx major,
                               const CorrGraphConfig& config) {
    const auto grads = store.major_graduates(major);
    if (static_cast<int>(grads.size()) < config.min_graduates)
        throw ModelError("major " + store.majors()[major].code + " has " + std::to_string(grads.size()) +
                         " graduates, fewer than " + std::to_string(config.min_graduates));

    const auto ev_course = store.event_courses();
    const auto ev_grade = store.event_grades();
    const auto ev_points = store.event_points();

    // Distinct takers per course among the major's graduates.
    std::vector<std::uint32_t> takers(store.num_courses(), 0);
    std::vector<std::uint32_t> seen(store.num_courses(), UINT32_MAX);
    for (std::uint32_t si = 0; si < grads.size(); ++si) {
        const auto [first, last] = store.student_event_range(grads[si]);
        for (EventIx e = first; e < last; ++e) {
            const CourseIx c = ev_course[e];
            if (seen[c] != si) {
                seen[c] = si;
                ++takers[c];
            }
        }
    }

    CourseGraph g;
    g.major = major;
    std::vector<std::int64_t> pos(store.num_courses(), -1);
    for (CourseIx c = 0; c < store.num_courses(); ++c)
        if (static_cast<int>(takers[c]) >= config.min_course_students) {
            pos[c] = static_cast<std::int64_t>(g.courses.size());
            g.courses.push_back(c);
        }
    const std::size_t nc = g.courses.size();
    const std::size_t ns = grads.size();

    // Last grade per (student, course): events are ordered by term within a
    // student, so later events overwrite earlier ones.
    constexpr std::uint8_t kNone = 0xff;
    std::vector<std::uint8_t> last_token(ns * nc, kNone);
    std::vector<double> points(ns * nc, std::nan(""));
    std::vector<double> sem_sum(nc, 0.0);
    std::vector<std::uint32_t> sem_count(nc, 0);
    for (std::size_t si = 0; si < ns; ++si) {
        const auto [first, last] = store.student_event_range(grads[si]);
        for (EventIx e = first; e < last; ++e) {
            const auto p = pos[ev_course[e]];
            if (p < 0) continue;
            const auto ci = static_cast<std::size_t>(p);
            last_token[si * nc + ci] = static_cast<std::uint8_t>(ev_grade[e]);
            points[si * nc + ci] = ev_points[e];
            sem_sum[ci] += timelines.stage_of_event(e);
            ++sem_count[ci];
        }
    }

    g.stats.resize(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
        auto& st = g.stats[ci];
        st.course = g.courses[ci];
        st.avg_semester = sem_sum[ci] / static_cast<double>(sem_count[ci]);
        std::uint32_t fails = 0, nf = 0, nm = 0;
        for (std::size_t si = 0; si < ns; ++si) {
            const auto tok = last_token[si * nc + ci];
            if (tok == kNone) continue;
            ++st.enrollment;
            ++st.histogram[tok];
            const auto grade = static_cast<GradeToken>(tok);
            if (grade == GradeToken::F || (config.withdrawal_counts_as_failure && grade == GradeToken::W)) ++fails;
            const Gender gd = store.gender(grads[si]);
            if (gd == Gender::F) ++nf;
            else if (gd == Gender::M) ++nm;
        }
        const double e = st.enrollment;
        st.failure_rate = fails / e;
        st.gender.f = nf / e;
        st.gender.m = nm / e;
        st.gender.u = (st.enrollment - nf - nm) / e;
    }

    // Column-major copy so each course's grades are contiguous.
    std::vector<double> col(nc * ns);
    for (std::size_t si = 0; si < ns; ++si)
        for (std::size_t ci = 0; ci < nc; ++ci) col[ci * ns + si] = points[si * nc + ci];

    g.r.assign(nc * nc, 0.0);
    g.n.assign(nc * nc, 0);
    std::vector<double> x, y;
    x.reserve(ns);
    y.reserve(ns);
    for (std::size_t a = 0; a < nc; ++a) {
        const double* ca = col.data() + a * ns;
        for (std::size_t b = a; b < nc; ++b) {
            const double* cb = col.data() + b * ns;
            x.clear();
            y.clear();
            for (std::size_t si = 0; si < ns; ++si)
                if (!std::isnan(ca[si]) && !std::isnan(cb[si])) {
                    x.push_back(ca[si]);
                    y.push_back(cb[si]);
                }
            const double r = pcc(x, y);
            const auto cnt = static_cast<std::uint32_t>(x.size());
            g.r[a * nc + b] = g.r[b * nc + a] = r;
            g.n[a * nc + b] = g.n[b * nc + a] = cnt;
        }
    }

    for (std::size_t a = 0; a < nc; ++a) {
        double total = 0.0;
        for (std::size_t b = 0; b < nc; ++b)
            if (a != b) total += g.c_at(a, b);
        g.stats[a].total_c = total;
    }
    g.by_rank.resize(nc);
    std::iota(g.by_rank.begin(), g.by_rank.end(), 0);
    std::stable_sort(g.by_rank.begin(), g.by_rank.end(),
                     [&](std::size_t a, std::size_t b) { return g.stats[a].total_c > g.stats[b].total_c; });
    for (std::size_t i = 0; i < nc; ++i) g.stats[g.by_rank[i]].core_rank = static_cast<int>(i) + 1;
    return g;
}

CourseGraphSet build_all_course_graphs(const RecordStore& store, const Timelines& timelines,
                                       const CorrGraphConfig& config) {
    CourseGraphSet out;
    const std::size_t nm = store.num_majors();
    out.graphs.resize(nm);
    parallel_for(nm, [&](std::size_t m) {
        if (static_cast<int>(store.graduate_count(static_cast<MajorIx>(m))) < config.min_graduates) return;
        out.graphs[m] = build_course_graph(store, timelines, static_cast<MajorIx>(m), config);
    });
    for (MajorIx m = 0; m < nm; ++m)
        if (!out.graphs[m])
            out.skipped.push_back({m, "fewer than " + std::to_string(config.min_graduates) + " graduates (" +
                                          std::to_string(store.graduate_count(m)) + ")"});
    return out;
}

} // namespace ecamp
