#include <algorithm>
#include <cmath>
#include <iterator>

#include "ecamp/affinity.hpp"
#include "ecamp/error.hpp"

namespace ecamp {

EnrollmentCounts::EnrollmentCounts(const RecordStore& store) {
    const std::size_t nc = store.num_courses();
    const std::size_t nm = store.num_majors();
    const auto ev_course = store.event_courses();

    major_size_.resize(nm);
    major_courses_.resize(nm);
    // Per-course dense counters reused across majors; `stamp` dedupes
    // retakes within one student.
    std::vector<std::uint32_t> dense(nc, 0);
    std::vector<std::uint32_t> stamp(nc, 0);
    std::uint32_t token = 0;
    std::vector<std::vector<std::pair<MajorIx, std::uint32_t>>> per_course(nc);
    for (MajorIx m = 0; m < nm; ++m) {
        const auto grads = store.major_graduates(m);
        major_size_[m] = static_cast<std::uint32_t>(grads.size());
        std::vector<CourseIx> touched;
        for (StudentIx s : grads) {
            ++token;
            const auto [first, last] = store.student_event_range(s);
            for (EventIx e = first; e < last; ++e) {
                const CourseIx c = ev_course[e];
                if (stamp[c] == token) continue;
                stamp[c] = token;
                if (dense[c]++ == 0) touched.push_back(c);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (CourseIx c : touched) {
            per_course[c].emplace_back(m, dense[c]);
            dense[c] = 0;
        }
        major_courses_[m] = std::move(touched);
    }

    offsets_.assign(nc + 1, 0);
    norm2_.assign(nc, 0.0);
    for (CourseIx c = 0; c < nc; ++c) {
        offsets_[c + 1] = offsets_[c] + static_cast<std::uint32_t>(per_course[c].size());
        double sq = 0.0;
        for (const auto& [m, n] : per_course[c]) sq += static_cast<double>(n) * static_cast<double>(n);
        norm2_[c] = std::sqrt(sq);
    }
    entries_.reserve(offsets_[nc]);
    for (auto& v : per_course) entries_.insert(entries_.end(), v.begin(), v.end());
}

std::span<const std::pair<MajorIx, std::uint32_t>> EnrollmentCounts::counts(CourseIx c) const {
    return {entries_.data() + offsets_[c], entries_.data() + offsets_[c + 1]};
}

std::uint32_t EnrollmentCounts::count(CourseIx c, MajorIx m) const {
    const auto row = counts(c);
    const auto it = std::lower_bound(row.begin(), row.end(), m,
                                     [](const auto& p, MajorIx key) { return p.first < key; });
    return it != row.end() && it->first == m ? it->second : 0;
}

namespace {

inline double course_term(const EnrollmentCounts& counts, CourseIx c, MajorIx major, double size) {
    return static_cast<double>(counts.count(c, major)) / (counts.norm2(c) * size);
}

} // namespace

MajorAffinity m_value(const EnrollmentCounts& counts, MajorIx major, std::span<const CourseIx> course_set) {
    if (major >= counts.num_majors() || counts.major_size(major) == 0)
        throw ModelError("undefined major: no graduates");
    MajorAffinity out;
    out.major = major;
    out.course_set.assign(course_set.begin(), course_set.end());
    out.empty_course_set = course_set.empty();
    const double size = counts.major_size(major);
    double sum = 0.0;
    for (CourseIx c : course_set) {
        if (c >= counts.num_courses() || counts.norm2(c) == 0.0)
            throw ModelError("course in set has no graduate enrollments");
        sum += course_term(counts, c, major, size);
    }
    out.value = sum;
    return out;
}

std::vector<CourseIx> restricted_course_set(const EnrollmentCounts& counts, MajorIx major,
                                            std::span<const CourseIx> stage_set) {
    std::vector<CourseIx> out;
    const auto own = counts.major_courses(major);
    std::set_intersection(stage_set.begin(), stage_set.end(), own.begin(), own.end(), std::back_inserter(out));
    return out;
}

SimilarityResult pairwise_similarity(const EnrollmentCounts& counts, MajorIx a, MajorIx b,
                                     std::span<const CourseIx> stage_set) {
    const auto ca = restricted_course_set(counts, a, stage_set);
    const auto cb = restricted_course_set(counts, b, stage_set);
    const double ma = m_value(counts, a, cb).value;
    const double mb = m_value(counts, b, ca).value;
    return {(ma + mb) / 2.0, ca.empty() && cb.empty()};
}

MajorSimilarityMatrix similarity_matrix(const EnrollmentCounts& counts, std::span<const MajorIx> majors,
                                        std::span<const CourseIx> stage_set, int stage) {
    MajorSimilarityMatrix out;
    out.stage = stage;
    out.course_count = stage_set.size();
    out.majors.assign(majors.begin(), majors.end());
    std::sort(out.majors.begin(), out.majors.end());
    const std::size_t n = out.majors.size();

    // Position of each catalog major in the matrix, or -1.
    std::vector<std::int64_t> pos(counts.num_majors(), -1);
    for (std::size_t i = 0; i < n; ++i) pos[out.majors[i]] = static_cast<std::int64_t>(i);

    // acc[i*n + j] = M_i restricted to C_j: summed over the courses both took,
    // in ascending course order so each cell matches m_value bit for bit.
    std::vector<double> acc(n * n, 0.0);
    std::vector<bool> has_courses(n, false);
    std::vector<std::pair<std::size_t, double>> present;
    for (CourseIx c : stage_set) {
        present.clear();
        for (const auto& [m, cnt] : counts.counts(c)) {
            const auto p = pos[m];
            if (p < 0) continue;
            const double size = counts.major_size(m);
            present.emplace_back(static_cast<std::size_t>(p), static_cast<double>(cnt) / (counts.norm2(c) * size));
        }
        for (const auto& [i, term] : present) {
            has_courses[i] = true;
            double* row = acc.data() + i * n;
            for (const auto& [j, unused] : present) row[j] += term;
        }
    }

    out.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = (acc[i * n + j] + acc[j * n + i]) / 2.0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (!has_courses[i] && !has_courses[j]) out.empty_pairs.emplace_back(out.majors[i], out.majors[j]);
    }
    return out;
}

MajorSimilarityMatrix MajorSimilarityMatrix::restrict_to(std::span<const std::size_t> rows) const {
    MajorSimilarityMatrix out;
    out.stage = stage;
    out.course_count = course_count;
    const std::size_t k = rows.size();
    out.values.resize(k * k);
    for (std::size_t a = 0; a < k; ++a) {
        out.majors.push_back(majors[rows[a]]);
        for (std::size_t b = 0; b < k; ++b) out.values[a * k + b] = at(rows[a], rows[b]);
    }
    for (const auto& p : empty_pairs) {
        const bool in_a = std::find(out.majors.begin(), out.majors.end(), p.first) != out.majors.end();
        const bool in_b = std::find(out.majors.begin(), out.majors.end(), p.second) != out.majors.end();
        if (in_a && in_b) out.empty_pairs.push_back(p);
    }
    return out;
}

nlohmann::json similarity_matrix_json(const MajorSimilarityMatrix& m, const RecordStore& store) {
    nlohmann::json j;
    j["schema_version"] = kSimilaritySchemaVersion;
    j["stage"] = m.stage;
    auto codes = nlohmann::json::array();
    for (MajorIx x : m.majors) codes.push_back(store.majors()[x].code);
    j["majors"] = std::move(codes);
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t jx = 0; jx < m.size(); ++jx) row.push_back(m.at(i, jx));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

} // namespace ecamp
