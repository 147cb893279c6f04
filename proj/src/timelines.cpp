#include <algorithm>
#include <cmath>
#include <limits>

#include "ecamp/error.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

Timelines build_timelines(const RecordStore& store, const RecordsConfig& config) {
    Timelines tl;
    tl.stage_cap = config.stage_cap;
    const auto terms = store.event_terms();
    const std::size_t ns = store.num_students();

    std::vector<std::int32_t> observed(terms.begin(), terms.end());
    std::sort(observed.begin(), observed.end());
    observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
    for (auto o : observed) tl.dataset_terms.push_back(TermId::from_ordinal(o));
    // Rank of a term ordinal within the observed sequence.
    auto observed_rank = [&](std::int32_t ordinal) {
        return static_cast<long>(std::lower_bound(observed.begin(), observed.end(), ordinal) - observed.begin());
    };
    const long final_rank = static_cast<long>(observed.size()) - 1;

    tl.students.resize(ns);
    tl.event_index.assign(store.num_events(), 0);
    for (StudentIx s = 0; s < ns; ++s) {
        auto& t = tl.students[s];
        t.student = s;
        const auto [first, last] = store.student_event_range(s);
        // Events are sorted by term within a student, so distinct terms are runs.
        std::uint16_t rel = 0;
        for (EventIx e = first; e < last; ++e) {
            if (e == first || terms[e] != terms[e - 1]) {
                ++rel;
                t.terms.push_back(TermId::from_ordinal(terms[e]));
            }
            tl.event_index[e] = rel;
        }
        const auto majors = store.student_majors(s);
        t.majors.assign(majors.begin(), majors.end());
        if (!majors.empty()) {
            t.status = StudentStatus::Graduated;
            if (t.terms.empty()) tl.graduates_without_events.push_back(s);
        } else if (store.has_withdrawals()) {
            t.status = store.withdrawal_term(s) ? StudentStatus::Withdrawn : StudentStatus::Censored;
        } else if (!t.terms.empty() &&
                   final_rank - observed_rank(t.terms.back().ordinal()) >= config.censor_gap) {
            t.status = StudentStatus::Withdrawn;
        } else {
            t.status = StudentStatus::Censored;
        }
    }
    return tl;
}

SemesterCourseSets build_semester_sets(const RecordStore& store, const Timelines& timelines,
                                       const RecordsConfig& config) {
    const int cap = config.stage_cap;
    const std::size_t nc = store.num_courses();
    SemesterCourseSets out;
    out.sets.assign(static_cast<std::size_t>(cap), {});
    out.mean_stage.assign(nc, std::numeric_limits<double>::quiet_NaN());
    out.course_stage.assign(nc, 0);

    for (CourseIx c = 0; c < nc; ++c) {
        const auto events = store.course_events(c);
        if (events.empty()) continue;
        double sum = 0.0;
        for (EventIx e : events) sum += std::min<int>(timelines.event_index[e], cap);
        const double mean = sum / static_cast<double>(events.size());
        out.mean_stage[c] = mean;
        if (static_cast<int>(events.size()) < config.min_enrollment) continue;
        // round half up
        const int t = std::clamp(static_cast<int>(std::floor(mean + 0.5)), 1, cap);
        out.course_stage[c] = static_cast<std::uint8_t>(t);
        out.sets[static_cast<std::size_t>(t - 1)].push_back(c);
    }
    for (int t = 1; t <= cap; ++t)
        if (out.sets[static_cast<std::size_t>(t - 1)].empty()) out.empty_stages.push_back(t);
    return out;
}

std::vector<CourseIx> semester_course_set(const RecordStore& store, const Timelines& timelines, int t,
                                          const RecordsConfig& config) {
    if (t < 1 || t > config.stage_cap) throw ModelError("semester index out of range");
    auto sets = build_semester_sets(store, timelines, config);
    return std::move(sets.sets[static_cast<std::size_t>(t - 1)]);
}

} // namespace ecamp
