#include <algorithm>
#include <cstdio>
#include <ostream>

#include "ecamp/csv.hpp"
#include "ecamp/dropout.hpp"
#include "ecamp/parallel.hpp"

namespace ecamp {

std::vector<CourseIx> courses_taken(const RecordStore& store, StudentIx s) {
    const auto [first, last] = store.student_event_range(s);
    const auto ev_course = store.event_courses();
    std::vector<CourseIx> out(ev_course.begin() + first, ev_course.begin() + last);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<CurriculumSet> build_curricula(const RecordStore& store, const DropoutConfig& config) {
    const std::size_t nm = store.num_majors();
    std::vector<CurriculumSet> out(nm);
    std::vector<std::uint32_t> takers(store.num_courses());
    for (MajorIx m = 0; m < nm; ++m) {
        out[m].major = m;
        const auto grads = store.major_graduates(m);
        if (grads.empty()) continue;
        std::fill(takers.begin(), takers.end(), 0);
        for (StudentIx s : grads)
            for (CourseIx c : courses_taken(store, s)) ++takers[c];
        const double need = config.curriculum_min_frac * static_cast<double>(grads.size());
        for (CourseIx c = 0; c < takers.size(); ++c)
            if (takers[c] > 0 && static_cast<double>(takers[c]) >= need) out[m].courses.push_back(c);
    }
    return out;
}

AttributionIndex::AttributionIndex(const RecordStore& store, std::span<const CurriculumSet> curricula,
                                   std::span<const CoreSet> cores)
    : num_majors_(store.num_majors()),
      candidate_(store.num_majors(), false),
      core_size_(store.num_majors(), 0),
      core_of_course_(store.num_courses()),
      curriculum_of_course_(store.num_courses()) {
    for (MajorIx m = 0; m < num_majors_; ++m) candidate_[m] = store.graduate_count(m) > 0;
    for (const auto& cs : cores) {
        core_size_[cs.major] = static_cast<std::uint32_t>(cs.courses.size());
        for (CourseIx c : cs.courses) core_of_course_[c].push_back(cs.major);
    }
    for (const auto& cur : curricula)
        for (CourseIx c : cur.courses) curriculum_of_course_[c].push_back(cur.major);
    for (auto& v : core_of_course_) std::sort(v.begin(), v.end());
    for (auto& v : curriculum_of_course_) std::sort(v.begin(), v.end());
}

std::optional<DropoutAttribution> AttributionIndex::infer(std::span<const CourseIx> taken) const {
    std::vector<std::uint32_t> core_hits(num_majors_, 0), cur_hits(num_majors_, 0);
    std::vector<MajorIx> touched;
    for (CourseIx c : taken) {
        if (c >= core_of_course_.size()) continue;
        for (MajorIx m : core_of_course_[c]) {
            if (core_hits[m] == 0 && cur_hits[m] == 0) touched.push_back(m);
            ++core_hits[m];
        }
        for (MajorIx m : curriculum_of_course_[c]) {
            if (core_hits[m] == 0 && cur_hits[m] == 0) touched.push_back(m);
            ++cur_hits[m];
        }
    }
    // Fractions compared by cross-multiplication so ties are exact.
    auto better = [&](MajorIx a, MajorIx b) {
        const std::uint64_t ka = std::max<std::uint32_t>(core_size_[a], 1);
        const std::uint64_t kb = std::max<std::uint32_t>(core_size_[b], 1);
        const std::uint64_t lhs = core_hits[a] * kb, rhs = core_hits[b] * ka;
        if (lhs != rhs) return lhs > rhs;
        if (cur_hits[a] != cur_hits[b]) return cur_hits[a] > cur_hits[b];
        return a < b;
    };
    std::optional<MajorIx> best;
    for (MajorIx m : touched)
        if (candidate_[m] && (!best || better(m, *best))) best = m;
    if (!best) {
        // Nothing overlaps: every candidate scores zero, lowest code wins.
        for (MajorIx m = 0; m < num_majors_ && !best; ++m)
            if (candidate_[m]) best = m;
        if (!best) return std::nullopt;
    }
    DropoutAttribution a;
    a.major = *best;
    a.courses_taken = static_cast<std::uint32_t>(taken.size());
    a.core_coverage = core_size_[*best] ? static_cast<double>(core_hits[*best]) / core_size_[*best] : 0.0;
    a.overlap_ratio = taken.empty() ? 0.0 : static_cast<double>(cur_hits[*best]) / static_cast<double>(taken.size());
    return a;
}

DropoutResult infer_intended_majors(const RecordStore& store, const Timelines& timelines,
                                    const AttributionIndex& index, const DropoutConfig& config) {
    DropoutResult out;
    std::vector<StudentIx> withdrawn;
    for (const auto& t : timelines.students)
        if (t.status == StudentStatus::Withdrawn) withdrawn.push_back(t.student);
    out.withdrawn_total = withdrawn.size();

    std::vector<std::optional<DropoutAttribution>> slots(withdrawn.size());
    std::vector<std::uint8_t> too_few(withdrawn.size(), 0);
    parallel_for(withdrawn.size(), [&](std::size_t i) {
        const auto taken = courses_taken(store, withdrawn[i]);
        if (static_cast<int>(taken.size()) < config.min_courses_for_attribution) {
            too_few[i] = 1;
            return;
        }
        slots[i] = index.infer(taken);
        if (slots[i]) slots[i]->student = withdrawn[i];
    });
    for (std::size_t i = 0; i < withdrawn.size(); ++i) {
        if (slots[i]) out.attributions.push_back(*slots[i]);
        else out.unattributed.push_back(withdrawn[i]);
    }
    return out;
}

std::vector<MajorDropoutStats> aggregate_dropouts(const DropoutResult& result, const RecordStore& store) {
    std::vector<MajorDropoutStats> out(store.num_majors());
    for (MajorIx m = 0; m < out.size(); ++m) {
        out[m].major = m;
        out[m].graduates = store.graduate_count(m);
    }
    for (const auto& a : result.attributions) {
        ++out[a.major].dropouts;
        out[a.major].overlap_sum += a.overlap_ratio;
    }
    for (auto& s : out)
        if (s.dropouts > 0) s.average_overlap = s.overlap_sum / static_cast<double>(s.dropouts);
    return out;
}

void attach_to_hierarchy(MajorHierarchy& h, std::span<const MajorDropoutStats> stats, double bar_length) {
    for (auto& n : h.nodes) {
        NodeDropout d;
        d.attached = true;
        double overlap_sum = 0.0;
        for (MajorIx m : n.members) {
            d.graduates += stats[m].graduates;
            d.dropouts += stats[m].dropouts;
            overlap_sum += stats[m].overlap_sum;
        }
        d.gray = bar_length;
        if (d.graduates + d.dropouts > 0) {
            d.rate = static_cast<double>(d.dropouts) / static_cast<double>(d.graduates + d.dropouts);
            d.red = *d.rate * bar_length;
        }
        if (d.dropouts > 0) {
            d.confidence = overlap_sum / static_cast<double>(d.dropouts);
            d.opacity = *d.confidence;
        }
        n.dropout = d;
    }
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

void write_dropouts_csv(std::ostream& out, std::span<const MajorDropoutStats> stats, const RecordStore& store) {
    std::vector<const MajorDropoutStats*> rows;
    for (const auto& s : stats) rows.push_back(&s);
    std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
        if (a->graduates != b->graduates) return a->graduates > b->graduates;
        return a->major < b->major;
    });
    out << "major_code,major_name,graduates,estimated_dropouts,average_overlap_pct\n";
    for (const auto* s : rows) {
        const auto& entry = store.majors()[s->major];
        out << csv::escape(entry.code) << ',' << csv::escape(entry.name) << ',' << s->graduates << ','
            << s->dropouts << ',' << (s->average_overlap ? fixed(*s->average_overlap * 100.0, 2) : "—") << '\n';
    }
}

void write_attributions_csv(std::ostream& out, const DropoutResult& result, const RecordStore& store) {
    out << "student_id,major_code,core_coverage,overlap_ratio,courses_taken\n";
    for (const auto& a : result.attributions)
        out << csv::escape(store.student_ids()[a.student]) << ',' << csv::escape(store.majors()[a.major].code) << ','
            << fixed(a.core_coverage, 6) << ',' << fixed(a.overlap_ratio, 6) << ',' << a.courses_taken << '\n';
    for (StudentIx s : result.unattributed)
        out << csv::escape(store.student_ids()[s]) << ",,,," << courses_taken(store, s).size() << '\n';
}

} // namespace ecamp
