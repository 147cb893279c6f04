#pragma once
// Intended-major inference for withdrawn students and per-major dropout
// statistics. The primary score is the share of a major's core courses the
// student took; the share of the student's courses that fall in the major's
// curriculum breaks ties and serves as the reported confidence.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ecamp/config.hpp"
#include "ecamp/corrgraph.hpp"
#include "ecamp/hierarchy.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

struct CurriculumSet {
    MajorIx major = 0;
    std::vector<CourseIx> courses;  // ascending
};

// Courses taken by at least curriculum_min_frac of each major's graduates.
std::vector<CurriculumSet> build_curricula(const RecordStore& store, const DropoutConfig& config);

struct DropoutAttribution {
    StudentIx student = 0;
    MajorIx major = 0;
    double core_coverage = 0.0;
    double overlap_ratio = 0.0;
    std::uint32_t courses_taken = 0;
};

// Candidate sets per major. Majors with an empty core set score 0 coverage;
// majors without graduates are never candidates.
struct AttributionIndex {
    AttributionIndex(const RecordStore& store, std::span<const CurriculumSet> curricula,
                     std::span<const CoreSet> cores);

    // Attribution for a set of distinct courses, or nullopt when no major is a candidate.
    std::optional<DropoutAttribution> infer(std::span<const CourseIx> taken) const;

private:
    std::size_t num_majors_ = 0;
    std::vector<bool> candidate_;
    std::vector<std::uint32_t> core_size_;
    std::vector<std::vector<MajorIx>> core_of_course_;
    std::vector<std::vector<MajorIx>> curriculum_of_course_;
};

struct DropoutResult {
    std::vector<DropoutAttribution> attributions;  // ascending student
    std::vector<StudentIx> unattributed;           // withdrawn with too few courses
    std::size_t withdrawn_total = 0;
};

// Distinct courses of one student, ascending.
std::vector<CourseIx> courses_taken(const RecordStore& store, StudentIx s);

DropoutResult infer_intended_majors(const RecordStore& store, const Timelines& timelines,
                                    const AttributionIndex& index, const DropoutConfig& config);

struct MajorDropoutStats {
    MajorIx major = 0;
    std::uint64_t graduates = 0;
    std::uint64_t dropouts = 0;
    double overlap_sum = 0.0;
    std::optional<double> average_overlap;  // also the confidence
};

// Indexed by MajorIx.
std::vector<MajorDropoutStats> aggregate_dropouts(const DropoutResult& result, const RecordStore& store);

// Fills NodeDropout on every node; internal nodes aggregate their members.
void attach_to_hierarchy(MajorHierarchy& h, std::span<const MajorDropoutStats> stats, double bar_length);

// major_code,major_name,graduates,estimated_dropouts,average_overlap_pct
// sorted by graduates descending, then code.
void write_dropouts_csv(std::ostream& out, std::span<const MajorDropoutStats> stats, const RecordStore& store);
// student_id,major_code,core_coverage,overlap_ratio,courses_taken; unattributed
// students have an empty major code.
void write_attributions_csv(std::ostream& out, const DropoutResult& result, const RecordStore& store);

} // namespace ecamp
