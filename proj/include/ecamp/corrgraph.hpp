#pragma once
// Per-major course-course graph: Pearson correlation of grades between every
// pair of courses, scaled by the number of students who took both (C-Value),
// plus the per-course statistics the node-link view displays.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecamp/config.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

// Two-pass Pearson correlation. N < 2 or zero variance on either side gives 0.
double pcc(std::span<const double> x, std::span<const double> y);
// N * r with N = x.size().
double c_value(std::span<const double> x, std::span<const double> y);

struct GenderSplit {
    double f = 0.0;
    double m = 0.0;
    double u = 0.0;  // unknown or missing labels
};

struct CourseStats {
    CourseIx course = 0;
    std::uint32_t enrollment = 0;   // distinct graduates of the major who took it
    double avg_semester = 0.0;      // mean stage-capped relative index over their enrollments
    double total_c = 0.0;           // row sum of C without the diagonal
    int core_rank = 0;              // 1 = largest total_c
    double failure_rate = 0.0;      // last grade F (or W) over enrollment
    GenderSplit gender;
    std::array<std::uint32_t, kGradeTokenCount> histogram{};  // last grade per student
};

struct CourseGraph {
    MajorIx major = 0;
    std::vector<CourseIx> courses;   // ascending (= ordered by id)
    std::vector<double> r;           // n*n, row-major
    std::vector<std::uint32_t> n;    // students with numeric grades in both courses
    std::vector<CourseStats> stats;  // parallel to courses
    std::vector<std::size_t> by_rank;  // positions ordered by core_rank

    std::size_t size() const { return courses.size(); }
    double pcc_at(std::size_t i, std::size_t j) const { return r[i * courses.size() + j]; }
    std::uint32_t n_at(std::size_t i, std::size_t j) const { return n[i * courses.size() + j]; }
    double c_at(std::size_t i, std::size_t j) const {
        return static_cast<double>(n_at(i, j)) * pcc_at(i, j);
    }
    std::optional<std::size_t> position(CourseIx c) const;
};

struct CoreSet {
    MajorIx major = 0;
    int k = 0;
    std::vector<CourseIx> courses;  // in rank order
};

CoreSet core_set(const CourseGraph& g, int k);

// Throws ModelError when the major has fewer than config.min_graduates graduates.
CourseGraph build_course_graph(const RecordStore& store, const Timelines& timelines, MajorIx major,
                               const CorrGraphConfig& config);

struct SkippedMajor {
    MajorIx major = 0;
    std::string reason;
};

struct CourseGraphSet {
    std::vector<std::optional<CourseGraph>> graphs;  // by MajorIx
    std::vector<SkippedMajor> skipped;
};

// Every major, in parallel; results equal the sequential computation.
CourseGraphSet build_all_course_graphs(const RecordStore& store, const Timelines& timelines,
                                       const CorrGraphConfig& config);

} // namespace ecamp
