#pragma once
// Major/course-set affinity (M-Value) and the pairwise major similarity built
// from it.
//
//   M_A(C)   = sum_{c in C} s_A(c) / (||S_c||_2 * |A|)
//   M_{A,B}  = (M_A(C_B) + M_B(C_A)) / 2
//
// s_A(c) counts distinct graduates of A who took c, S_c is the vector of those
// counts over every catalog major and |A| is the number of graduates of A.
// For stage-restricted similarity, C_X is the stage's semester course set
// intersected with the courses taken by at least one graduate of X.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ecamp/records.hpp"

namespace ecamp {

struct MajorAffinity {
    MajorIx major = 0;
    std::vector<CourseIx> course_set;
    double value = 0.0;
    bool empty_course_set = false;  // warning: M = 0 by definition
};

struct SimilarityResult {
    double value = 0.0;
    bool empty_course_sets = false;  // both restricted sets were empty
};

struct MajorSimilarityMatrix {
    int stage = 0;
    std::size_t course_count = 0;  // size of the stage course set
    std::vector<MajorIx> majors;  // ascending (= ordered by code)
    std::vector<double> values;   // row-major, majors.size()^2
    std::vector<std::pair<MajorIx, MajorIx>> empty_pairs;

    std::size_t size() const { return majors.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * majors.size() + j]; }
    // Submatrix over a subset of this matrix's rows (given as row positions).
    MajorSimilarityMatrix restrict_to(std::span<const std::size_t> rows) const;
};

// Per-course graduate counts by major. Built once per store and shared by
// every affinity query.
class EnrollmentCounts {
public:
    explicit EnrollmentCounts(const RecordStore& store);

    // Sparse S_c: (major, count) pairs with count > 0, ascending major.
    std::span<const std::pair<MajorIx, std::uint32_t>> counts(CourseIx c) const;
    std::uint32_t count(CourseIx c, MajorIx m) const;
    double norm2(CourseIx c) const { return norm2_[c]; }
    std::uint32_t major_size(MajorIx m) const { return major_size_[m]; }
    // Courses taken by at least one graduate of m, ascending.
    std::span<const CourseIx> major_courses(MajorIx m) const { return major_courses_[m]; }
    std::size_t num_courses() const { return norm2_.size(); }
    std::size_t num_majors() const { return major_size_.size(); }

private:
    std::vector<std::uint32_t> offsets_;
    std::vector<std::pair<MajorIx, std::uint32_t>> entries_;
    std::vector<double> norm2_;
    std::vector<std::uint32_t> major_size_;
    std::vector<std::vector<CourseIx>> major_courses_;
};

// Throws ModelError when the major has no graduates or a course in the set
// was taken by no graduate at all.
MajorAffinity m_value(const EnrollmentCounts& counts, MajorIx major, std::span<const CourseIx> course_set);

// C_X intersected with the stage's course set.
std::vector<CourseIx> restricted_course_set(const EnrollmentCounts& counts, MajorIx major,
                                            std::span<const CourseIx> stage_set);

SimilarityResult pairwise_similarity(const EnrollmentCounts& counts, MajorIx a, MajorIx b,
                                     std::span<const CourseIx> stage_set);

// Full symmetric matrix over `majors` (each must have graduates). Cells are
// bit-identical to pairwise_similarity.
MajorSimilarityMatrix similarity_matrix(const EnrollmentCounts& counts, std::span<const MajorIx> majors,
                                        std::span<const CourseIx> stage_set, int stage);

inline constexpr int kSimilaritySchemaVersion = 1;
nlohmann::json similarity_matrix_json(const MajorSimilarityMatrix& m, const RecordStore& store);

} // namespace ecamp
