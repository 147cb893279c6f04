#pragma once
// Student-record domain types and the immutable column-oriented store that
// every model reads from.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ecamp/config.hpp"

namespace ecamp {

using StudentIx = std::uint32_t;
using CourseIx = std::uint32_t;
using MajorIx = std::uint32_t;
using EventIx = std::uint32_t;

// Ordinal order is calendar order: Spring(y) < Summer(y) < Fall(y) < Spring(y+1).
enum class Season : std::uint8_t { Spring = 0, Summer = 1, Fall = 2 };

struct TermId {
    int year = 0;
    Season season = Season::Fall;

    constexpr int ordinal() const { return year * 3 + static_cast<int>(season); }
    static constexpr TermId from_ordinal(int ordinal) {
        return TermId{ordinal / 3, static_cast<Season>(ordinal % 3)};
    }
    friend constexpr bool operator==(TermId a, TermId b) { return a.ordinal() == b.ordinal(); }
    friend constexpr auto operator<=>(TermId a, TermId b) { return a.ordinal() <=> b.ordinal(); }
};

// "YYYY-FA" / "YYYY-SP" / "YYYY-SU".
std::optional<TermId> parse_term(std::string_view text);
std::string format_term(TermId term);

enum class GradeToken : std::uint8_t { A, AMinus, BPlus, B, BMinus, CPlus, C, CMinus, DPlus, D, F, W, I, P, NP };
inline constexpr int kGradeTokenCount = 15;

std::optional<GradeToken> parse_grade(std::string_view token);
std::string_view grade_name(GradeToken token);
// Letter grades map to the 4.0 scale; W, I, P and NP carry no points.
std::optional<double> grade_points(GradeToken token);
// Throws IngestError("unknown grade token") for tokens outside the scale.
std::optional<double> grade_points(std::string_view token);
// Nearest letter on the scale to a numeric value in [0, 4].
GradeToken nearest_letter(double points);

enum class Gender : std::uint8_t { F, M, U };

struct MajorCatalogEntry {
    std::string code;
    std::string name;
    friend bool operator==(const MajorCatalogEntry&, const MajorCatalogEntry&) = default;
};

struct GraduationRecord {
    StudentIx student = 0;
    MajorIx major = 0;
    std::int32_t term = 0;  // TermId ordinal
    friend bool operator==(const GraduationRecord&, const GraduationRecord&) = default;
};

class StoreBuilder;

// Built once, then read-only. Identifier tables are sorted lexicographically
// so indices order the same way as codes. Grade events are sorted by
// (student, term, course); at most one event exists per triple.
class RecordStore {
public:
    std::span<const std::string> student_ids() const { return student_ids_; }
    std::span<const std::string> course_ids() const { return course_ids_; }
    std::span<const MajorCatalogEntry> majors() const { return majors_; }
    std::size_t num_students() const { return student_ids_.size(); }
    std::size_t num_courses() const { return course_ids_.size(); }
    std::size_t num_majors() const { return majors_.size(); }
    std::size_t num_events() const { return ev_student_.size(); }

    std::span<const StudentIx> event_students() const { return ev_student_; }
    std::span<const CourseIx> event_courses() const { return ev_course_; }
    std::span<const std::int32_t> event_terms() const { return ev_term_; }
    std::span<const GradeToken> event_grades() const { return ev_grade_; }
    // NaN where the grade carries no points.
    std::span<const double> event_points() const { return ev_points_; }

    // Contiguous event range [first, last) of one student.
    std::pair<EventIx, EventIx> student_event_range(StudentIx s) const {
        return {student_offsets_[s], student_offsets_[s + 1]};
    }
    std::span<const EventIx> course_events(CourseIx c) const;

    std::span<const GraduationRecord> graduations() const { return graduations_; }
    std::span<const StudentIx> major_graduates(MajorIx m) const;
    std::span<const MajorIx> student_majors(StudentIx s) const;
    std::size_t graduate_count(MajorIx m) const { return major_graduates(m).size(); }

    Gender gender(StudentIx s) const { return genders_.empty() ? Gender::U : genders_[s]; }
    bool has_gender_data() const { return !genders_.empty(); }
    bool has_withdrawals() const { return has_withdrawals_; }
    std::optional<TermId> withdrawal_term(StudentIx s) const;

    std::optional<StudentIx> find_student(std::string_view id) const;
    std::optional<CourseIx> find_course(std::string_view id) const;
    std::optional<MajorIx> find_major(std::string_view code) const;

    void save(std::ostream& out) const;
    static RecordStore load(std::istream& in);

    friend bool operator==(const RecordStore&, const RecordStore&);

private:
    friend class StoreBuilder;
    void build_indexes();

    std::vector<std::string> student_ids_;
    std::vector<std::string> course_ids_;
    std::vector<MajorCatalogEntry> majors_;

    std::vector<StudentIx> ev_student_;
    std::vector<CourseIx> ev_course_;
    std::vector<std::int32_t> ev_term_;
    std::vector<GradeToken> ev_grade_;
    std::vector<double> ev_points_;

    std::vector<GraduationRecord> graduations_;  // sorted by (major, student)
    std::vector<Gender> genders_;
    bool has_withdrawals_ = false;
    std::vector<std::int32_t> withdrawal_terms_;  // ordinal, or INT32_MIN when absent

    // Derived indexes (rebuilt on load, not serialized).
    std::vector<EventIx> student_offsets_;
    std::vector<EventIx> course_offsets_;
    std::vector<EventIx> course_event_list_;
    std::vector<std::uint32_t> major_offsets_;
    std::vector<StudentIx> major_grad_list_;
    std::vector<std::uint32_t> student_major_offsets_;
    std::vector<MajorIx> student_major_list_;
};

// Accumulates raw rows and produces a RecordStore. Duplicate
// (student, course, term) grade rows collapse to the last one added.
class StoreBuilder {
public:
    // Returns false when the code is already present.
    bool add_major(std::string code, std::string name);
    bool has_major(std::string_view code) const { return major_lookup_.contains(std::string(code)); }
    void add_grade(std::string_view student, std::string_view course, TermId term, GradeToken grade);
    // Returns false for an unknown major code or a repeated (student, major) pair.
    bool add_graduation(std::string_view student, std::string_view major, TermId term);
    void set_gender(std::string_view student, Gender g);
    void add_withdrawal(std::string_view student, TermId last_term);
    bool knows_student(std::string_view student) const { return student_lookup_.contains(std::string(student)); }

    std::size_t duplicates_collapsed() const { return dup_count_; }
    RecordStore build();

private:
    std::uint32_t intern_student(std::string_view id);
    std::uint32_t intern_course(std::string_view id);

    struct RawGrade {
        std::uint32_t student, course;
        std::int32_t term;
        GradeToken grade;
        std::uint64_t seq;
    };
    std::vector<MajorCatalogEntry> majors_;
    std::unordered_map<std::string, std::uint32_t> major_lookup_;
    std::vector<std::string> students_;
    std::unordered_map<std::string, std::uint32_t> student_lookup_;
    std::vector<std::string> courses_;
    std::unordered_map<std::string, std::uint32_t> course_lookup_;
    std::vector<RawGrade> grades_;
    std::vector<GraduationRecord> graduations_;
    std::unordered_set<std::uint64_t> graduation_keys_;
    std::vector<std::pair<std::uint32_t, Gender>> genders_;
    std::vector<std::pair<std::uint32_t, std::int32_t>> withdrawals_;
    bool have_withdrawals_ = false;
    std::size_t dup_count_ = 0;
};

// ---------------------------------------------------------------------------
// CSV ingestion

struct IngestPaths {
    std::string grades;
    std::string graduations;
    std::string majors;
    std::string withdrawals;  // optional, empty = absent
    std::string students;     // optional, empty = absent

    // Conventional file names inside a data directory; optional files are
    // only set when present.
    static IngestPaths from_dir(const std::string& dir);
};

struct Rejection {
    std::string file;  // grades.csv, graduations.csv, ...
    std::size_t line = 0;
    std::string reason;
};

struct IngestReport {
    std::size_t grade_rows = 0;
    std::size_t graduation_rows = 0;
    std::size_t major_rows = 0;
    std::size_t withdrawal_rows = 0;
    std::size_t student_rows = 0;
    std::size_t duplicates_collapsed = 0;
    std::vector<Rejection> rejections;
    std::vector<std::string> warnings;
};

struct IngestResult {
    RecordStore store;
    IngestReport report;
};

IngestResult ingest_csv(const IngestPaths& paths, const RecordsConfig& config);

// Writes `line,reason` for the rejections that came from `file`.
void write_rejection_report(std::ostream& out, const IngestReport& report, std::string_view file);

// ---------------------------------------------------------------------------
// Timelines and semester staging

enum class StudentStatus : std::uint8_t { Graduated, Withdrawn, Censored };

struct StudentTimeline {
    StudentIx student = 0;
    std::vector<TermId> terms;  // relative index of terms[i] is i + 1
    StudentStatus status = StudentStatus::Censored;
    std::vector<MajorIx> majors;  // graduated majors
};

struct Timelines {
    std::vector<StudentTimeline> students;      // indexed by StudentIx
    std::vector<std::uint16_t> event_index;     // uncapped relative index per event
    std::vector<TermId> dataset_terms;          // distinct observed terms, ascending
    std::vector<StudentIx> graduates_without_events;
    int stage_cap = 8;

    int stage_of_event(EventIx e) const {
        const int t = event_index[e];
        return t < stage_cap ? t : stage_cap;
    }
};

Timelines build_timelines(const RecordStore& store, const RecordsConfig& config);

struct SemesterCourseSets {
    std::vector<std::vector<CourseIx>> sets;  // sets[t-1] for stage t, ascending course index
    std::vector<double> mean_stage;           // per course; NaN when never enrolled
    std::vector<std::uint8_t> course_stage;   // 0 when below min_enrollment
    std::vector<int> empty_stages;            // modeling warnings

    std::span<const CourseIx> stage(int t) const { return sets[static_cast<std::size_t>(t - 1)]; }
};

SemesterCourseSets build_semester_sets(const RecordStore& store, const Timelines& timelines,
                                       const RecordsConfig& config);
// Single-stage convenience wrapper; 1 <= t <= stage_cap.
std::vector<CourseIx> semester_course_set(const RecordStore& store, const Timelines& timelines, int t,
                                          const RecordsConfig& config);

} // namespace ecamp
