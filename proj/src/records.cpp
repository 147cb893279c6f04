#include "ecamp/records.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "ecamp/binary_io.hpp"
#include "ecamp/error.hpp"

namespace ecamp {

namespace {

constexpr std::array<std::string_view, kGradeTokenCount> kGradeNames{
    "A", "A-", "B+", "B", "B-", "C+", "C", "C-", "D+", "D", "F", "W", "I", "P", "NP"};

constexpr std::array<double, 11> kLetterPoints{4.0, 3.7, 3.3, 3.0, 2.7, 2.3, 2.0, 1.7, 1.3, 1.0, 0.0};

constexpr std::int32_t kNoTerm = std::numeric_limits<std::int32_t>::min();

} // namespace

std::optional<TermId> parse_term(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int year = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + 4, year);
    if (ec != std::errc{} || ptr != text.data() + 4) return std::nullopt;
    const auto code = text.substr(5);
    if (code == "FA") return TermId{year, Season::Fall};
    if (code == "SP") return TermId{year, Season::Spring};
    if (code == "SU") return TermId{year, Season::Summer};
    return std::nullopt;
}

std::string format_term(TermId term) {
    static constexpr std::array<const char*, 3> codes{"SP", "SU", "FA"};
    std::string out = std::to_string(term.year);
    while (out.size() < 4) out.insert(out.begin(), '0');
    return out + "-" + codes[static_cast<std::size_t>(term.season)];
}

std::optional<GradeToken> parse_grade(std::string_view token) {
    for (std::size_t i = 0; i < kGradeNames.size(); ++i)
        if (kGradeNames[i] == token) return static_cast<GradeToken>(i);
    return std::nullopt;
}

std::string_view grade_name(GradeToken token) { return kGradeNames[static_cast<std::size_t>(token)]; }

std::optional<double> grade_points(GradeToken token) {
    const auto i = static_cast<std::size_t>(token);
    if (i < kLetterPoints.size()) return kLetterPoints[i];
    return std::nullopt;
}

std::optional<double> grade_points(std::string_view token) {
    const auto g = parse_grade(token);
    if (!g) throw IngestError("unknown grade token");
    return grade_points(*g);
}

GradeToken nearest_letter(double points) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kLetterPoints.size(); ++i) {
        const double d = std::abs(points - kLetterPoints[i]);
        // ties go to the higher letter (earlier in the table)
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return static_cast<GradeToken>(best);
}

// ---------------------------------------------------------------------------
// RecordStore

std::span<const EventIx> RecordStore::course_events(CourseIx c) const {
    return std::span<const EventIx>(course_event_list_).subspan(course_offsets_[c],
                                                                course_offsets_[c + 1] - course_offsets_[c]);
}

std::span<const StudentIx> RecordStore::major_graduates(MajorIx m) const {
    return std::span<const StudentIx>(major_grad_list_).subspan(major_offsets_[m],
                                                                major_offsets_[m + 1] - major_offsets_[m]);
}

std::span<const MajorIx> RecordStore::student_majors(StudentIx s) const {
    return std::span<const MajorIx>(student_major_list_)
        .subspan(student_major_offsets_[s], student_major_offsets_[s + 1] - student_major_offsets_[s]);
}

std::optional<TermId> RecordStore::withdrawal_term(StudentIx s) const {
    if (!has_withdrawals_ || withdrawal_terms_[s] == kNoTerm) return std::nullopt;
    return TermId::from_ordinal(withdrawal_terms_[s]);
}

namespace {

template <typename Range, typename Key>
std::optional<std::uint32_t> sorted_find(const Range& ids, const Key& key) {
    auto it = std::lower_bound(ids.begin(), ids.end(), key);
    if (it == ids.end() || *it != key) return std::nullopt;
    return static_cast<std::uint32_t>(it - ids.begin());
}

} // namespace

std::optional<StudentIx> RecordStore::find_student(std::string_view id) const { return sorted_find(student_ids_, id); }
std::optional<CourseIx> RecordStore::find_course(std::string_view id) const { return sorted_find(course_ids_, id); }

std::optional<MajorIx> RecordStore::find_major(std::string_view code) const {
    auto it = std::lower_bound(majors_.begin(), majors_.end(), code,
                               [](const MajorCatalogEntry& e, std::string_view c) { return e.code < c; });
    if (it == majors_.end() || it->code != code) return std::nullopt;
    return static_cast<MajorIx>(it - majors_.begin());
}

void RecordStore::build_indexes() {
    const std::size_t ns = student_ids_.size();
    const std::size_t nc = course_ids_.size();
    const std::size_t nm = majors_.size();
    const std::size_t ne = ev_student_.size();

    student_offsets_.assign(ns + 1, 0);
    for (std::size_t e = 0; e < ne; ++e) ++student_offsets_[ev_student_[e] + 1];
    std::partial_sum(student_offsets_.begin(), student_offsets_.end(), student_offsets_.begin());

    course_offsets_.assign(nc + 1, 0);
    for (std::size_t e = 0; e < ne; ++e) ++course_offsets_[ev_course_[e] + 1];
    std::partial_sum(course_offsets_.begin(), course_offsets_.end(), course_offsets_.begin());
    course_event_list_.assign(ne, 0);
    {
        std::vector<EventIx> fill(course_offsets_.begin(), course_offsets_.end() - 1);
        for (std::size_t e = 0; e < ne; ++e) course_event_list_[fill[ev_course_[e]]++] = static_cast<EventIx>(e);
    }

    major_offsets_.assign(nm + 1, 0);
    for (const auto& g : graduations_) ++major_offsets_[g.major + 1];
    std::partial_sum(major_offsets_.begin(), major_offsets_.end(), major_offsets_.begin());
    major_grad_list_.clear();
    for (const auto& g : graduations_) major_grad_list_.push_back(g.student);

    student_major_offsets_.assign(ns + 1, 0);
    for (const auto& g : graduations_) ++student_major_offsets_[g.student + 1];
    std::partial_sum(student_major_offsets_.begin(), student_major_offsets_.end(), student_major_offsets_.begin());
    student_major_list_.assign(graduations_.size(), 0);
    {
        std::vector<std::uint32_t> fill(student_major_offsets_.begin(), student_major_offsets_.end() - 1);
        for (const auto& g : graduations_) student_major_list_[fill[g.student]++] = g.major;
    }
}

void RecordStore::save(std::ostream& out) const {
    BinaryWriter w(out);
    w.tag("ECAMPSTORE1");
    w.write(student_ids_);
    w.write(course_ids_);
    w.write(static_cast<std::uint64_t>(majors_.size()));
    for (const auto& m : majors_) {
        w.write(m.code);
        w.write(m.name);
    }
    w.write(ev_student_);
    w.write(ev_course_);
    w.write(ev_term_);
    w.write(ev_grade_);
    w.write(graduations_);
    w.write(genders_);
    w.write(static_cast<std::uint8_t>(has_withdrawals_));
    w.write(withdrawal_terms_);
}

RecordStore RecordStore::load(std::istream& in) {
    BinaryReader r(in);
    r.expect("ECAMPSTORE1");
    RecordStore s;
    r.read(s.student_ids_);
    r.read(s.course_ids_);
    const auto nm = r.get<std::uint64_t>();
    s.majors_.resize(nm);
    for (auto& m : s.majors_) {
        r.read(m.code);
        r.read(m.name);
    }
    r.read(s.ev_student_);
    r.read(s.ev_course_);
    r.read(s.ev_term_);
    r.read(s.ev_grade_);
    r.read(s.graduations_);
    r.read(s.genders_);
    s.has_withdrawals_ = r.get<std::uint8_t>() != 0;
    r.read(s.withdrawal_terms_);

    const std::size_t ne = s.ev_student_.size();
    if (s.ev_course_.size() != ne || s.ev_term_.size() != ne || s.ev_grade_.size() != ne)
        throw ArtifactError("store cache: inconsistent column lengths");
    for (std::size_t e = 0; e < ne; ++e) {
        if (s.ev_student_[e] >= s.student_ids_.size() || s.ev_course_[e] >= s.course_ids_.size() ||
            static_cast<int>(s.ev_grade_[e]) >= kGradeTokenCount)
            throw ArtifactError("store cache: index out of range");
    }
    for (const auto& g : s.graduations_)
        if (g.student >= s.student_ids_.size() || g.major >= s.majors_.size())
            throw ArtifactError("store cache: graduation index out of range");
    s.ev_points_.resize(ne);
    for (std::size_t e = 0; e < ne; ++e)
        s.ev_points_[e] = grade_points(s.ev_grade_[e]).value_or(std::numeric_limits<double>::quiet_NaN());
    s.build_indexes();
    return s;
}

bool operator==(const RecordStore& a, const RecordStore& b) {
    // ev_points_ and the indexes are derived; NaN points would never compare equal.
    return a.student_ids_ == b.student_ids_ && a.course_ids_ == b.course_ids_ && a.majors_ == b.majors_ &&
           a.ev_student_ == b.ev_student_ && a.ev_course_ == b.ev_course_ && a.ev_term_ == b.ev_term_ &&
           a.ev_grade_ == b.ev_grade_ && a.graduations_ == b.graduations_ && a.genders_ == b.genders_ &&
           a.has_withdrawals_ == b.has_withdrawals_ && a.withdrawal_terms_ == b.withdrawal_terms_;
}

// ---------------------------------------------------------------------------
// StoreBuilder

bool StoreBuilder::add_major(std::string code, std::string name) {
    if (major_lookup_.contains(code)) return false;
    major_lookup_.emplace(code, static_cast<std::uint32_t>(majors_.size()));
    majors_.push_back({std::move(code), std::move(name)});
    return true;
}

std::uint32_t StoreBuilder::intern_student(std::string_view id) {
    auto [it, inserted] = student_lookup_.try_emplace(std::string(id), static_cast<std::uint32_t>(students_.size()));
    if (inserted) students_.emplace_back(id);
    return it->second;
}

std::uint32_t StoreBuilder::intern_course(std::string_view id) {
    auto [it, inserted] = course_lookup_.try_emplace(std::string(id), static_cast<std::uint32_t>(courses_.size()));
    if (inserted) courses_.emplace_back(id);
    return it->second;
}

void StoreBuilder::add_grade(std::string_view student, std::string_view course, TermId term, GradeToken grade) {
    grades_.push_back({intern_student(student), intern_course(course), term.ordinal(), grade, grades_.size()});
}

bool StoreBuilder::add_graduation(std::string_view student, std::string_view major, TermId term) {
    auto it = major_lookup_.find(std::string(major));
    if (it == major_lookup_.end()) return false;
    const auto s = intern_student(student);
    if (!graduation_keys_.insert((std::uint64_t{s} << 32) | it->second).second) return false;
    graduations_.push_back({s, it->second, term.ordinal()});
    return true;
}

void StoreBuilder::set_gender(std::string_view student, Gender g) { genders_.emplace_back(intern_student(student), g); }

void StoreBuilder::add_withdrawal(std::string_view student, TermId last_term) {
    have_withdrawals_ = true;
    withdrawals_.emplace_back(intern_student(student), last_term.ordinal());
}

namespace {

// Returns the permutation that sorts `ids` and the inverse mapping old -> new.
std::vector<std::uint32_t> sorted_remap(std::vector<std::string>& ids) {
    std::vector<std::uint32_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return ids[a] < ids[b]; });
    std::vector<std::uint32_t> remap(ids.size());
    std::vector<std::string> sorted(ids.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = i;
        sorted[i] = std::move(ids[order[i]]);
    }
    ids = std::move(sorted);
    return remap;
}

} // namespace

RecordStore StoreBuilder::build() {
    RecordStore s;

    const auto student_map = sorted_remap(students_);
    const auto course_map = sorted_remap(courses_);
    std::vector<std::uint32_t> major_order(majors_.size());
    std::iota(major_order.begin(), major_order.end(), 0u);
    std::sort(major_order.begin(), major_order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return majors_[a].code < majors_[b].code; });
    std::vector<std::uint32_t> major_map(majors_.size());
    for (std::uint32_t i = 0; i < major_order.size(); ++i) {
        major_map[major_order[i]] = i;
        s.majors_.push_back(majors_[major_order[i]]);
    }

    for (auto& g : grades_) {
        g.student = student_map[g.student];
        g.course = course_map[g.course];
    }
    // Sort by (student, term, course, seq); the last row of each triple wins.
    std::sort(grades_.begin(), grades_.end(), [](const RawGrade& a, const RawGrade& b) {
        if (a.student != b.student) return a.student < b.student;
        if (a.term != b.term) return a.term < b.term;
        if (a.course != b.course) return a.course < b.course;
        return a.seq < b.seq;
    });
    dup_count_ = 0;
    const std::size_t n = grades_.size();
    s.ev_student_.reserve(n);
    s.ev_course_.reserve(n);
    s.ev_term_.reserve(n);
    s.ev_grade_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& g = grades_[i];
        if (i + 1 < n && grades_[i + 1].student == g.student && grades_[i + 1].term == g.term &&
            grades_[i + 1].course == g.course) {
            ++dup_count_;
            continue;
        }
        s.ev_student_.push_back(g.student);
        s.ev_course_.push_back(g.course);
        s.ev_term_.push_back(g.term);
        s.ev_grade_.push_back(g.grade);
    }
    s.ev_points_.resize(s.ev_grade_.size());
    for (std::size_t e = 0; e < s.ev_grade_.size(); ++e)
        s.ev_points_[e] = grade_points(s.ev_grade_[e]).value_or(std::numeric_limits<double>::quiet_NaN());

    for (auto g : graduations_) {
        g.student = student_map[g.student];
        g.major = major_map[g.major];
        s.graduations_.push_back(g);
    }
    std::sort(s.graduations_.begin(), s.graduations_.end(), [](const GraduationRecord& a, const GraduationRecord& b) {
        return a.major != b.major ? a.major < b.major : a.student < b.student;
    });

    if (!genders_.empty()) {
        s.genders_.assign(students_.size(), Gender::U);
        for (const auto& [st, g] : genders_) s.genders_[student_map[st]] = g;
    }
    s.has_withdrawals_ = have_withdrawals_;
    if (have_withdrawals_) {
        s.withdrawal_terms_.assign(students_.size(), kNoTerm);
        for (const auto& [st, t] : withdrawals_) s.withdrawal_terms_[student_map[st]] = t;
    }

    s.student_ids_ = std::move(students_);
    s.course_ids_ = std::move(courses_);
    s.build_indexes();

    const auto dups = dup_count_;
    *this = StoreBuilder{};
    dup_count_ = dups;
    return s;
}

} // namespace ecamp
