#include <filesystem>
#include <ostream>

#include "ecamp/csv.hpp"
#include "ecamp/error.hpp"
#include "ecamp/records.hpp"

namespace ecamp {

namespace fs = std::filesystem;

IngestPaths IngestPaths::from_dir(const std::string& dir) {
    IngestPaths p;
    const fs::path d(dir);
    p.grades = (d / "grades.csv").string();
    p.graduations = (d / "graduations.csv").string();
    p.majors = (d / "majors.csv").string();
    if (fs::exists(d / "withdrawals.csv")) p.withdrawals = (d / "withdrawals.csv").string();
    if (fs::exists(d / "students.csv")) p.students = (d / "students.csv").string();
    return p;
}

namespace {

class FileIngest {
public:
    FileIngest(const std::string& path, std::string_view expected_header, IngestReport& report)
        : reader_(path), name_(fs::path(path).filename().string()), report_(report) {
        std::string_view header;
        if (!reader_.next(header)) throw IngestError(name_ + ": empty file, expected header '" +
                                                     std::string(expected_header) + "'");
        if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
        if (header != expected_header)
            throw IngestError(name_ + ": header '" + std::string(header) + "' does not match expected '" +
                              std::string(expected_header) + "'");
    }

    // Next non-empty row split into fields; rows with the wrong arity are
    // rejected here.
    bool next(std::size_t arity) {
        std::string_view line;
        while (reader_.next(line)) {
            if (line.empty() || line == "\r") continue;
            if (!csv::split(line, fields) || fields.size() != arity) {
                reject("malformed row");
                continue;
            }
            ++rows_;
            return true;
        }
        return false;
    }

    void reject(std::string reason) { report_.rejections.push_back({name_, reader_.line_number(), std::move(reason)}); }
    std::size_t rows() const { return rows_; }

    std::vector<std::string> fields;

private:
    csv::LineReader reader_;
    std::string name_;
    IngestReport& report_;
    std::size_t rows_ = 0;
};

} // namespace

IngestResult ingest_csv(const IngestPaths& paths, const RecordsConfig& config) {
    (void)config;
    for (const auto* p : {&paths.grades, &paths.graduations, &paths.majors})
        if (!fs::exists(*p)) throw IngestError("input file not found: " + *p);

    IngestReport report;
    StoreBuilder builder;

    {
        FileIngest in(paths.majors, "major_code,major_name", report);
        while (in.next(2)) {
            auto& f = in.fields;
            if (f[0].empty()) {
                in.reject("empty major code");
                continue;
            }
            if (!builder.add_major(f[0], f[1])) in.reject("duplicate major code");
        }
        report.major_rows = in.rows();
    }

    {
        FileIngest in(paths.grades, "student_id,term,course_id,grade", report);
        while (in.next(4)) {
            auto& f = in.fields;
            if (f[0].empty() || f[2].empty()) {
                in.reject("empty identifier");
                continue;
            }
            const auto term = parse_term(f[1]);
            if (!term) {
                in.reject("malformed term");
                continue;
            }
            const auto grade = parse_grade(f[3]);
            if (!grade) {
                in.reject("unknown grade token");
                continue;
            }
            builder.add_grade(f[0], f[2], *term, *grade);
        }
        report.grade_rows = in.rows();
    }

    {
        FileIngest in(paths.graduations, "student_id,term,major_code", report);
        while (in.next(3)) {
            auto& f = in.fields;
            if (f[0].empty()) {
                in.reject("empty identifier");
                continue;
            }
            const auto term = parse_term(f[1]);
            if (!term) {
                in.reject("malformed term");
                continue;
            }
            if (!builder.has_major(f[2])) {
                in.reject("unknown major code");
                continue;
            }
            if (!builder.add_graduation(f[0], f[2], *term)) in.reject("duplicate graduation record");
        }
        report.graduation_rows = in.rows();
    }

    if (!paths.withdrawals.empty()) {
        FileIngest in(paths.withdrawals, "student_id,last_term", report);
        while (in.next(2)) {
            auto& f = in.fields;
            const auto term = parse_term(f[1]);
            if (f[0].empty() || !term) {
                in.reject(f[0].empty() ? "empty identifier" : "malformed term");
                continue;
            }
            builder.add_withdrawal(f[0], *term);
        }
        report.withdrawal_rows = in.rows();
    }

    if (!paths.students.empty()) {
        FileIngest in(paths.students, "student_id,gender", report);
        while (in.next(2)) {
            auto& f = in.fields;
            Gender g;
            if (f[1] == "F") g = Gender::F;
            else if (f[1] == "M") g = Gender::M;
            else if (f[1] == "U" || f[1].empty()) g = Gender::U;
            else {
                in.reject("unknown gender label");
                continue;
            }
            if (!builder.knows_student(f[0])) {
                in.reject("unknown student id");
                continue;
            }
            builder.set_gender(f[0], g);
        }
        report.student_rows = in.rows();
    }

    IngestResult result{builder.build(), std::move(report)};
    result.report.duplicates_collapsed = builder.duplicates_collapsed();
    return result;
}

void write_rejection_report(std::ostream& out, const IngestReport& report, std::string_view file) {
    out << "line,reason\n";
    for (const auto& r : report.rejections)
        if (r.file == file) out << r.line << ',' << csv::escape(r.reason) << '\n';
}

} // namespace ecamp
