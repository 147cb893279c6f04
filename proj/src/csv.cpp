#include "ecamp/csv.hpp"

#include <sstream>

#include "ecamp/error.hpp"

namespace ecamp::csv {

bool split(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(std::move(cur));
    return !quoted;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

LineReader::LineReader(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    data_.resize(static_cast<std::size_t>(size));
    in.read(data_.data(), size);
}

bool LineReader::next(std::string_view& line) {
    if (pos_ >= data_.size()) return false;
    const auto end = data_.find('\n', pos_);
    const auto stop = end == std::string::npos ? data_.size() : end;
    line = std::string_view(data_).substr(pos_, stop - pos_);
    pos_ = stop + 1;
    ++line_no_;
    return true;
}

} // namespace ecamp::csv
