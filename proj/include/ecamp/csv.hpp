#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ecamp::csv {

// Splits one CSV record into fields. Supports RFC 4180 double-quote escaping;
// a trailing '\r' is stripped. Returns false on an unterminated quote.
bool split(std::string_view line, std::vector<std::string>& fields);

// Quotes a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

// Reads a whole file into memory and hands out lines with 1-based numbers.
class LineReader {
public:
    explicit LineReader(const std::string& path);
    bool next(std::string_view& line);
    std::size_t line_number() const { return line_no_; }

private:
    std::string data_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

} // namespace ecamp::csv
