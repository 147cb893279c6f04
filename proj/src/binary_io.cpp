#include "ecamp/binary_io.hpp"

namespace ecamp {

void BinaryWriter::write(const std::string& s) {
    write(static_cast<std::uint64_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinaryWriter::tag(std::string_view magic) {
    out_.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

void BinaryReader::read(std::string& s) {
    std::uint64_t n = 0;
    read(n);
    if (n > (std::uint64_t{1} << 32)) throw ArtifactError("binary cache: implausible string length");
    s.resize(n);
    in_.read(s.data(), static_cast<std::streamsize>(n));
    check();
}

void BinaryReader::expect(std::string_view magic) {
    std::string got(magic.size(), '\0');
    in_.read(got.data(), static_cast<std::streamsize>(got.size()));
    if (!in_ || got != magic) throw ArtifactError("binary cache: bad magic, expected " + std::string(magic));
}

void BinaryReader::check() const {
    if (!in_) throw ArtifactError("binary cache: truncated file");
}

} // namespace ecamp
