#pragma once

#include <string>
#include <string_view>

namespace ecamp {

// Incremental SHA-256; hex digests are used as cache keys.
class ContentHasher {
public:
    ContentHasher();
    ~ContentHasher();
    ContentHasher(const ContentHasher&) = delete;
    ContentHasher& operator=(const ContentHasher&) = delete;

    void update(std::string_view bytes);
    // Streams a file's bytes; a missing file hashes as the marker "<absent>".
    void update_file(const std::string& path);
    std::string hex_digest();

private:
    void* ctx_;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::string& path);

} // namespace ecamp
