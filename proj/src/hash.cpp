#include "ecamp/hash.hpp"

#include <array>
#include <fstream>

#include <openssl/evp.h>

#include "ecamp/error.hpp"

namespace ecamp {

ContentHasher::ContentHasher() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
        throw Error("sha256: digest init failed");
}

ContentHasher::~ContentHasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void ContentHasher::update(std::string_view bytes) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
}

void ContentHasher::update_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        update("<absent>");
        return;
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
    }
}

std::string ContentHasher::hex_digest() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md.data(), &len);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(digits[md[i] >> 4]);
        out.push_back(digits[md[i] & 0xF]);
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    ContentHasher h;
    h.update(bytes);
    return h.hex_digest();
}

std::string sha256_file_hex(const std::string& path) {
    ContentHasher h;
    h.update_file(path);
    return h.hex_digest();
}

} // namespace ecamp
