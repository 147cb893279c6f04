#pragma once
// Little-endian, length-prefixed binary serialization for the private cache
// formats (store cache, model artifact). Only trivially copyable values,
// strings and vectors of those are supported.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "ecamp/error.hpp"

namespace ecamp {

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void write(const T& value) {
        out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }

    void write(const std::string& s);

    template <typename T>
    void write(const std::vector<T>& values) {
        write(static_cast<std::uint64_t>(values.size()));
        if constexpr (std::is_trivially_copyable_v<T>) {
            out_.write(reinterpret_cast<const char*>(values.data()),
                       static_cast<std::streamsize>(values.size() * sizeof(T)));
        } else {
            for (const auto& v : values) write(v);
        }
    }

    void tag(std::string_view magic);

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {}

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void read(T& value) {
        in_.read(reinterpret_cast<char*>(&value), sizeof(T));
        check();
    }

    void read(std::string& s);

    template <typename T>
    void read(std::vector<T>& values) {
        std::uint64_t n = 0;
        read(n);
        if (n > (std::uint64_t{1} << 40)) throw ArtifactError("binary cache: implausible length");
        values.resize(n);
        if constexpr (std::is_trivially_copyable_v<T>) {
            in_.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(T)));
            check();
        } else {
            for (auto& v : values) read(v);
        }
    }

    template <typename T>
    T get() {
        T v{};
        read(v);
        return v;
    }

    // Throws unless the next bytes equal `magic`.
    void expect(std::string_view magic);

private:
    void check() const;
    std::istream& in_;
};

} // namespace ecamp
