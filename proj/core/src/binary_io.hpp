#pragma once

// Little-endian primitives shared by the binary cache formats.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "sinr/error.hpp"

namespace sinr::detail {

template <class T> void write_le(std::ostream &out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
}

template <class T> T read_le(std::istream &in) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), sizeof(T))) throw Error("unexpected end of binary stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

inline void write_string(std::ostream &out, const std::string &s) {
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream &in) {
    const auto size = read_le<std::uint32_t>(in);
    std::string s(size, '\0');
    if (size > 0 && !in.read(s.data(), size)) throw Error("unexpected end of binary stream");
    return s;
}

inline void expect_magic(std::istream &in, const char (&magic)[9]) {
    char buf[8];
    if (!in.read(buf, 8) || std::memcmp(buf, magic, 8) != 0) {
        throw Error(std::string("bad magic, expected ") + magic);
    }
}

} // namespace sinr::detail
