#pragma once

#include <filesystem>
#include <fstream>

#include "sinr/error.hpp"

namespace sinr::detail {

inline std::ifstream open_input(const std::filesystem::path &path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

inline std::ofstream open_output(const std::filesystem::path &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

/// True when the file starts with the 8-byte magic.
inline bool has_magic(const std::filesystem::path &path, const char (&magic)[9]) {
    std::ifstream in(path, std::ios::binary);
    char buf[8] = {};
    in.read(buf, 8);
    return in.gcount() == 8 && std::char_traits<char>::compare(buf, magic, 8) == 0;
}

} // namespace sinr::detail
