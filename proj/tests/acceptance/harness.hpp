#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace acceptance {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status = Status::fail;
    std::string detail;
};

inline Outcome pass_if(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }
inline Outcome skip(std::string detail) { return {Status::skip, std::move(detail)}; }

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome()> run;
};

std::vector<Criterion> offline_criteria();
std::vector<Criterion> dataset_criteria(const std::filesystem::path &data_dir);

/// Fixed-point rendering for detail strings.
inline std::string fmt(double x, int digits = 3) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << x;
    return out.str();
}

template <class F> double seconds(F &&f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace acceptance
