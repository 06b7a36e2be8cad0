#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sinr {

/// Per-run metric values of one experiment plus the settings that produced them.
struct EvalReport {
    std::string task;
    std::string dataset;
    std::string model;
    std::string metric;
    std::optional<double> gamma;
    std::vector<double> values;
    std::vector<std::pair<std::string, std::string>> config; ///< insertion order is kept
    std::vector<std::string> notes;

    std::size_t runs() const noexcept { return values.size(); }
    double mean() const;
    double stddev() const; ///< population standard deviation

    void set(std::string key, std::string value);
    /// Adds `note` unless already present.
    void note(std::string note);
};

/// Pretty-printed JSON. Contains no timestamps, so identical runs give identical bytes.
std::string to_json(const EvalReport &report);
EvalReport report_from_json(std::string_view json);
void save_report(const EvalReport &report, const std::filesystem::path &path);
EvalReport load_report(const std::filesystem::path &path);

/// "task dataset model metric: mean +- std (runs)".
std::string summary_line(const EvalReport &report);

} // namespace sinr
