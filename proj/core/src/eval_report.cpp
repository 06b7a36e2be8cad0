#include "sinr/eval_report.hpp"

#include <cstdio>
#include <iterator>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "sinr/error.hpp"
#include "sinr/stats.hpp"

namespace sinr {

double EvalReport::mean() const { return sinr::mean(values); }

double EvalReport::stddev() const { return sinr::stddev(values); }

void EvalReport::set(std::string key, std::string value) {
    for (auto &[k, v] : config) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    config.emplace_back(std::move(key), std::move(value));
}

void EvalReport::note(std::string text) {
    for (const auto &n : notes) {
        if (n == text) return;
    }
    notes.push_back(std::move(text));
}

std::string to_json(const EvalReport &report) {
    nlohmann::ordered_json j;
    j["task"] = report.task;
    j["dataset"] = report.dataset;
    j["model"] = report.model;
    j["metric"] = report.metric;
    j["gamma"] = report.gamma ? nlohmann::ordered_json(*report.gamma) : nlohmann::ordered_json(nullptr);
    j["runs"] = report.runs();
    j["mean"] = report.mean();
    j["std"] = report.stddev();
    j["values"] = report.values;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto &[k, v] : report.config) config[k] = v;
    j["config"] = std::move(config);
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("invalid report JSON: ") + e.what());
    }
    try {
        EvalReport r;
        r.task = j.at("task").get<std::string>();
        r.dataset = j.at("dataset").get<std::string>();
        r.model = j.at("model").get<std::string>();
        r.metric = j.at("metric").get<std::string>();
        if (!j.at("gamma").is_null()) r.gamma = j.at("gamma").get<double>();
        r.values = j.at("values").get<std::vector<double>>();
        for (const auto &[k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
}

void save_report(const EvalReport &report, const std::filesystem::path &path) {
    auto out = detail::open_output(path);
    out << to_json(report);
}

EvalReport load_report(const std::filesystem::path &path) {
    auto in = detail::open_input(path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return report_from_json(text);
}

std::string summary_line(const EvalReport &report) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.4f +- %.4f (%zu runs)", report.mean(), report.stddev(), report.runs());
    std::string out = report.task + " " + report.dataset + " " + report.model;
    if (report.gamma) {
        char g[32];
        std::snprintf(g, sizeof(g), " gamma=%g", *report.gamma);
        out += g;
    }
    return out + " " + report.metric + ": " + buf;
}

} // namespace sinr
