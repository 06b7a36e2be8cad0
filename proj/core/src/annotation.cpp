#include <algorithm>
#include <istream>
#include <map>
#include <unordered_map>

#include "sinr/error.hpp"
#include "sinr/interpret.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

std::vector<std::string_view> tab_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto at = line.find('\t', start);
        out.push_back(detail::trim(line.substr(start, at == std::string_view::npos ? at : at - start)));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

bool is_header(std::string_view first_field) { return first_field == "task_id"; }

} // namespace

std::vector<IntrusionKeyEntry> read_intrusion_key(std::istream &in, std::string_view source) {
    std::vector<IntrusionKeyEntry> key;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_comment(detail::trim(line))) continue;
        const auto f = tab_fields(line);
        if (is_header(f[0])) continue;
        IntrusionKeyEntry entry;
        if (f.size() < 3 || !detail::parse_int(f[0], entry.id) || !detail::parse_int(f[1], entry.dim) ||
            f[2].empty()) {
            throw ParseError(std::string(source), line_no, "expected 'task_id<TAB>dim<TAB>intruder...'");
        }
        entry.intruder = std::string(f[2]);
        key.push_back(std::move(entry));
    }
    return key;
}

std::vector<Annotation> read_annotations(std::istream &in, std::string_view source) {
    std::vector<Annotation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_comment(detail::trim(line))) continue;
        const auto f = tab_fields(line);
        if (is_header(f[0])) continue;
        const std::string src(source);
        Annotation a;
        if (f.size() < 3 || !detail::parse_int(f[0], a.task) || f[1].empty()) {
            throw ParseError(src, line_no, "expected 'task_id<TAB>annotator<TAB>decision<TAB>words'");
        }
        a.annotator = std::string(f[1]);
        std::size_t expected_words = 0;
        if (f[2] == "+") {
            a.decision = Decision::intruder;
            expected_words = 1;
        } else if (f[2] == "+-" || f[2] == "±") {
            a.decision = Decision::hesitate;
            expected_words = 2;
        } else if (f[2] == "-") {
            a.decision = Decision::coherent;
        } else {
            throw ParseError(src, line_no, "unknown decision '" + std::string(f[2]) + "'");
        }
        if (f.size() > 3 && !f[3].empty()) {
            std::size_t start = 0;
            const auto words = f[3];
            while (true) {
                const auto at = words.find(',', start);
                const auto w = detail::trim(words.substr(start, at == std::string_view::npos ? at : at - start));
                if (!w.empty()) a.words.emplace_back(w);
                if (at == std::string_view::npos) break;
                start = at + 1;
            }
        }
        if (a.words.size() != expected_words) {
            throw ParseError(src, line_no, "decision '" + std::string(f[2]) + "' takes " +
                                               std::to_string(expected_words) + " word(s)");
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::string outcome_name(Outcome o) {
    switch (o) {
    case Outcome::found: return "found";
    case Outcome::hesitated_found: return "hesitated_found";
    case Outcome::wrong: return "wrong";
    case Outcome::hesitated_wrong: return "hesitated_wrong";
    case Outcome::coherent: return "coherent";
    }
    return "unknown";
}

Outcome classify_annotation(const Annotation &a, const std::string &intruder) {
    const bool hit = std::find(a.words.begin(), a.words.end(), intruder) != a.words.end();
    switch (a.decision) {
    case Decision::intruder: return hit ? Outcome::found : Outcome::wrong;
    case Decision::hesitate: return hit ? Outcome::hesitated_found : Outcome::hesitated_wrong;
    case Decision::coherent: return Outcome::coherent;
    }
    return Outcome::coherent;
}

double fleiss_kappa(const std::vector<std::vector<std::size_t>> &counts) {
    std::vector<double> category_total;
    double agreement = 0.0;
    double ratings = 0.0;
    std::size_t items = 0;
    for (const auto &row : counts) {
        std::size_t n = 0;
        for (std::size_t c : row) n += c;
        if (n < 2) continue;
        if (category_total.size() < row.size()) category_total.resize(row.size(), 0.0);
        double pairs = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            pairs += static_cast<double>(row[j]) * static_cast<double>(row[j] - (row[j] > 0 ? 1 : 0));
            category_total[j] += static_cast<double>(row[j]);
        }
        agreement += pairs / (static_cast<double>(n) * static_cast<double>(n - 1));
        ratings += static_cast<double>(n);
        ++items;
    }
    if (items == 0) throw ValidationError("Fleiss' kappa needs an item with at least two ratings");
    const double p_bar = agreement / static_cast<double>(items);
    double p_e = 0.0;
    for (double t : category_total) p_e += (t / ratings) * (t / ratings);
    if (p_e >= 1.0) return 1.0; // every rating in one category
    return (p_bar - p_e) / (1.0 - p_e);
}

AnnotationScore score_annotations(const std::vector<IntrusionKeyEntry> &key, const std::vector<Annotation> &annotations) {
    std::unordered_map<std::size_t, const IntrusionKeyEntry *> by_id;
    for (const auto &entry : key) by_id[entry.id] = &entry;

    AnnotationScore score;
    std::map<std::size_t, std::vector<std::size_t>> per_task;
    for (const auto &a : annotations) {
        const auto it = by_id.find(a.task);
        if (it == by_id.end()) throw ValidationError("annotation for unknown task " + std::to_string(a.task));
        const auto o = static_cast<std::size_t>(classify_annotation(a, it->second->intruder));
        ++score.counts[o];
        ++score.annotations;
        auto &row = per_task[a.task];
        row.resize(kOutcomeCount, 0);
        ++row[o];
    }
    score.tasks = per_task.size();

    std::vector<std::vector<std::size_t>> rows;
    std::size_t two = 0, all = 0;
    for (const auto &[task, row] : per_task) {
        std::size_t n = 0, top = 0;
        for (std::size_t c : row) {
            n += c;
            top = std::max(top, c);
        }
        if (n < 2) continue;
        two += top >= 2;
        all += top == n;
        rows.push_back(row);
    }
    if (!rows.empty()) {
        score.agree_two = static_cast<double>(two) / static_cast<double>(rows.size());
        score.agree_all = static_cast<double>(all) / static_cast<double>(rows.size());
        score.fleiss_kappa = fleiss_kappa(rows);
    }
    return score;
}

} // namespace sinr
