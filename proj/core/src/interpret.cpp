#include <algorithm>
#include <ostream>
#include <unordered_set>

#include "sinr/error.hpp"
#include "sinr/interpret.hpp"
#include "sinr/random.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

struct ColumnEntry {
    NodeId row;
    double value;
};

// Descending value, ties by ascending row.
bool stronger(const ColumnEntry &a, const ColumnEntry &b) {
    return a.value != b.value ? a.value > b.value : a.row < b.row;
}

std::vector<std::vector<ColumnEntry>> columns_of(const SparseEmbedding &e) {
    std::vector<std::vector<ColumnEntry>> cols(e.cols());
    for (NodeId u = 0; u < e.rows(); ++u) {
        for (const auto &entry : e.row(u)) cols[entry.dim].push_back({u, entry.value});
    }
    return cols;
}

std::vector<ColumnEntry> ranked_column(const SparseEmbedding &e, DimensionId dim) {
    std::vector<ColumnEntry> col;
    for (NodeId u = 0; u < e.rows(); ++u) {
        const double v = e.value(u, dim);
        if (v > 0.0) col.push_back({u, v});
    }
    std::sort(col.begin(), col.end(), stronger);
    return col;
}

DimensionDescriptor describe(const SparseEmbedding &e, DimensionId dim, std::vector<ColumnEntry> col,
                             std::size_t k) {
    DimensionDescriptor d;
    d.dim = dim;
    d.member_count = col.size();
    d.short_list = col.size() < k;
    const std::size_t take = std::min(k, col.size());
    std::partial_sort(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(take), col.end(), stronger);
    for (std::size_t i = 0; i < take; ++i) d.words.emplace_back(e.labels().label(col[i].row), col[i].value);
    return d;
}

void check_dim(const SparseEmbedding &e, DimensionId dim) {
    if (dim >= e.cols()) {
        throw ValidationError("dimension " + std::to_string(dim) + " out of range (" + std::to_string(e.cols()) +
                              " dimensions)");
    }
}

} // namespace

DimensionDescriptor top_words(const SparseEmbedding &e, DimensionId dim, std::size_t k) {
    check_dim(e, dim);
    return describe(e, dim, ranked_column(e, dim), k);
}

std::string dimension_name(const SparseEmbedding &e, DimensionId dim) {
    const auto &names = e.dimension_labels();
    if (dim < names.size() && !names[dim].empty()) return names[dim];
    return "dim" + std::to_string(dim);
}

ColumnPercentiles::ColumnPercentiles(const SparseEmbedding &e) : rows_(e.rows()), sorted_(e.cols()) {
    for (NodeId u = 0; u < e.rows(); ++u) {
        for (const auto &entry : e.row(u)) sorted_[entry.dim].push_back(entry.value);
    }
    for (auto &col : sorted_) std::sort(col.begin(), col.end());
}

bool ColumnPercentiles::in_bottom_30(DimensionId dim, double value) const {
    const auto &col = sorted_.at(dim);
    std::size_t smaller = 0;
    if (value > 0.0) {
        smaller = (rows_ - col.size()) +
                  static_cast<std::size_t>(std::lower_bound(col.begin(), col.end(), value) - col.begin());
    }
    return 10 * smaller < 3 * rows_;
}

bool ColumnPercentiles::in_top_10(DimensionId dim, double value) const {
    if (!(value > 0.0)) return false;
    const auto &col = sorted_.at(dim);
    const auto larger = static_cast<std::size_t>(col.end() - std::upper_bound(col.begin(), col.end(), value));
    return 10 * larger < rows_;
}

std::vector<IntrusionTask> sample_intrusion_tasks(const SparseEmbedding &e, std::size_t count, std::uint64_t seed,
                                                  std::string model) {
    if (e.cols() < 2) throw ValidationError("intrusion tasks need at least two dimensions");
    if (count > e.cols()) {
        throw ValidationError("cannot sample " + std::to_string(count) + " distinct dimensions out of " +
                              std::to_string(e.cols()));
    }
    const ColumnPercentiles pct(e);
    auto cols = columns_of(e);

    // Rows in the top 10% of at least one dimension, with those dimensions.
    std::vector<std::pair<NodeId, std::vector<DimensionId>>> strong;
    for (NodeId u = 0; u < e.rows(); ++u) {
        std::vector<DimensionId> dims;
        for (const auto &entry : e.row(u)) {
            if (pct.in_top_10(entry.dim, entry.value)) dims.push_back(entry.dim);
        }
        if (!dims.empty()) strong.emplace_back(u, std::move(dims));
    }

    Rng rng(seed);
    std::vector<DimensionId> order(e.cols());
    for (DimensionId d = 0; d < order.size(); ++d) order[d] = d;
    shuffle(order.begin(), order.end(), rng);

    std::vector<IntrusionTask> tasks;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < order.size() && tasks.size() < count; ++i) {
        const DimensionId dim = order[i];
        auto &col = cols[dim];
        std::vector<NodeId> candidates;
        if (col.size() >= 3) {
            std::partial_sort(col.begin(), col.begin() + 3, col.end(), stronger);
            for (const auto &[u, dims] : strong) {
                if (u == col[0].row || u == col[1].row || u == col[2].row) continue;
                const bool elsewhere = dims.size() > 1 || dims.front() != dim;
                if (elsewhere && pct.in_bottom_30(dim, e.value(u, dim))) candidates.push_back(u);
            }
        }
        if (candidates.empty()) {
            if (++failures > 100) {
                throw ValidationError("no qualifying intruder for 101 sampled dimensions (" +
                                      std::to_string(tasks.size()) + " tasks built)");
            }
            continue;
        }
        IntrusionTask t;
        t.id = tasks.size();
        t.dim = dim;
        for (std::size_t j = 0; j < 3; ++j) t.top[j] = e.labels().label(col[j].row);
        t.intruder = e.labels().label(candidates[uniform_index(rng, candidates.size())]);
        t.shown = {t.top[0], t.top[1], t.top[2], t.intruder};
        shuffle(t.shown.begin(), t.shown.end(), rng);
        t.model = model;
        t.seed = seed;
        tasks.push_back(std::move(t));
    }
    if (tasks.size() < count) {
        throw ValidationError("only " + std::to_string(tasks.size()) + " of " + std::to_string(count) +
                              " intrusion tasks could be built");
    }
    return tasks;
}

std::string validate_intrusion_task(const SparseEmbedding &e, const IntrusionTask &task) {
    if (task.dim >= e.cols()) return "dimension out of range";
    std::unordered_set<std::string> distinct(task.top.begin(), task.top.end());
    distinct.insert(task.intruder);
    if (distinct.size() != 4) return "the four words are not distinct";
    auto shown = task.shown;
    std::array<std::string, 4> expected{task.top[0], task.top[1], task.top[2], task.intruder};
    std::sort(shown.begin(), shown.end());
    std::sort(expected.begin(), expected.end());
    if (shown != expected) return "presented words differ from the task words";

    const auto col = ranked_column(e, task.dim);
    if (col.size() < 3) return "dimension has fewer than three nonzero words";
    for (std::size_t j = 0; j < 3; ++j) {
        if (e.labels().label(col[j].row) != task.top[j]) return "top word " + std::to_string(j) + " is not ranked " + std::to_string(j);
    }
    const auto intruder = e.find(task.intruder);
    if (!intruder) return "intruder is not in the vocabulary";
    const ColumnPercentiles pct(e);
    if (!pct.in_bottom_30(task.dim, e.value(*intruder, task.dim))) return "intruder is not in the bottom 30%";
    for (const auto &entry : e.row(*intruder)) {
        if (entry.dim != task.dim && pct.in_top_10(entry.dim, entry.value)) return {};
    }
    return "intruder is not in the top 10% of another dimension";
}

void write_intrusion_tasks(std::ostream &out, const std::vector<IntrusionTask> &tasks) {
    out << "task_id\tword1\tword2\tword3\tword4\n";
    for (const auto &t : tasks) {
        out << t.id;
        for (const auto &w : t.shown) out << '\t' << w;
        out << '\n';
    }
}

void write_intrusion_key(std::ostream &out, const std::vector<IntrusionTask> &tasks) {
    out << "task_id\tdim\tintruder\ttop1\ttop2\ttop3\tmodel\tseed\n";
    for (const auto &t : tasks) {
        out << t.id << '\t' << t.dim << '\t' << t.intruder << '\t' << t.top[0] << '\t' << t.top[1] << '\t'
            << t.top[2] << '\t' << t.model << '\t' << t.seed << '\n';
    }
}

StrongestDimensions strongest_dimensions(const SparseEmbedding &e, std::string_view word, std::size_t k,
                                         std::size_t words_per_dim) {
    const auto id = e.find(word);
    if (!id) throw ValidationError("word '" + std::string(word) + "' is not in the vocabulary");
    std::vector<SparseEntry> row(e.row(*id).begin(), e.row(*id).end());
    std::sort(row.begin(), row.end(), [](const SparseEntry &a, const SparseEntry &b) {
        return a.value != b.value ? a.value > b.value : a.dim < b.dim;
    });
    StrongestDimensions out;
    out.short_list = row.size() < k;
    row.resize(std::min(k, row.size()));
    for (const auto &entry : row) out.dims.push_back({entry.dim, entry.value, top_words(e, entry.dim, words_per_dim)});
    return out;
}

SharedDimensions shared_dimensions(const SparseEmbedding &e, const std::vector<std::string> &words,
                                   std::size_t words_per_dim) {
    std::vector<NodeId> ids;
    std::string missing;
    for (const auto &w : words) {
        const auto id = e.find(w);
        if (!id) {
            missing += (missing.empty() ? "" : ", ") + w;
            continue;
        }
        ids.push_back(*id);
    }
    if (!missing.empty()) throw ValidationError("not in the vocabulary: " + missing);

    std::vector<std::size_t> hits(e.cols(), 0);
    for (NodeId u : ids) {
        for (const auto &entry : e.row(u)) ++hits[entry.dim];
    }
    SharedDimensions out;
    out.words = words;
    for (DimensionId d = 0; d < hits.size(); ++d) {
        if (hits[d] >= 2) out.dims.push_back(d);
    }
    for (NodeId u : ids) {
        std::vector<double> values;
        values.reserve(out.dims.size());
        for (DimensionId d : out.dims) values.push_back(e.value(u, d));
        out.values.push_back(std::move(values));
    }
    for (DimensionId d : out.dims) out.descriptors.push_back(top_words(e, d, words_per_dim));
    return out;
}

void write_shared_grid(std::ostream &out, const SharedDimensions &shared, bool presence_only) {
    out << "word";
    for (const auto &desc : shared.descriptors) {
        out << "\tdim" << desc.dim;
        if (!desc.words.empty()) {
            out << ':';
            for (std::size_t i = 0; i < desc.words.size(); ++i) out << (i ? "," : "") << desc.words[i].first;
        }
    }
    out << '\n';
    for (std::size_t w = 0; w < shared.words.size(); ++w) {
        out << shared.words[w];
        for (double v : shared.values[w]) {
            out << '\t';
            if (presence_only) {
                out << (v > 0.0 ? 1 : 0);
            } else {
                out << detail::format_double(v);
            }
        }
        out << '\n';
    }
}

} // namespace sinr
