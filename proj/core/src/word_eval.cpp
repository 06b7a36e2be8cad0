#include <algorithm>
#include <cmath>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include "file_util.hpp"
#include "sinr/clustering.hpp"
#include "sinr/error.hpp"
#include "sinr/eval_word.hpp"
#include "sinr/parallel.hpp"
#include "sinr/random.hpp"
#include "sinr/stats.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

std::vector<std::string_view> split_on(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = line.find(sep, start);
        out.push_back(detail::trim(line.substr(start, at == std::string_view::npos ? at : at - start)));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return out;
}

std::string strip_pos_tag(std::string_view word) {
    if (word.size() > 2 && word[word.size() - 2] == '-') {
        const char tag = word.back();
        if (tag == 'n' || tag == 'v' || tag == 'j' || tag == 'a' || tag == 'r') word.remove_suffix(2);
    }
    return std::string(word);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char &ch : out) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
}

// Row of `word` if it is embedded with a nonzero vector.
std::optional<NodeId> usable_row(const SparseEmbedding &e, std::string_view word) {
    auto id = e.find(word);
    if (!id || e.row(*id).empty()) return std::nullopt;
    return id;
}

} // namespace

SimilarityDataset read_similarity_dataset(std::istream &in, SimilarityFormat format, std::string name,
                                          std::string_view source) {
    SimilarityDataset ds;
    ds.name = std::move(name);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    const std::string src(source);
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (detail::is_comment(text)) continue;
        std::vector<std::string_view> f;
        std::string_view w1, w2, score_text;
        switch (format) {
        case SimilarityFormat::tsv:
        case SimilarityFormat::men:
            f = detail::split_fields(text);
            if (f.size() < 3) throw ParseError(src, line_no, "expected 'word1 word2 score'");
            w1 = f[0];
            w2 = f[1];
            score_text = f[2];
            break;
        case SimilarityFormat::ws353:
            f = text.find('\t') != std::string_view::npos ? split_on(text, '\t') : split_on(text, ',');
            if (f.size() < 3) throw ParseError(src, line_no, "expected 'word1,word2,score'");
            w1 = f[0];
            w2 = f[1];
            score_text = f[2];
            break;
        case SimilarityFormat::scws:
            f = split_on(text, '\t');
            if (f.size() < 8) throw ParseError(src, line_no, "expected at least 8 tab-separated fields");
            w1 = f[1];
            w2 = f[3];
            score_text = f[7];
            break;
        }
        double score = 0.0;
        if (!detail::parse_double(score_text, score) || !std::isfinite(score)) {
            if (format == SimilarityFormat::ws353 && ds.pairs.empty()) continue; // header row
            throw ParseError(src, line_no, "invalid score '" + std::string(score_text) + "'");
        }
        SimilarityPair pair;
        pair.first = format == SimilarityFormat::men ? strip_pos_tag(w1) : std::string(w1);
        pair.second = format == SimilarityFormat::men ? strip_pos_tag(w2) : std::string(w2);
        pair.first = lower(pair.first);
        pair.second = lower(pair.second);
        pair.score = score;
        const std::string key =
            std::min(pair.first, pair.second) + '\x1f' + std::max(pair.first, pair.second);
        if (!seen.insert(key).second) continue;
        ds.pairs.push_back(std::move(pair));
    }
    return ds;
}

SimilarityDataset load_similarity_dataset(const std::filesystem::path &path, SimilarityFormat format) {
    auto in = detail::open_input(path);
    return read_similarity_dataset(in, format, path.stem().string(), path.string());
}

std::size_t CategorizationDataset::category_count() const {
    std::unordered_set<std::string> cats;
    for (const auto &[w, c] : items) cats.insert(c);
    return cats.size();
}

CategorizationDataset read_categorization_dataset(std::istream &in, std::string name, std::string_view source) {
    CategorizationDataset ds;
    ds.name = std::move(name);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (detail::is_comment(text)) continue;
        auto f = (text.find('\t') == std::string_view::npos && text.find(',') != std::string_view::npos)
                     ? split_on(text, ',')
                     : detail::split_fields(text);
        if (f.size() != 2 || f[0].empty() || f[1].empty()) {
            throw ParseError(std::string(source), line_no, "expected 'word<TAB>category'");
        }
        std::string word = lower(f[0]);
        if (!seen.insert(word).second) continue;
        ds.items.emplace_back(std::move(word), std::string(f[1]));
    }
    if (ds.category_count() < 2) throw ValidationError("a categorization dataset needs at least two categories");
    return ds;
}

CategorizationDataset load_categorization_dataset(const std::filesystem::path &path) {
    auto in = detail::open_input(path);
    return read_categorization_dataset(in, path.stem().string(), path.string());
}

SimilarityResult word_similarity(const SparseEmbedding &e, const SimilarityDataset &ds) {
    std::vector<double> human, model;
    for (const auto &pair : ds.pairs) {
        const auto a = usable_row(e, pair.first);
        const auto b = usable_row(e, pair.second);
        if (!a || !b) continue;
        human.push_back(pair.score);
        model.push_back(cosine_similarity(e, *a, *b));
    }
    if (human.size() < 2) {
        throw ValidationError("only " + std::to_string(human.size()) + " pairs of " + ds.name +
                              " are covered; at least 2 are needed");
    }
    SimilarityResult r;
    r.retained = human.size();
    r.coverage = static_cast<double>(human.size()) / static_cast<double>(ds.pairs.size());
    r.spearman = spearman(human, model);
    return r;
}

CategorizationResult concept_categorization(const SparseEmbedding &e, const CategorizationDataset &ds,
                                            std::size_t runs, std::uint64_t seed) {
    if (runs == 0) throw ValidationError("at least one run is required");
    std::vector<NodeId> rows;
    std::vector<std::uint32_t> categories;
    std::unordered_map<std::string, std::uint32_t> cat_ids;
    for (const auto &[word, cat] : ds.items) {
        const auto id = usable_row(e, word);
        if (!id) continue;
        rows.push_back(*id);
        categories.push_back(cat_ids.try_emplace(cat, static_cast<std::uint32_t>(cat_ids.size())).first->second);
    }
    if (rows.empty()) throw ValidationError("no word of " + ds.name + " is embedded");
    const std::size_t k = cat_ids.size();
    Eigen::MatrixXd points = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(e.cols()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto &entry : e.row(rows[i])) points(static_cast<Eigen::Index>(i), entry.dim) = entry.value;
    }
    points = normalize_rows(std::move(points));

    CategorizationResult r;
    r.coverage = static_cast<double>(rows.size()) / static_cast<double>(ds.items.size());
    double total = 0.0;
    for (std::size_t run = 0; run < runs; ++run) {
        KMeansConfig config;
        config.seed = derive_seed(seed, run);
        total += purity(kmeans(points, k, config).labels, categories);
    }
    r.kmeans_purity = total / static_cast<double>(runs);
    r.agglomerative_purity = purity(agglomerative_average_cosine(points, k), categories);
    r.purity = std::max(r.kmeans_purity, r.agglomerative_purity);
    return r;
}

std::vector<double> community_stability(const WeightedGraph &g, const LouvainConfig &config, std::size_t runs,
                                        std::uint64_t seed, std::size_t jobs) {
    if (runs < 2) throw ValidationError("community stability needs at least two runs");
    std::vector<Partition> parts(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
        LouvainConfig c = config;
        c.seed = derive_seed(seed, r);
        parts[r] = louvain(g, c);
    });
    std::vector<double> out;
    for (std::size_t i = 0; i < runs; ++i) {
        for (std::size_t j = i + 1; j < runs; ++j) out.push_back(nmi(parts[i], parts[j]));
    }
    return out;
}

namespace {

// Labels of the n nearest rows of `word`, best first.
std::vector<std::string> neighbor_labels(const SparseEmbedding &e, const NeighborIndex &index, NodeId row,
                                         std::size_t n) {
    const auto nn = index.top_k(row, n);
    std::vector<std::string> out;
    out.reserve(nn.size());
    for (const auto &nb : nn) out.push_back(e.labels().label(nb.node));
    return out;
}

double overlap_varnn(std::vector<std::string> a, std::vector<std::string> b, std::size_t n) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return 1.0 - static_cast<double>(common.size()) / static_cast<double>(n);
}

std::size_t candidate_count(const SparseEmbedding &e) {
    std::size_t c = 0;
    for (NodeId u = 0; u < e.rows(); ++u) c += !e.row(u).empty();
    return c;
}

} // namespace

double varnn(const SparseEmbedding &a, const SparseEmbedding &b, std::string_view word, std::size_t n) {
    if (n == 0) throw ValidationError("varnn needs n >= 1");
    const auto ra = usable_row(a, word);
    const auto rb = usable_row(b, word);
    if (!ra || !rb) throw ValidationError("word '" + std::string(word) + "' is not embedded in both models");
    if (candidate_count(a) - 1 < n || candidate_count(b) - 1 < n) {
        throw ValidationError("fewer than " + std::to_string(n) + " neighbour candidates");
    }
    const NeighborIndex ia(a), ib(b);
    return overlap_varnn(neighbor_labels(a, ia, *ra, n), neighbor_labels(b, ib, *rb, n), n);
}

std::vector<std::string> shared_vocabulary(const std::vector<const SparseEmbedding *> &models) {
    std::vector<std::string> out;
    if (models.empty()) return out;
    const auto &first = *models.front();
    for (NodeId u = 0; u < first.rows(); ++u) {
        if (first.row(u).empty()) continue;
        const auto &label = first.labels().label(u);
        bool everywhere = true;
        for (std::size_t m = 1; m < models.size() && everywhere; ++m) everywhere = usable_row(*models[m], label).has_value();
        if (everywhere) out.push_back(label);
    }
    return out;
}

std::vector<double> mean_varnn(const std::vector<const SparseEmbedding *> &models, const std::vector<std::size_t> &ns,
                               const std::vector<std::string> &words, std::size_t jobs) {
    if (models.size() < 2) throw ValidationError("mean varnn needs at least two models");
    if (ns.empty()) return {};
    if (words.empty()) throw ValidationError("mean varnn needs at least one word");
    const std::size_t max_n = *std::max_element(ns.begin(), ns.end());
    if (*std::min_element(ns.begin(), ns.end()) == 0) throw ValidationError("varnn needs n >= 1");
    for (const auto *m : models) {
        if (candidate_count(*m) - 1 < max_n) throw ValidationError("fewer than " + std::to_string(max_n) + " neighbour candidates");
    }

    // Ranked neighbour labels of every word in every model.
    std::vector<std::vector<std::vector<std::string>>> ranked(models.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
        const NeighborIndex index(*models[m]);
        ranked[m].resize(words.size());
        parallel_for(words.size(), jobs, [&](std::size_t w) {
            const auto row = usable_row(*models[m], words[w]);
            if (!row) throw ValidationError("word '" + words[w] + "' is missing from a model");
            ranked[m][w] = neighbor_labels(*models[m], index, *row, max_n);
        });
    }
    std::vector<double> out;
    out.reserve(ns.size());
    for (std::size_t n : ns) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t a = 0; a < models.size(); ++a) {
            for (std::size_t b = a + 1; b < models.size(); ++b) {
                for (std::size_t w = 0; w < words.size(); ++w) {
                    std::vector<std::string> la(ranked[a][w].begin(), ranked[a][w].begin() + static_cast<std::ptrdiff_t>(n));
                    std::vector<std::string> lb(ranked[b][w].begin(), ranked[b][w].begin() + static_cast<std::ptrdiff_t>(n));
                    total += overlap_varnn(std::move(la), std::move(lb), n);
                    ++count;
                }
            }
        }
        out.push_back(total / static_cast<double>(count));
    }
    return out;
}

std::vector<std::string> sample_words(std::vector<std::string> words, std::size_t count, std::uint64_t seed) {
    if (count >= words.size()) return words;
    Rng rng(seed);
    shuffle(words.begin(), words.end(), rng);
    words.resize(count);
    return words;
}

} // namespace sinr
