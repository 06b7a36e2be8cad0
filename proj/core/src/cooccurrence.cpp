#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>

#include "file_util.hpp"
#include "sinr/cooc.hpp"
#include "sinr/error.hpp"
#include "sinr/graph_algorithms.hpp"
#include "sinr/parallel.hpp"
#include "text_util.hpp"

namespace sinr {

namespace {

std::string fold_case(std::string_view token, bool lowercase) {
    std::string out(token);
    if (lowercase) {
        for (char &ch : out) {
            if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
        }
    }
    return out;
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
}

} // namespace

void validate(const CorpusConfig &config) {
    if (config.window_size == 0) throw ValidationError("window size must be >= 1");
    if (config.min_count == 0) throw ValidationError("min count must be >= 1");
    if (config.min_word_length == 0) throw ValidationError("min word length must be >= 1");
}

std::uint32_t TokenizedCorpus::intern(std::string_view token) {
    auto [it, inserted] = index_.try_emplace(std::string(token), static_cast<std::uint32_t>(types.size()));
    if (inserted) types.emplace_back(token);
    return it->second;
}

void TokenizedCorpus::add_sentence(std::string_view line, bool lowercase) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(intern(fold_case(line.substr(start, i - start), lowercase)));
    }
    sentence_offsets.push_back(tokens.size());
}

void TokenizedCorpus::add_sentence(std::span<const std::string> words, bool lowercase) {
    for (const auto &w : words) tokens.push_back(intern(fold_case(w, lowercase)));
    sentence_offsets.push_back(tokens.size());
}

TokenizedCorpus read_corpus(std::istream &in, bool lowercase) {
    TokenizedCorpus corpus;
    std::string line;
    while (std::getline(in, line)) corpus.add_sentence(line, lowercase);
    return corpus;
}

TokenizedCorpus load_corpus(const std::filesystem::path &path, bool lowercase) {
    auto in = detail::open_input(path);
    return read_corpus(in, lowercase);
}

std::size_t utf8_length(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
    if (words_.size() != counts_.size()) throw ValidationError("one count per word expected");
    for (std::uint32_t i = 0; i < words_.size(); ++i) {
        if (counts_[i] == 0) throw ValidationError("word '" + words_[i] + "' has a zero count");
        if (!index_.try_emplace(words_[i], i).second) throw ValidationError("duplicate word '" + words_[i] + "'");
        total_ += counts_[i];
    }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocab(const TokenizedCorpus &corpus, const CorpusConfig &config,
                       const std::unordered_set<std::string> &exceptions) {
    validate(config);
    std::vector<std::uint64_t> counts(corpus.types.size(), 0);
    for (auto t : corpus.tokens) ++counts[t];

    std::vector<std::uint32_t> kept;
    for (std::uint32_t t = 0; t < counts.size(); ++t) {
        if (counts[t] < config.min_count) continue;
        const auto &word = corpus.types[t];
        if (utf8_length(word) < config.min_word_length && !exceptions.contains(word)) continue;
        kept.push_back(t);
    }
    if (kept.empty()) throw ValidationError("no word survives the vocabulary filters");
    std::sort(kept.begin(), kept.end(), [&](std::uint32_t a, std::uint32_t b) {
        return counts[a] != counts[b] ? counts[a] > counts[b] : corpus.types[a] < corpus.types[b];
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> kept_counts;
    words.reserve(kept.size());
    kept_counts.reserve(kept.size());
    for (auto t : kept) {
        words.push_back(corpus.types[t]);
        kept_counts.push_back(counts[t]);
    }
    return Vocabulary(std::move(words), std::move(kept_counts));
}

std::unordered_set<std::string> load_exceptions(const std::filesystem::path &path, bool lowercase) {
    auto in = detail::open_input(path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto text = detail::trim(line);
        if (!text.empty()) out.insert(fold_case(text, lowercase));
    }
    return out;
}

void CoocAccumulator::add(std::uint32_t a, std::uint32_t b, std::uint64_t count) {
    if (a == b || count == 0) return;
    counts_[pair_key(a, b)] += count;
    total_ += count;
}

std::uint64_t CoocAccumulator::count(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 0;
    auto it = counts_.find(pair_key(a, b));
    return it == counts_.end() ? 0 : it->second;
}

void CoocAccumulator::merge(const CoocAccumulator &other) {
    if (other.window_size_ != window_size_) throw ValidationError("cannot merge counts from different windows");
    for (const auto &[key, c] : other.counts_) counts_[key] += c;
    total_ += other.total_;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> CoocAccumulator::sorted() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out(counts_.begin(), counts_.end());
    std::sort(out.begin(), out.end());
    return out;
}

CoocAccumulator accumulate_cooc(const TokenizedCorpus &corpus, const Vocabulary &vocab, const CorpusConfig &config,
                                std::size_t jobs) {
    validate(config);
    std::vector<std::uint32_t> to_vocab(corpus.types.size(), UINT32_MAX);
    for (std::uint32_t t = 0; t < corpus.types.size(); ++t) {
        if (auto id = vocab.find(corpus.types[t])) to_vocab[t] = *id;
    }
    const std::size_t sentences = corpus.sentence_count();
    const std::size_t shards = std::max<std::size_t>(1, std::min(resolve_jobs(jobs), sentences));
    std::vector<CoocAccumulator> partial(shards, CoocAccumulator(config.window_size));
    parallel_for(shards, shards, [&](std::size_t shard) {
        auto &acc = partial[shard];
        for (std::size_t s = shard * sentences / shards; s < (shard + 1) * sentences / shards; ++s) {
            const auto sentence = corpus.sentence(s);
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                const auto a = to_vocab[sentence[i]];
                if (a == UINT32_MAX) continue;
                const std::size_t end = std::min(sentence.size(), i + config.window_size + 1);
                for (std::size_t j = i + 1; j < end; ++j) {
                    const auto b = to_vocab[sentence[j]];
                    if (b != UINT32_MAX) acc.add(a, b);
                }
            }
        }
    });
    CoocAccumulator out = std::move(partial.front());
    for (std::size_t i = 1; i < shards; ++i) out.merge(partial[i]);
    return out;
}

bool pmi_keep(std::uint64_t cooc, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t ordered_pair_total,
              std::uint64_t occ_total) {
    // cooc / T >= (occ_a / O) (occ_b / O)  <=>  cooc * O^2 >= occ_a * occ_b * T
    __extension__ typedef unsigned __int128 u128;
    const u128 lhs = u128{cooc} * occ_total * occ_total;
    const u128 rhs = u128{occ_a} * occ_b * ordered_pair_total;
    return lhs >= rhs;
}

double pmi(std::uint64_t cooc, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t ordered_pair_total,
           std::uint64_t occ_total) {
    const double pab = static_cast<double>(cooc) / static_cast<double>(ordered_pair_total);
    const double pa = static_cast<double>(occ_a) / static_cast<double>(occ_total);
    const double pb = static_cast<double>(occ_b) / static_cast<double>(occ_total);
    return std::log(pab / (pa * pb));
}

CoocGraph pmi_filter(const CoocAccumulator &acc, const Vocabulary &vocab) {
    if (acc.empty()) throw ValidationError("no co-occurrences to filter");
    const std::uint64_t ordered_total = 2 * acc.total();
    const std::uint64_t occ_total = vocab.total_count();

    GraphBuilder builder;
    for (const auto &w : vocab.words()) builder.add_node(w);
    CoocGraph out;
    acc.for_each_sorted([&](std::uint32_t a, std::uint32_t b, std::uint64_t c) {
        ++out.pairs;
        if (a >= vocab.size() || b >= vocab.size()) throw ValidationError("co-occurrence id outside the vocabulary");
        if (pmi_keep(c, vocab.count(a), vocab.count(b), ordered_total, occ_total)) {
            ++out.kept;
            builder.add_edge(a, b, static_cast<double>(c));
        }
    });
    if (out.kept == 0) throw ValidationError("every co-occurrence pair has negative PMI");
    auto lcc = largest_connected_component(builder.build());
    out.graph = std::move(lcc.graph);
    out.counts.reserve(lcc.new_to_old.size());
    for (auto old : lcc.new_to_old) out.counts.push_back(vocab.count(old));
    return out;
}

void write_vocabulary(const CoocGraph &cg, std::ostream &out) {
    for (NodeId u = 0; u < cg.graph.node_count(); ++u) {
        out << cg.graph.labels().label(u) << '\t' << cg.counts.at(u) << '\n';
    }
}

} // namespace sinr
