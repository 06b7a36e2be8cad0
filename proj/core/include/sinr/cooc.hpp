#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sinr/graph.hpp"

namespace sinr {

struct CorpusConfig {
    std::size_t window_size = 5;     ///< forward window, in token positions
    std::size_t min_count = 20;      ///< minimum occurrences of a retained word
    std::size_t min_word_length = 3; ///< in UTF-8 code points
    bool lowercase = true;           ///< ASCII case folding
};

void validate(const CorpusConfig &config);

/**
 * Sentence-segmented token stream. Token strings are interned; `tokens`
 * holds type ids and `sentence_offsets` delimits sentences.
 */
struct TokenizedCorpus {
    std::vector<std::string> types;
    std::vector<std::uint32_t> tokens;
    std::vector<std::size_t> sentence_offsets{0};

    std::size_t sentence_count() const noexcept { return sentence_offsets.size() - 1; }
    std::span<const std::uint32_t> sentence(std::size_t s) const {
        return {tokens.data() + sentence_offsets[s], sentence_offsets[s + 1] - sentence_offsets[s]};
    }

    /// Appends one whitespace-tokenised sentence (empty sentences are kept).
    void add_sentence(std::string_view line, bool lowercase);
    void add_sentence(std::span<const std::string> words, bool lowercase);

private:
    std::uint32_t intern(std::string_view token);
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// One sentence per line, tokens separated by blanks.
TokenizedCorpus read_corpus(std::istream &in, bool lowercase = true);
TokenizedCorpus load_corpus(const std::filesystem::path &path, bool lowercase = true);

/// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t utf8_length(std::string_view s);

/**
 * Retained words with their occurrence counts. Word ids follow descending
 * count, ties in lexicographic byte order.
 */
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts);

    std::size_t size() const noexcept { return words_.size(); }
    const std::string &word(std::uint32_t id) const { return words_.at(id); }
    std::uint64_t count(std::uint32_t id) const { return counts_.at(id); }
    std::optional<std::uint32_t> find(std::string_view word) const;
    std::span<const std::string> words() const noexcept { return words_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::uint64_t total_count() const noexcept { return total_; }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/**
 * Counts every type, then keeps those with count >= min_count and length >=
 * min_word_length. Words in `exceptions` skip the length filter only.
 * Throws ValidationError when nothing survives.
 */
Vocabulary build_vocab(const TokenizedCorpus &corpus, const CorpusConfig &config,
                       const std::unordered_set<std::string> &exceptions = {});

/// Reads an exception list, one token per line (case folded like the corpus).
std::unordered_set<std::string> load_exceptions(const std::filesystem::path &path, bool lowercase = true);

/// Symmetric co-occurrence counts over vocabulary ids; the diagonal is never stored.
class CoocAccumulator {
public:
    explicit CoocAccumulator(std::size_t window_size = 5) : window_size_(window_size) {}

    void add(std::uint32_t a, std::uint32_t b, std::uint64_t count = 1);
    std::uint64_t count(std::uint32_t a, std::uint32_t b) const;
    /// Adds the counts of `other`; window sizes must match.
    void merge(const CoocAccumulator &other);

    std::size_t pair_count() const noexcept { return counts_.size(); }
    /// Sum of counts over unordered pairs.
    std::uint64_t total() const noexcept { return total_; }
    std::size_t window_size() const noexcept { return window_size_; }
    bool empty() const noexcept { return counts_.empty(); }

    /// Calls f(a, b, count) with a < b, in ascending (a, b) order.
    template <class F> void for_each_sorted(F &&f) const {
        for (const auto &[key, c] : sorted()) f(static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), c);
    }

    bool operator==(const CoocAccumulator &other) const {
        return window_size_ == other.window_size_ && counts_ == other.counts_;
    }

private:
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted() const;

    std::size_t window_size_;
    std::unordered_map<std::uint64_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/**
 * Each retained token co-occurs once with every retained token at most
 * window_size positions to its right within the same sentence. Dropped
 * tokens still occupy positions. `jobs` shards sentences across threads.
 */
CoocAccumulator accumulate_cooc(const TokenizedCorpus &corpus, const Vocabulary &vocab, const CorpusConfig &config,
                                std::size_t jobs = 1);

/**
 * PMI test of a pair: keep iff p(a, b) >= p(a) p(b) with
 * p(a, b) = cooc(a, b) / (sum of cooc over ordered pairs) and
 * p(a) = occ(a) / (sum of occ over the vocabulary). Evaluated in exact integer
 * arithmetic, so pairs at PMI exactly 0 are kept.
 */
bool pmi_keep(std::uint64_t cooc, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t ordered_pair_total,
              std::uint64_t occ_total);
double pmi(std::uint64_t cooc, std::uint64_t occ_a, std::uint64_t occ_b, std::uint64_t ordered_pair_total,
           std::uint64_t occ_total);

struct CoocGraph {
    WeightedGraph graph;     ///< largest connected component, labeled by word
    std::size_t pairs = 0;   ///< distinct pairs before filtering
    std::size_t kept = 0;    ///< pairs passing the PMI test
    std::vector<std::uint64_t> counts; ///< occurrence count per graph node
};

/// Drops negative-PMI pairs, weights edges by raw counts and keeps the LCC.
/// Throws ValidationError if the accumulator is empty or no pair survives.
CoocGraph pmi_filter(const CoocAccumulator &acc, const Vocabulary &vocab);

/// Sidecar "word<TAB>count" in graph node order.
void write_vocabulary(const CoocGraph &cg, std::ostream &out);

} // namespace sinr
