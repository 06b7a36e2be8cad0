#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sinr/community.hpp"
#include "sinr/embedding.hpp"
#include "sinr/graph.hpp"

namespace sinr {

struct SimilarityPair {
    std::string first;
    std::string second;
    double score = 0.0;
};

struct SimilarityDataset {
    std::string name;
    std::vector<SimilarityPair> pairs;
};

/**
 * Layouts understood by the similarity loader:
 *  - tsv:   "word1 word2 score" separated by tabs or blanks
 *  - men:   like tsv; a trailing "-n"/"-v"/"-j" part-of-speech tag is removed
 *  - ws353: comma- or tab-separated "word1,word2,score"; a header row is skipped
 *  - scws:  "id word1 pos1 word2 pos2 context1 context2 average ratings..." (tabs)
 * Lines starting with '#' are ignored. Repeated pairs (in either order) keep
 * their first occurrence.
 */
enum class SimilarityFormat { tsv, men, ws353, scws };

SimilarityDataset read_similarity_dataset(std::istream &in, SimilarityFormat format, std::string name,
                                          std::string_view source = "<stream>");
SimilarityDataset load_similarity_dataset(const std::filesystem::path &path, SimilarityFormat format);

struct CategorizationDataset {
    std::string name;
    std::vector<std::pair<std::string, std::string>> items; ///< (word, category)
    std::size_t category_count() const;
};

/// "word<TAB>category" (or blanks, or a comma); later duplicates of a word are dropped.
CategorizationDataset read_categorization_dataset(std::istream &in, std::string name,
                                                  std::string_view source = "<stream>");
CategorizationDataset load_categorization_dataset(const std::filesystem::path &path);

struct SimilarityResult {
    double spearman = 0.0;
    double coverage = 0.0; ///< retained pairs / all pairs
    std::size_t retained = 0;
};

/// Spearman correlation between human scores and cosine similarities. Pairs
/// with a word missing from `e` (or embedded as a zero row) are dropped.
/// Throws ValidationError when fewer than two pairs remain.
SimilarityResult word_similarity(const SparseEmbedding &e, const SimilarityDataset &ds);

struct CategorizationResult {
    double purity = 0.0;        ///< max of the two below
    double kmeans_purity = 0.0; ///< mean over runs
    double agglomerative_purity = 0.0;
    double coverage = 0.0;
};

/// k-means (averaged over `runs` seeds) and average-linkage clustering of the
/// covered words into as many clusters as they have categories.
CategorizationResult concept_categorization(const SparseEmbedding &e, const CategorizationDataset &ds,
                                            std::size_t runs = 10, std::uint64_t seed = 0);

/// NMI of every pair of `runs` Louvain partitions with derived seeds, in
/// (0,1), (0,2), ..., (1,2), ... order.
std::vector<double> community_stability(const WeightedGraph &g, const LouvainConfig &config, std::size_t runs,
                           std::uint64_t seed = 0, std::size_t jobs = 1);

/// 1 - |nn_A(word) & nn_B(word)| / n with neighbours matched by label.
double varnn(const SparseEmbedding &a, const SparseEmbedding &b, std::string_view word, std::size_t n);

/// Words embedded (with a nonzero row) in every model, in the first model's order.
std::vector<std::string> shared_vocabulary(const std::vector<const SparseEmbedding *> &models);

/// Mean varnn over all model pairs and `words`, one value per entry of `ns`.
std::vector<double> mean_varnn(const std::vector<const SparseEmbedding *> &models, const std::vector<std::size_t> &ns,
                               const std::vector<std::string> &words, std::size_t jobs = 1);

/// Uniform sample of `count` words without replacement (all words if fewer).
std::vector<std::string> sample_words(std::vector<std::string> words, std::size_t count, std::uint64_t seed);

} // namespace sinr
