#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sinr/embedding.hpp"

namespace sinr {

/// Words of one dimension ranked by value (descending, ties by ascending row id).
struct DimensionDescriptor {
    DimensionId dim = 0;
    std::vector<std::pair<std::string, double>> words;
    std::size_t member_count = 0; ///< nonzero entries of the column
    bool short_list = false;      ///< fewer nonzeros than requested
};

DimensionDescriptor top_words(const SparseEmbedding &e, DimensionId dim, std::size_t k);

/// Human-readable name: the dimension label if set, else "dim<id>".
std::string dimension_name(const SparseEmbedding &e, DimensionId dim);

struct IntrusionTask {
    std::size_t id = 0;
    DimensionId dim = 0;
    std::array<std::string, 3> top;
    std::string intruder;
    std::array<std::string, 4> shown; ///< top words and intruder, shuffled
    std::string model;
    std::uint64_t seed = 0;
};

/**
 * Rank-based percentile tests used by the intrusion sampler. Among the n
 * values of a column (zeros included), v is in the bottom q when fewer than
 * q*n values are strictly smaller, and in the top q when v > 0 and fewer than
 * q*n values are strictly larger. Ties therefore share one verdict.
 */
class ColumnPercentiles {
public:
    explicit ColumnPercentiles(const SparseEmbedding &e);

    bool in_bottom_30(DimensionId dim, double value) const;
    bool in_top_10(DimensionId dim, double value) const;

private:
    std::size_t rows_ = 0;
    std::vector<std::vector<double>> sorted_; // nonzero values per column, ascending
};

/**
 * One task per sampled dimension: its three strongest words plus an intruder
 * drawn from words in the bottom 30% of that dimension and the top 10% of
 * another. Dimensions without three nonzero words or without a qualifying
 * intruder are skipped; the 101st skip throws. Requesting more tasks than
 * there are dimensions throws ValidationError.
 */
std::vector<IntrusionTask> sample_intrusion_tasks(const SparseEmbedding &e, std::size_t count, std::uint64_t seed,
                                                  std::string model = "model");

/// Empty when the task is consistent with `e`, otherwise the reason.
std::string validate_intrusion_task(const SparseEmbedding &e, const IntrusionTask &task);

/// Annotator file: "task_id w1 w2 w3 w4" (tab separated, with a header row).
void write_intrusion_tasks(std::ostream &out, const std::vector<IntrusionTask> &tasks);
/// Key file: "task_id dim intruder top1 top2 top3 model seed".
void write_intrusion_key(std::ostream &out, const std::vector<IntrusionTask> &tasks);

struct IntrusionKeyEntry {
    std::size_t id = 0;
    DimensionId dim = 0;
    std::string intruder;
};
std::vector<IntrusionKeyEntry> read_intrusion_key(std::istream &in, std::string_view source = "<stream>");

struct DimensionStrength {
    DimensionId dim = 0;
    double value = 0.0;
    DimensionDescriptor descriptor;
};

struct StrongestDimensions {
    std::vector<DimensionStrength> dims;
    bool short_list = false;
};

/// The k largest coordinates of `word`, each with its top `words_per_dim` words.
StrongestDimensions strongest_dimensions(const SparseEmbedding &e, std::string_view word, std::size_t k,
                                         std::size_t words_per_dim = 5);

struct SharedDimensions {
    std::vector<std::string> words;
    std::vector<DimensionId> dims;            ///< ascending
    std::vector<std::vector<double>> values;  ///< values[word][dim index]
    std::vector<DimensionDescriptor> descriptors;
};

/// Dimensions on which at least two of `words` are nonzero. Missing words
/// raise ValidationError naming all of them.
SharedDimensions shared_dimensions(const SparseEmbedding &e, const std::vector<std::string> &words,
                                   std::size_t words_per_dim = 3);

/// Tab-separated grid, one row per word, one column per shared dimension.
/// Cells hold 1/0 presence, or the values when `presence_only` is false.
void write_shared_grid(std::ostream &out, const SharedDimensions &shared, bool presence_only = true);

// ---------------------------------------------------------------------------
// Annotation scoring

enum class Decision { intruder, hesitate, coherent };

/// One annotator's answer: '+' with one word, '+-' with two words, '-' with none.
struct Annotation {
    std::size_t task = 0;
    std::string annotator;
    Decision decision = Decision::coherent;
    std::vector<std::string> words;
};

/// "task_id annotator decision words" with words comma separated; decision is
/// '+', '+-' (or '±') or '-'.
std::vector<Annotation> read_annotations(std::istream &in, std::string_view source = "<stream>");

enum class Outcome { found, hesitated_found, wrong, hesitated_wrong, coherent };
inline constexpr std::size_t kOutcomeCount = 5;
std::string outcome_name(Outcome o);

Outcome classify_annotation(const Annotation &a, const std::string &intruder);

struct AnnotationScore {
    std::array<std::size_t, kOutcomeCount> counts{}; ///< indexed by Outcome
    std::size_t annotations = 0;
    std::size_t tasks = 0;           ///< tasks with at least one annotation
    double agree_two = 0.0;          ///< share of multi-rated tasks where two raters share an outcome
    double agree_all = 0.0;          ///< share of multi-rated tasks where all raters share it
    double fleiss_kappa = 0.0;       ///< over outcome categories
};

/// Annotations for tasks absent from the key raise ValidationError.
AnnotationScore score_annotations(const std::vector<IntrusionKeyEntry> &key, const std::vector<Annotation> &annotations);

/// Fleiss' kappa for items rated by varying numbers of raters (items with
/// fewer than two ratings are ignored). counts[item][category].
double fleiss_kappa(const std::vector<std::vector<std::size_t>> &counts);

} // namespace sinr
