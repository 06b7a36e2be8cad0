#include "sinr/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sinr/error.hpp"

namespace sinr {

namespace {

void check_training_set(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) {
    if (x.rows() == 0) throw ValidationError("cannot train a classifier on zero samples");
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw ValidationError("feature and label counts differ");
    if (classes < 2) throw ValidationError("a classifier needs at least two classes");
    for (auto label : y) {
        if (label >= classes) throw ValidationError("label " + std::to_string(label) + " out of range");
    }
}

void softmax_rows(Eigen::MatrixXd &scores) {
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        const double top = scores.row(r).maxCoeff();
        scores.row(r) = (scores.row(r).array() - top).exp();
        scores.row(r) /= scores.row(r).sum();
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Per-feature split candidates. A value's bin is the number of thresholds
// strictly below it, so "bin <= b" is the same test as "x <= thresholds[b]".
struct Binning {
    std::vector<std::vector<double>> thresholds;
    std::vector<std::uint16_t> bins; // column-major, rows x features
    std::size_t rows = 0;

    std::uint16_t bin(std::size_t row, std::size_t feature) const { return bins[feature * rows + row]; }
};

Binning make_bins(const FeatureMatrix &x, std::size_t max_bins) {
    Binning b;
    b.rows = static_cast<std::size_t>(x.rows());
    const auto features = static_cast<std::size_t>(x.cols());
    b.thresholds.resize(features);
    b.bins.resize(b.rows * features);
    std::vector<double> column(b.rows);
    for (std::size_t f = 0; f < features; ++f) {
        for (std::size_t r = 0; r < b.rows; ++r) column[r] = x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f));
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> unique = sorted;
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        auto &cuts = b.thresholds[f];
        if (unique.size() <= max_bins) {
            cuts.assign(unique.begin(), unique.end() - (unique.empty() ? 0 : 1));
        } else {
            for (std::size_t q = 1; q < max_bins; ++q) {
                const double v = sorted[q * b.rows / max_bins];
                if (cuts.empty() || cuts.back() < v) cuts.push_back(v);
            }
            if (!cuts.empty() && cuts.back() == unique.back()) cuts.pop_back();
        }
        for (std::size_t r = 0; r < b.rows; ++r) {
            b.bins[f * b.rows + r] =
                static_cast<std::uint16_t>(std::lower_bound(cuts.begin(), cuts.end(), column[r]) - cuts.begin());
        }
    }
    return b;
}

class TreeBuilder {
public:
    TreeBuilder(const Binning &bins, const ClassifierConfig &config, const std::vector<double> &grad,
                const std::vector<double> &hess)
        : bins_(bins), config_(config), grad_(grad), hess_(hess) {}

    GradientBoostedTrees::Tree build() {
        std::vector<std::uint32_t> rows(bins_.rows);
        std::iota(rows.begin(), rows.end(), 0u);
        tree_.clear();
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    std::int32_t grow(std::vector<std::uint32_t> &rows, std::size_t depth) {
        double g = 0.0, h = 0.0;
        for (auto r : rows) {
            g += grad_[r];
            h += hess_[r];
        }
        const auto id = static_cast<std::int32_t>(tree_.size());
        tree_.emplace_back();
        tree_[id].value = -g / (h + config_.lambda) * config_.learning_rate;
        if (depth >= config_.max_depth || h < 2.0 * config_.min_child_weight) return id;

        const double parent = g * g / (h + config_.lambda);
        double best_gain = 1e-6;
        std::int32_t best_feature = -1;
        std::size_t best_bin = 0;
        std::vector<double> hg, hh;
        for (std::size_t f = 0; f < bins_.thresholds.size(); ++f) {
            const std::size_t nb = bins_.thresholds[f].size() + 1;
            if (nb < 2) continue;
            hg.assign(nb, 0.0);
            hh.assign(nb, 0.0);
            for (auto r : rows) {
                const auto b = bins_.bin(r, f);
                hg[b] += grad_[r];
                hh[b] += hess_[r];
            }
            double gl = 0.0, hl = 0.0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                gl += hg[b];
                hl += hh[b];
                const double gr = g - gl, hr = h - hl;
                if (hl < config_.min_child_weight || hr < config_.min_child_weight) continue;
                const double gain =
                    0.5 * (gl * gl / (hl + config_.lambda) + gr * gr / (hr + config_.lambda) - parent);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<std::int32_t>(f);
                    best_bin = b;
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::uint32_t> left, right;
        for (auto r : rows) {
            (bins_.bin(r, static_cast<std::size_t>(best_feature)) <= best_bin ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        tree_[id].feature = best_feature;
        tree_[id].threshold = bins_.thresholds[static_cast<std::size_t>(best_feature)][best_bin];
        const auto l = grow(left, depth + 1);
        const auto r = grow(right, depth + 1);
        tree_[id].left = l;
        tree_[id].right = r;
        return id;
    }

    const Binning &bins_;
    const ClassifierConfig &config_;
    const std::vector<double> &grad_;
    const std::vector<double> &hess_;
    GradientBoostedTrees::Tree tree_;
};

double evaluate(const GradientBoostedTrees::Tree &tree, const FeatureMatrix &x, Eigen::Index row) {
    std::int32_t node = 0;
    while (tree[node].feature >= 0) {
        node = x(row, tree[node].feature) <= tree[node].threshold ? tree[node].left : tree[node].right;
    }
    return tree[node].value;
}

} // namespace

std::vector<std::uint32_t> Classifier::predict(const FeatureMatrix &x) const {
    const Eigen::MatrixXd proba = predict_proba(x);
    std::vector<std::uint32_t> out(static_cast<std::size_t>(proba.rows()));
    for (Eigen::Index r = 0; r < proba.rows(); ++r) {
        Eigen::Index best = 0;
        proba.row(r).maxCoeff(&best);
        out[static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(best);
    }
    return out;
}

void GradientBoostedTrees::fit(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) {
    check_training_set(x, y, classes);
    if (config_.max_bins < 2 || config_.max_bins > 65535) throw ValidationError("max_bins must lie in [2, 65535]");
    classes_ = classes;
    features_ = static_cast<std::size_t>(x.cols());
    const std::size_t n = y.size();
    const std::size_t outputs = classes == 2 ? 1 : classes;
    base_score_.assign(outputs, 0.0);
    trees_.clear();

    const Binning bins = make_bins(x, config_.max_bins);
    Eigen::MatrixXd margin = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(outputs));
    std::vector<double> grad(n), hess(n);
    for (std::size_t round = 0; round < config_.rounds; ++round) {
        Eigen::MatrixXd prob = margin;
        if (outputs == 1) {
            prob = prob.unaryExpr([](double z) { return sigmoid(z); });
        } else {
            softmax_rows(prob);
        }
        auto &round_trees = trees_.emplace_back();
        for (std::size_t k = 0; k < outputs; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            for (std::size_t i = 0; i < n; ++i) {
                const double p = prob(static_cast<Eigen::Index>(i), kk);
                const double target = outputs == 1 ? static_cast<double>(y[i] == 1) : static_cast<double>(y[i] == k);
                grad[i] = p - target;
                hess[i] = std::max(p * (1.0 - p), 1e-16);
            }
            round_trees.push_back(TreeBuilder(bins, config_, grad, hess).build());
            const auto &tree = round_trees.back();
            for (std::size_t i = 0; i < n; ++i) {
                margin(static_cast<Eigen::Index>(i), kk) += evaluate(tree, x, static_cast<Eigen::Index>(i));
            }
        }
    }
}

Eigen::MatrixXd GradientBoostedTrees::raw_scores(const FeatureMatrix &x) const {
    if (classes_ == 0) throw Error("classifier used before fit");
    if (static_cast<std::size_t>(x.cols()) != features_) throw ValidationError("feature count differs from training");
    const std::size_t outputs = classes_ == 2 ? 1 : classes_;
    Eigen::MatrixXd margin(x.rows(), static_cast<Eigen::Index>(outputs));
    for (std::size_t k = 0; k < outputs; ++k) margin.col(static_cast<Eigen::Index>(k)).setConstant(base_score_[k]);
    for (const auto &round_trees : trees_) {
        for (std::size_t k = 0; k < outputs; ++k) {
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                margin(r, static_cast<Eigen::Index>(k)) += evaluate(round_trees[k], x, r);
            }
        }
    }
    return margin;
}

Eigen::MatrixXd GradientBoostedTrees::predict_proba(const FeatureMatrix &x) const {
    Eigen::MatrixXd margin = raw_scores(x);
    if (classes_ == 2) {
        Eigen::MatrixXd out(x.rows(), 2);
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const double p = sigmoid(margin(r, 0));
            out(r, 0) = 1.0 - p;
            out(r, 1) = p;
        }
        return out;
    }
    softmax_rows(margin);
    return margin;
}

void LogisticRegression::fit(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) {
    check_training_set(x, y, classes);
    const auto n = x.rows();
    const auto f = x.cols();
    shift_ = x.colwise().mean();
    scale_ = ((x.rowwise() - shift_).array().square().colwise().sum() / static_cast<double>(n)).sqrt();
    for (Eigen::Index j = 0; j < f; ++j) {
        if (scale_(j) == 0.0) scale_(j) = 1.0;
    }
    const Eigen::MatrixXd z = (x.rowwise() - shift_).array().rowwise() / scale_.array();
    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(classes));
    for (Eigen::Index i = 0; i < n; ++i) onehot(i, y[static_cast<std::size_t>(i)]) = 1.0;

    weights_ = Eigen::MatrixXd::Zero(f, static_cast<Eigen::Index>(classes));
    bias_ = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(classes));
    // Standardised columns bound the curvature of the mean cross-entropy by (f + 1) / 2.
    const double step = 1.0 / (0.5 * static_cast<double>(f + 1) + config_.logistic_l2);
    for (std::size_t it = 0; it < config_.logistic_iterations; ++it) {
        Eigen::MatrixXd p = (z * weights_).rowwise() + bias_;
        softmax_rows(p);
        const Eigen::MatrixXd residual = (p - onehot) / static_cast<double>(n);
        weights_ -= step * (z.transpose() * residual + config_.logistic_l2 * weights_);
        bias_ -= step * residual.colwise().sum();
    }
}

Eigen::MatrixXd LogisticRegression::predict_proba(const FeatureMatrix &x) const {
    if (weights_.size() == 0) throw Error("classifier used before fit");
    if (x.cols() != weights_.rows()) throw ValidationError("feature count differs from training");
    const Eigen::MatrixXd z = (x.rowwise() - shift_).array().rowwise() / scale_.array();
    Eigen::MatrixXd p = (z * weights_).rowwise() + bias_;
    softmax_rows(p);
    return p;
}

std::unique_ptr<Classifier> make_classifier(const ClassifierConfig &config) {
    if (config.kind == ClassifierKind::logistic) return std::make_unique<LogisticRegression>(config);
    return std::make_unique<GradientBoostedTrees>(config);
}

double accuracy(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth) {
    if (predicted.size() != truth.size()) throw ValidationError("prediction and truth sizes differ");
    if (truth.empty()) throw ValidationError("accuracy over zero samples");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

} // namespace sinr
