#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sinr {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ClassifierKind { gradient_boosting, logistic };

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::gradient_boosting;
    // gradient-boosted trees
    std::size_t rounds = 100;
    std::size_t max_depth = 6;
    double learning_rate = 0.3;
    double lambda = 1.0;           ///< L2 penalty on leaf weights
    double min_child_weight = 1.0; ///< minimum hessian mass per child
    std::size_t max_bins = 256;
    // logistic regression
    std::size_t logistic_iterations = 500;
    double logistic_l2 = 1e-4;
};

/// Multiclass classifier over dense features; labels are 0..classes-1.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) = 0;
    /// Row-wise class probabilities (rows x classes).
    virtual Eigen::MatrixXd predict_proba(const FeatureMatrix &x) const = 0;
    std::vector<std::uint32_t> predict(const FeatureMatrix &x) const;
};

/**
 * Second-order gradient boosting of depth-limited regression trees on
 * histogram-binned features: logistic loss for two classes, softmax with one
 * tree per class and round otherwise. Split gain and leaf weights follow the
 * usual G^2 / (H + lambda) scoring.
 */
class GradientBoostedTrees : public Classifier {
public:
    explicit GradientBoostedTrees(const ClassifierConfig &config = {}) : config_(config) {}
    void fit(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) override;
    Eigen::MatrixXd predict_proba(const FeatureMatrix &x) const override;

    struct Node {
        std::int32_t feature = -1; ///< -1 marks a leaf
        double threshold = 0.0;    ///< go left when x <= threshold
        std::int32_t left = -1, right = -1;
        double value = 0.0;
    };
    using Tree = std::vector<Node>;

private:
    Eigen::MatrixXd raw_scores(const FeatureMatrix &x) const;

    ClassifierConfig config_;
    std::size_t classes_ = 0;
    std::size_t features_ = 0;
    std::vector<double> base_score_;
    std::vector<std::vector<Tree>> trees_; ///< [round][output]
};

/// Multinomial logistic regression on standardised features, full-batch
/// gradient descent with an L2 penalty.
class LogisticRegression : public Classifier {
public:
    explicit LogisticRegression(const ClassifierConfig &config = {}) : config_(config) {}
    void fit(const FeatureMatrix &x, std::span<const std::uint32_t> y, std::size_t classes) override;
    Eigen::MatrixXd predict_proba(const FeatureMatrix &x) const override;

private:
    ClassifierConfig config_;
    Eigen::RowVectorXd shift_, scale_;
    Eigen::MatrixXd weights_; ///< features x classes
    Eigen::RowVectorXd bias_;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierConfig &config);

double accuracy(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth);

} // namespace sinr
