#include <gtest/gtest.h>

#include <random>

#include "sinr/classifier.hpp"
#include "sinr/clustering.hpp"
#include "sinr/error.hpp"
#include "sinr/stats.hpp"

using namespace sinr;

TEST(Stats, RanksAverageTies) {
    const std::vector<double> x{10, 20, 20, 5};
    EXPECT_EQ(average_ranks(x), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Stats, PearsonAndSpearmanBasics) {
    const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10}, z{5, 4, 3, 2, 1}, c{1, 1, 1, 1, 1};
    EXPECT_NEAR(pearson(x, y), 1.0, 1e-12);
    EXPECT_NEAR(spearman(x, z), -1.0, 1e-12);
    EXPECT_EQ(pearson(x, c), 0.0);
    EXPECT_NEAR(stddev(x), std::sqrt(2.0), 1e-12);
}

TEST(Stats, SpearmanInvariantUnderMonotoneTransforms) {
    std::mt19937_64 rng(50);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(40), y(40), fx(40), gy(40);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::round(noise(rng) * 4.0) / 4.0; // creates ties
            y[i] = x[i] + noise(rng);
            fx[i] = std::exp(x[i]) + 3.0;
            gy[i] = y[i] * y[i] * y[i];
        }
        const double s = spearman(x, y);
        EXPECT_NEAR(spearman(fx, gy), s, 1e-12);
        EXPECT_NEAR(spearman(y, x), s, 1e-12);
        EXPECT_LE(std::abs(s), 1.0 + 1e-12);
    }
}

TEST(LeastSquares, MatchesNormalEquations) {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd x(100, 4);
    Eigen::VectorXd y(100);
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 4; ++j) x(i, j) = noise(rng);
        y(i) = 3.0 + x.row(i).dot(Eigen::Vector4d(1, -2, 0.5, 0)) + 0.1 * noise(rng);
    }
    Eigen::MatrixXd design(100, 5);
    design << Eigen::VectorXd::Ones(100), x;
    const Eigen::VectorXd beta = (design.transpose() * design).ldlt().solve(design.transpose() * y);
    const auto model = fit_least_squares(x, y);
    EXPECT_FALSE(model.ridge);
    EXPECT_NEAR(model.intercept, beta(0), 1e-9);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(model.coefficients(j), beta(j + 1), 1e-9);
}

TEST(LeastSquares, RankDeficientDesignFallsBackToRidge) {
    // Rows sum to one, so the columns are collinear with the intercept.
    Eigen::MatrixXd x(50, 3);
    Eigen::VectorXd y(50);
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double a = u(rng), b = u(rng) * (1 - a);
        x.row(i) << a, b, 1 - a - b;
        y(i) = 2 * a - b;
    }
    const auto model = fit_least_squares(x, y);
    EXPECT_TRUE(model.ridge);
    const Eigen::VectorXd pred = model.predict(x);
    EXPECT_NEAR(r_squared(std::vector<double>(y.data(), y.data() + 50),
                          std::vector<double>(pred.data(), pred.data() + 50)),
                1.0, 1e-6);
}

namespace {

// Gaussian blobs around the corners of a simplex.
void blobs(std::mt19937_64 &rng, std::size_t per_class, std::size_t classes, double spread, FeatureMatrix &x,
           std::vector<std::uint32_t> &y) {
    std::normal_distribution<double> noise(0.0, spread);
    x.resize(static_cast<Eigen::Index>(per_class * classes), static_cast<Eigen::Index>(classes));
    y.clear();
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const auto row = static_cast<Eigen::Index>(y.size());
            for (std::size_t d = 0; d < classes; ++d) x(row, static_cast<Eigen::Index>(d)) = (d == c) + noise(rng);
            y.push_back(static_cast<std::uint32_t>(c));
        }
    }
}

} // namespace

TEST(Classifier, BothKindsSeparateBlobs) {
    std::mt19937_64 rng(53);
    FeatureMatrix x, xt;
    std::vector<std::uint32_t> y, yt;
    blobs(rng, 60, 3, 0.15, x, y);
    blobs(rng, 30, 3, 0.15, xt, yt);
    for (auto kind : {ClassifierKind::gradient_boosting, ClassifierKind::logistic}) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        auto clf = make_classifier(cfg);
        clf->fit(x, y, 3);
        EXPECT_GE(accuracy(clf->predict(xt), yt), 0.97);
        const Eigen::MatrixXd proba = clf->predict_proba(xt);
        for (Eigen::Index i = 0; i < proba.rows(); ++i) EXPECT_NEAR(proba.row(i).sum(), 1.0, 1e-9);
    }
}

TEST(Classifier, BoostedTreesLearnXor) {
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FeatureMatrix x(400, 2);
    std::vector<std::uint32_t> y(400);
    for (int i = 0; i < 400; ++i) {
        x(i, 0) = u(rng);
        x(i, 1) = u(rng);
        y[static_cast<std::size_t>(i)] = (x(i, 0) > 0) != (x(i, 1) > 0);
    }
    GradientBoostedTrees gbdt;
    gbdt.fit(x, y, 2);
    EXPECT_GE(accuracy(gbdt.predict(x), y), 0.97);
}

TEST(Clustering, KMeansRecoversBlobsAndPurityIsOne) {
    std::mt19937_64 rng(55);
    FeatureMatrix x;
    std::vector<std::uint32_t> y;
    blobs(rng, 40, 4, 0.05, x, y);
    const Eigen::MatrixXd points = x;
    KMeansConfig cfg;
    cfg.seed = 1;
    EXPECT_DOUBLE_EQ(purity(kmeans(points, 4, cfg).labels, y), 1.0);
    EXPECT_DOUBLE_EQ(purity(agglomerative_average_cosine(points, 4), y), 1.0);
}

TEST(Clustering, PurityCountsMajorityCategory) {
    const std::vector<std::uint32_t> clusters{0, 0, 0, 1, 1}, truth{0, 0, 1, 1, 0};
    EXPECT_DOUBLE_EQ(purity(clusters, truth), 3.0 / 5.0);
}

TEST(Clustering, SpectralSeparatesDisjointSupports) {
    std::vector<SparseRow> rows;
    std::vector<std::uint32_t> truth;
    std::mt19937_64 rng(56);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (std::uint32_t c = 0; c < 3; ++c) {
        for (int i = 0; i < 20; ++i) {
            rows.push_back({{2 * c, u(rng)}, {2 * c + 1, u(rng)}});
            truth.push_back(c);
        }
    }
    const SparseEmbedding e(6, rows);
    EXPECT_DOUBLE_EQ(purity(spectral_clustering(e, 3, 7), truth), 1.0);
}
