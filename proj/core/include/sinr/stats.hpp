#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sinr {

double mean(std::span<const double> x);
/// Population standard deviation; 0 for fewer than two values.
double stddev(std::span<const double> x);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation; 0 when either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// 1 - SS_res / SS_tot. Returns 0 when the truth has zero variance.
double r_squared(std::span<const double> truth, std::span<const double> predicted);

struct LinearModel {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    bool ridge = false; ///< true when the design was rank deficient

    double predict(const Eigen::Ref<const Eigen::RowVectorXd> &x) const { return x.dot(coefficients) + intercept; }
    Eigen::VectorXd predict(const Eigen::MatrixXd &x) const;
};

/**
 * Ordinary least squares with an intercept. If the centred design is rank
 * deficient, solves the ridge system with penalty `ridge_penalty` instead and
 * sets `ridge`.
 */
LinearModel fit_least_squares(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, double ridge_penalty = 1e-8);

} // namespace sinr
