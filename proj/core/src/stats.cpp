#include "sinr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sinr/error.hpp"

namespace sinr {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size()));
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation of series with different lengths");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation of series with different lengths");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double r_squared(std::span<const double> truth, std::span<const double> predicted) {
    if (truth.size() != predicted.size()) throw ValidationError("R2 of series with different lengths");
    const double m = mean(truth);
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_tot += (truth[i] - m) * (truth[i] - m);
        ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
    }
    if (ss_tot == 0.0) return 0.0;
    return 1.0 - ss_res / ss_tot;
}

Eigen::VectorXd LinearModel::predict(const Eigen::MatrixXd &x) const {
    return (x * coefficients).array() + intercept;
}

LinearModel fit_least_squares(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, double ridge_penalty) {
    if (x.rows() != y.size()) throw ValidationError("design and target sizes differ");
    if (x.rows() == 0) throw ValidationError("cannot fit a model on zero samples");
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;

    LinearModel model;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
    if (qr.rank() == xc.cols()) {
        model.coefficients = qr.solve(yc);
    } else {
        Eigen::MatrixXd gram = xc.transpose() * xc;
        gram.diagonal().array() += ridge_penalty;
        model.coefficients = gram.ldlt().solve(xc.transpose() * yc);
        model.ridge = true;
    }
    model.intercept = y_mean - x_mean.dot(model.coefficients);
    return model;
}

} // namespace sinr
