#include "stoconv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace stoconv {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct ColumnMoment {
    double mean = 0.0;
    double sd = 0.0;
};

ColumnMoment powered_moment(const Eigen::MatrixXd& norms, Eigen::Index col, double p)
{
    const Eigen::Index rows = norms.rows();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        sum += std::pow(norms(i, col), p);
    }
    const double mean = sum / static_cast<double>(rows);
    if (rows < 2) {
        return {mean, nan};
    }
    double ss = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double d = std::pow(norms(i, col), p) - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(rows - 1))};
}

// (m)^{1/p} and its delta-method standard error.
std::pair<double, double> root_with_error(const ColumnMoment& m, double p, std::size_t rows)
{
    const double value = std::pow(m.mean, 1.0 / p);
    if (std::isnan(m.sd)) {
        return {value, nan};
    }
    if (m.mean == 0.0) {
        return {value, 0.0};
    }
    const double se_mean = m.sd / std::sqrt(static_cast<double>(rows));
    return {value, std::pow(m.mean, 1.0 / p - 1.0) / p * se_mean};
}

void require_batch(std::span<const CoupledTrajectory> batch)
{
    if (batch.empty()) {
        throw std::invalid_argument("estimator needs a nonempty batch of trajectories");
    }
    const std::size_t nodes = batch.front().times.size();
    for (const auto& path : batch) {
        if (path.times.size() != nodes) {
            throw std::invalid_argument("trajectories in a batch must share one grid");
        }
    }
}

Eigen::MatrixXd node_matrix(std::span<const CoupledTrajectory> batch,
                            const std::function<double(const CoupledTrajectory&, std::size_t)>& f)
{
    require_batch(batch);
    const auto nodes = static_cast<Eigen::Index>(batch.front().times.size());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(batch.size()), nodes);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (Eigen::Index k = 0; k < nodes; ++k) {
            out(static_cast<Eigen::Index>(i), k) = f(batch[i], static_cast<std::size_t>(k));
        }
    }
    return out;
}

} // namespace

McEstimate sup_node_lp(const Eigen::MatrixXd& norms, double p)
{
    if (norms.rows() == 0 || norms.cols() == 0) {
        throw std::invalid_argument("empty sample matrix");
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument("moment order p must be at least 1");
    }
    const auto rows = static_cast<std::size_t>(norms.rows());
    McEstimate best;
    best.replications = rows;
    best.value = -1.0;
    for (Eigen::Index c = 0; c < norms.cols(); ++c) {
        const auto [value, se] = root_with_error(powered_moment(norms, c, p), p, rows);
        if (value > best.value) {
            best.value = value;
            best.std_error = se;
        }
    }
    return best;
}

ExpMomentEstimate sup_node_exp_mean(const Eigen::MatrixXd& exponents)
{
    if (exponents.rows() == 0 || exponents.cols() == 0) {
        throw std::invalid_argument("empty sample matrix");
    }
    const Eigen::Index rows = exponents.rows();
    ExpMomentEstimate best;
    best.estimate.replications = static_cast<std::size_t>(rows);
    best.estimate.value = -1.0;
    const auto top = static_cast<std::size_t>(std::ceil(0.001 * static_cast<double>(rows)));

    std::vector<double> scaled(static_cast<std::size_t>(rows));
    for (Eigen::Index c = 0; c < exponents.cols(); ++c) {
        const double shift = exponents.col(c).maxCoeff();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            scaled[static_cast<std::size_t>(i)] = std::exp(exponents(i, c) - shift);
            sum += scaled[static_cast<std::size_t>(i)];
        }
        const double mean_scaled = sum / static_cast<double>(rows);
        double se = nan;
        if (rows >= 2) {
            double ss = 0.0;
            for (double v : scaled) {
                ss += (v - mean_scaled) * (v - mean_scaled);
            }
            se = std::exp(shift) * std::sqrt(ss / static_cast<double>(rows - 1)) /
                 std::sqrt(static_cast<double>(rows));
        }
        const double value = std::exp(shift) * mean_scaled;
        if (value > best.estimate.value) {
            best.estimate.value = value;
            best.estimate.std_error = se;
            std::vector<double> sorted = scaled;
            std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(top - 1),
                             sorted.end(), std::greater<>());
            double top_sum = 0.0;
            for (std::size_t k = 0; k < top; ++k) {
                top_sum += sorted[k];
            }
            best.heavy_tail = top_sum > 0.5 * sum;
        }
    }
    return best;
}

McEstimate max_holder_quotient(const Eigen::MatrixXd& norms, std::span<const double> gaps,
                               double p, double rho)
{
    if (norms.rows() == 0 || norms.cols() == 0) {
        throw std::invalid_argument("empty sample matrix");
    }
    if (static_cast<std::size_t>(norms.cols()) != gaps.size()) {
        throw std::invalid_argument("one time gap per node pair is required");
    }
    const auto rows = static_cast<std::size_t>(norms.rows());
    McEstimate best;
    best.replications = rows;
    best.value = -1.0;
    for (Eigen::Index c = 0; c < norms.cols(); ++c) {
        const double gap = gaps[static_cast<std::size_t>(c)];
        if (!(gap > 0.0)) {
            throw std::invalid_argument("node pairs need s < t");
        }
        const double scale = std::pow(gap, rho);
        const auto [value, se] = root_with_error(powered_moment(norms, c, p), p, rows);
        if (value / scale > best.value) {
            best.value = value / scale;
            best.std_error = se / scale;
        }
    }
    return best;
}

McEstimate lp_error_sup(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                        double p, double gamma)
{
    const Eigen::MatrixXd norms = node_matrix(batch, [&](const CoupledTrajectory& path,
                                                         std::size_t k) {
        return fractional_norm(op, gamma, path.scheme[k] - path.exact[k]);
    });
    return sup_node_lp(norms, p);
}

McEstimate empirical_moment(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                            double p, double gamma)
{
    const Eigen::MatrixXd norms = node_matrix(batch, [&](const CoupledTrajectory& path,
                                                         std::size_t k) {
        return fractional_norm(op, gamma, path.scheme[k]);
    });
    return sup_node_lp(norms, p);
}

ExpMomentEstimate empirical_exp_moment(std::span<const CoupledTrajectory> batch, double eps)
{
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("exponential moment needs eps >= 0");
    }
    const Eigen::MatrixXd exponents = node_matrix(batch, [&](const CoupledTrajectory& path,
                                                             std::size_t k) {
        return eps * path.scheme[k].squaredNorm();
    });
    return sup_node_exp_mean(exponents);
}

McEstimate holder_quotient(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                           double p, double gamma, double rho,
                           std::span<const std::pair<std::size_t, std::size_t>> node_pairs)
{
    require_batch(batch);
    if (node_pairs.empty()) {
        throw std::invalid_argument("no node pairs supplied");
    }
    const auto& times = batch.front().times;
    std::vector<double> gaps;
    for (const auto& [s, t] : node_pairs) {
        if (s >= t || t >= times.size()) {
            throw std::invalid_argument("node pairs must satisfy s < t within the grid");
        }
        gaps.push_back(times[t] - times[s]);
    }
    Eigen::MatrixXd norms(static_cast<Eigen::Index>(batch.size()),
                          static_cast<Eigen::Index>(node_pairs.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (std::size_t k = 0; k < node_pairs.size(); ++k) {
            const auto [s, t] = node_pairs[k];
            norms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                fractional_norm(op, gamma, batch[i].scheme[t] - batch[i].scheme[s]);
        }
    }
    return max_holder_quotient(norms, gaps, p, rho);
}

RateFit fit_rate(std::vector<std::pair<double, double>> points)
{
    if (points.size() < 3) {
        throw std::invalid_argument("rate fit needs at least three points");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) {
            throw std::invalid_argument("rate fit needs positive scales and errors");
        }
        if (i > 0 && points[i].first == points[i - 1].first) {
            throw std::invalid_argument("rate fit scales must be strictly monotone");
        }
    }
    const bool increasing = points[1].first > points[0].first;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if ((points[i].first > points[i - 1].first) != increasing) {
            throw std::invalid_argument("rate fit scales must be strictly monotone");
        }
    }
    const auto n = static_cast<double>(points.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [s, e] : points) {
        sx += std::log(s);
        sy += std::log(e);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& [s, e] : points) {
        const double dx = std::log(s) - mx;
        const double dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.points = std::move(points);
    return fit;
}

} // namespace stoconv
