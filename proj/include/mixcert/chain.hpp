#pragma once

// Exact finite-chain primitives: validated transition matrices and
// distributions, matrix powers, propagation, the stationary law and total
// variation distance. Everything here is a pure function of its inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/error.hpp"

namespace mixcert {

/// Row-sum tolerance applied to user input.
inline constexpr double kRowSumTolerance = 1e-12;
/// Tolerance for matrices and laws derived by arithmetic (powers, propagation).
inline constexpr double kDerivedTolerance = 1e-10;

/// Finite row-stochastic matrix. Rows are transition laws; entries are never
/// renormalized, so a value that exists has passed validation.
class TransitionMatrix {
public:
    /// Checks square shape, n >= 2, nonnegativity and |row sum - 1| <= tolerance.
    static TransitionMatrix validated(Eigen::MatrixXd raw, double tolerance = kRowSumTolerance) {
        if (raw.rows() != raw.cols()) {
            throw NotSquare("matrix is " + std::to_string(raw.rows()) + "x" +
                            std::to_string(raw.cols()));
        }
        if (raw.rows() < 2) {
            throw NotSquare("a chain needs at least 2 states, got " + std::to_string(raw.rows()));
        }
        const auto n = static_cast<std::size_t>(raw.rows());
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double v = raw(i, j);
                if (!(v >= 0.0)) throw NegativeEntry(i, j);
                sum += v;
            }
            if (!(std::abs(sum - 1.0) <= tolerance)) throw RowSumError(i, sum);
        }
        return TransitionMatrix(std::move(raw));
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    auto row(std::size_t i) const { return m_.row(static_cast<Eigen::Index>(i)); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    static TransitionMatrix identity(std::size_t n) {
        return validated(Eigen::MatrixXd::Identity(n, n));
    }

private:
    explicit TransitionMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}

    Eigen::MatrixXd m_;
};

/// Probability vector over states, row-vector convention for propagation.
class Distribution {
public:
    static Distribution validated(Eigen::VectorXd weights, double tolerance = kRowSumTolerance) {
        if (weights.size() < 1) throw ParameterOutOfRange("empty distribution");
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            if (!(weights[i] >= 0.0)) {
                throw ParameterOutOfRange("negative weight at state " + std::to_string(i));
            }
        }
        const double sum = weights.sum();
        if (!(std::abs(sum - 1.0) <= tolerance)) {
            throw ParameterOutOfRange("weights sum to " + std::to_string(sum));
        }
        return Distribution(std::move(weights));
    }

    static Distribution validated(const std::vector<double>& weights,
                                  double tolerance = kRowSumTolerance) {
        return validated(Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                           static_cast<Eigen::Index>(weights.size())),
                         tolerance);
    }

    static Distribution point_mass(std::size_t n, std::size_t i) {
        if (i >= n) throw IndexOutOfRange(i, n);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        w[static_cast<Eigen::Index>(i)] = 1.0;
        return Distribution(std::move(w));
    }

    static Distribution uniform(std::size_t n) {
        return Distribution(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                                      1.0 / static_cast<double>(n)));
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
    double operator[](std::size_t i) const { return w_[static_cast<Eigen::Index>(i)]; }
    const Eigen::VectorXd& weights() const noexcept { return w_; }

private:
    explicit Distribution(Eigen::VectorXd w) : w_(std::move(w)) {}

    Eigen::VectorXd w_;
};

inline TransitionMatrix validate_matrix(const Eigen::MatrixXd& raw) {
    return TransitionMatrix::validated(raw);
}

inline TransitionMatrix validate_matrix(const std::vector<std::vector<double>>& raw) {
    const auto n = raw.size();
    for (const auto& r : raw) {
        if (r.size() != n) throw NotSquare("ragged or non-square input");
    }
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = raw[i][j];
    }
    return TransitionMatrix::validated(std::move(m));
}

inline TransitionMatrix validate_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> raw;
    for (const auto& r : rows) raw.emplace_back(r);
    return validate_matrix(raw);
}

/// P^k by binary exponentiation; P^0 is the identity.
inline TransitionMatrix matrix_power(const TransitionMatrix& p, unsigned k) {
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd base = p.matrix();
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return TransitionMatrix::validated(std::move(result), kDerivedTolerance);
}

/// mu0 P^k.
inline Distribution propagate(const Distribution& mu0, const TransitionMatrix& p, unsigned k) {
    if (mu0.size() != p.size()) throw DimensionMismatch(p.size(), mu0.size());
    Eigen::RowVectorXd mu = mu0.weights().transpose();
    for (unsigned step = 0; step < k; ++step) mu = mu * p.matrix();
    return Distribution::validated(Eigen::VectorXd(mu.transpose()), kDerivedTolerance);
}

/// sup_A |mu(A) - nu(A)| = half the L1 distance.
inline double tv_distance(const Distribution& mu, const Distribution& nu) {
    if (mu.size() != nu.size()) throw DimensionMismatch(mu.size(), nu.size());
    const double d = 0.5 * (mu.weights() - nu.weights()).cwiseAbs().sum();
    return std::clamp(d, 0.0, 1.0);
}

/// TV distance between rows i and k of a row-stochastic matrix.
inline double row_tv_distance(const Eigen::MatrixXd& m, std::size_t i, std::size_t k) {
    const double d = 0.5 * (m.row(static_cast<Eigen::Index>(i)) -
                            m.row(static_cast<Eigen::Index>(k)))
                               .cwiseAbs()
                               .sum();
    return std::clamp(d, 0.0, 1.0);
}

namespace detail {

// Period of the (assumed unique) closed communicating class of the support
// graph, computed from BFS levels: gcd over in-class edges u->v of
// level(u) + 1 - level(v).
inline std::size_t closed_class_period(const TransitionMatrix& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) > 0.0) reach[i][j] = 1;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = 1;
            }
        }
    }
    std::size_t root = n;
    for (std::size_t i = 0; i < n && root == n; ++i) {
        bool closed = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j] && !reach[j][i]) {
                closed = false;
                break;
            }
        }
        if (closed) root = i;
    }
    if (root == n) return 1;  // unreachable for a stochastic matrix

    std::vector<long> level(n, -1);
    std::queue<std::size_t> frontier;
    level[root] = 0;
    frontier.push(root);
    long g = 0;
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v = 0; v < n; ++v) {
            if (!(p(u, v) > 0.0)) continue;
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                frontier.push(v);
            } else {
                g = std::gcd(g, std::labs(level[u] + 1 - level[v]));
            }
        }
    }
    return g == 0 ? 1 : static_cast<std::size_t>(g);
}

}  // namespace detail

/// Unique invariant law of an irreducible aperiodic chain (transient states
/// allowed). Solves (P^T - I) pi = 0 with one equation replaced by sum(pi) = 1.
inline Distribution stationary(const TransitionMatrix& p) {
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd a = p.matrix().transpose() - Eigen::MatrixXd::Identity(n, n);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double second_smallest = svd.singularValues()[n - 2];
    if (second_smallest < 1e-9) {
        throw NotUniquelyErgodic("invariant measures form a space of dimension > 1");
    }
    if (const auto period = detail::closed_class_period(p); period > 1) {
        throw NotUniquelyErgodic("recurrent class has period " + std::to_string(period));
    }

    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[n - 1] = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (pi[i] < 0.0) {
            if (pi[i] < -kDerivedTolerance) {
                throw NotUniquelyErgodic("solver produced a negative weight");
            }
            pi[i] = 0.0;
        }
    }
    pi /= pi.sum();

    const double residual = (pi.transpose() * p.matrix() - pi.transpose()).cwiseAbs().sum();
    if (!(residual <= kDerivedTolerance)) {
        throw NotUniquelyErgodic("fixed-point residual " + std::to_string(residual));
    }
    return Distribution::validated(std::move(pi), kDerivedTolerance);
}

}  // namespace mixcert
