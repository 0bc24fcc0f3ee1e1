#pragma once

// Markov-Dobrushin overlap coefficients and the classical geometric bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/error.hpp"

namespace mixcert {

/// Overlap sum_j min(p_ij, p_kj) of rows i and k; exactly 1 when i == k.
inline double kappa_pair(const TransitionMatrix& p, std::size_t i, std::size_t k) {
    const std::size_t n = p.size();
    if (i >= n) throw IndexOutOfRange(i, n);
    if (k >= n) throw IndexOutOfRange(k, n);
    if (i == k) return 1.0;
    double overlap = 0.0;
    for (std::size_t j = 0; j < n; ++j) overlap += std::min(p(i, j), p(k, j));
    return std::clamp(overlap, 0.0, 1.0);
}

/// Pairwise overlaps and their minimum over distinct pairs.
class KappaTable {
public:
    explicit KappaTable(const TransitionMatrix& p)
        : pairwise_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p.size()),
                                              static_cast<Eigen::Index>(p.size()))),
          global_(1.0) {
        const std::size_t n = p.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = i + 1; k < n; ++k) {
                // one evaluation per unordered pair, mirrored
                const double v = kappa_pair(p, i, k);
                pairwise_(i, k) = v;
                pairwise_(k, i) = v;
                global_ = std::min(global_, v);
            }
        }
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(pairwise_.rows()); }
    double operator()(std::size_t i, std::size_t k) const { return pairwise_(i, k); }
    const Eigen::MatrixXd& pairwise() const noexcept { return pairwise_; }
    double global() const noexcept { return global_; }

private:
    Eigen::MatrixXd pairwise_;
    double global_;
};

inline KappaTable kappa_table(const TransitionMatrix& p) { return KappaTable(p); }

/// Table of P^k; k = 1 reduces to kappa_table.
inline KappaTable kappa_table_kstep(const TransitionMatrix& p, unsigned k) {
    if (k < 1) throw ParameterOutOfRange("k-step coefficient needs k >= 1");
    return KappaTable(matrix_power(p, k));
}

/// Overlap of two initial laws; equals 1 - tv_distance(mu1, mu2).
inline double kappa_initial(const Distribution& mu1, const Distribution& mu2) {
    if (mu1.size() != mu2.size()) throw DimensionMismatch(mu1.size(), mu2.size());
    return std::clamp(mu1.weights().cwiseMin(mu2.weights()).sum(), 0.0, 1.0);
}

/// (1 - kappa)^n for n = 0..n_max, sup-over-events convention.
inline std::vector<double> md_bound_series(double kappa, unsigned n_max) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw ParameterOutOfRange("kappa must lie in [0,1]");
    std::vector<double> series(n_max + 1);
    double term = 1.0;
    for (unsigned n = 0; n <= n_max; ++n) {
        series[n] = term;
        term *= 1.0 - kappa;
    }
    return series;
}

/// 2 (1 - kappa_k)^floor(n/k) (1 - kappa)^(n - k floor(n/k)), L1 convention.
inline double md_bound_kstep(double kappa_k, unsigned k, double kappa, unsigned n) {
    if (k < 1) throw ParameterOutOfRange("k-step bound needs k >= 1");
    if (!(kappa_k >= 0.0 && kappa_k <= 1.0 && kappa >= 0.0 && kappa <= 1.0)) {
        throw ParameterOutOfRange("coefficients must lie in [0,1]");
    }
    const unsigned blocks = n / k;
    const unsigned rest = n - k * blocks;
    return 2.0 * std::pow(1.0 - kappa_k, blocks) * std::pow(1.0 - kappa, rest);
}

}  // namespace mixcert
