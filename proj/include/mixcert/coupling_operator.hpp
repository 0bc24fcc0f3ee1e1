#pragma once

// The not-yet-coupled pair process and its weighted kernel V.
//
// For an ordered pair (i, k), i != k, the two copies move by the residual
// kernels of rows i and k and fail to couple with probability 1 - kappa(i, k).
// V[(i,k),(j,l)] = (1 - kappa(i,k)) * phi1(j) * phi2(l), so (V^n 1)(i,k) is
// the probability that the copies started at (i, k) are still apart after n
// steps, and it dominates the TV distance between rows i and k of P^n.

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/error.hpp"

namespace mixcert {

/// Ordered off-diagonal pairs (i, k), i != k, indexed row-major:
/// (0,1), (0,2), ..., (1,0), (1,2), ...
class PairSpace {
public:
    explicit PairSpace(std::size_t n) : n_(n) {
        if (n < 2) throw ParameterOutOfRange("pair space needs at least 2 states");
    }

    std::size_t base_size() const noexcept { return n_; }
    std::size_t size() const noexcept { return n_ * (n_ - 1); }

    std::size_t to_index(std::size_t i, std::size_t k) const {
        if (i >= n_) throw IndexOutOfRange(i, n_);
        if (k >= n_) throw IndexOutOfRange(k, n_);
        if (i == k) throw DiagonalPair(i);
        return i * (n_ - 1) + (k < i ? k : k - 1);
    }

    std::pair<std::size_t, std::size_t> from_index(std::size_t t) const {
        if (t >= size()) throw IndexOutOfRange(t, size());
        const std::size_t i = t / (n_ - 1);
        const std::size_t r = t % (n_ - 1);
        return {i, r < i ? r : r + 1};
    }

private:
    std::size_t n_;
};

struct ResidualKernels {
    Distribution first;
    Distribution second;
};

/// Normalized residuals (p_i - p_i ^ p_k)/(1 - kappa) and (p_k - p_i ^ p_k)/(1 - kappa).
/// kappa = 1 falls back to phi1 = phi2 = p_i; kappa = 0 leaves the rows as they are.
inline ResidualKernels residual_kernels(const TransitionMatrix& p, std::size_t i, std::size_t k) {
    const std::size_t n = p.size();
    if (i >= n) throw IndexOutOfRange(i, n);
    if (k >= n) throw IndexOutOfRange(k, n);
    if (i == k) throw DiagonalPair(i);

    const Eigen::VectorXd pi = p.row(i).transpose();
    const Eigen::VectorXd pk = p.row(k).transpose();
    const Eigen::VectorXd overlap = pi.cwiseMin(pk);
    const Eigen::VectorXd r1 = pi - overlap;
    const Eigen::VectorXd r2 = pk - overlap;

    const double kappa = kappa_pair(p, i, k);
    // An all-zero residual means the rows coincide up to rounding.
    if (kappa >= 1.0 || r1.isZero(0.0) || r2.isZero(0.0)) {
        return {Distribution::validated(pi), Distribution::validated(pi)};
    }
    // Each residual carries mass 1 - kappa; dividing by its own sum keeps the
    // result a probability vector when the rows differ only in the last bits.
    return {Distribution::validated(Eigen::VectorXd(r1 / r1.sum())),
            Distribution::validated(Eigen::VectorXd(r2 / r2.sum()))};
}

enum class CouplingMode {
    /// Residual-product kernel of the maximal coupling. Canonical.
    LemmaResidual,
    /// Independent product of the original rows, conditioned off the diagonal.
    AppendixProduct,
};

inline std::string_view to_string(CouplingMode mode) {
    return mode == CouplingMode::LemmaResidual ? "lemma" : "appendix";
}

struct CouplingOperator {
    PairSpace space;
    Eigen::MatrixXd entries;
    CouplingMode mode;
    /// 1 - kappa(pair), indexed like `space`.
    Eigen::VectorXd row_weights;

    std::size_t size() const noexcept { return space.size(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& h) const { return entries * h; }
};

inline CouplingOperator build_V(const TransitionMatrix& p, CouplingMode mode) {
    const std::size_t n = p.size();
    const PairSpace space(n);
    const auto m = static_cast<Eigen::Index>(space.size());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd weights(m);
    const KappaTable kappa(p);

    for (std::size_t row = 0; row < space.size(); ++row) {
        const auto [i, k] = space.from_index(row);
        const double w = 1.0 - kappa(i, k);
        weights[static_cast<Eigen::Index>(row)] = w;

        if (mode == CouplingMode::LemmaResidual) {
            const auto phi = residual_kernels(p, i, k);
            for (std::size_t col = 0; col < space.size(); ++col) {
                const auto [j, l] = space.from_index(col);
                v(row, col) = w * phi.first[j] * phi.second[l];
            }
        } else {
            double off_diagonal = 0.0;
            for (std::size_t col = 0; col < space.size(); ++col) {
                const auto [j, l] = space.from_index(col);
                off_diagonal += p(i, j) * p(k, l);
            }
            if (off_diagonal <= 0.0) continue;  // both rows are the same point mass
            for (std::size_t col = 0; col < space.size(); ++col) {
                const auto [j, l] = space.from_index(col);
                v(row, col) = w * p(i, j) * p(k, l) / off_diagonal;
            }
        }
    }
    return CouplingOperator{space, std::move(v), mode, std::move(weights)};
}

/// V^n 1 for n = 0..n_max, one vector per n.
inline std::vector<Eigen::VectorXd> v_power_ones_series(const CouplingOperator& v, unsigned n_max) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(n_max + 1);
    out.push_back(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(v.size())));
    for (unsigned n = 1; n <= n_max; ++n) out.push_back(v.apply(out.back()));
    return out;
}

/// max over pairs of (V^n 1), the sup-norm of V^n for nonnegative V.
inline double v_power_onenorm(const CouplingOperator& v, unsigned n) {
    Eigen::VectorXd h = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(v.size()));
    for (unsigned step = 0; step < n; ++step) h = v.apply(h);
    return h.maxCoeff();
}

/// (1 - kappa0) * sum over off-diagonal pairs of nu1(i) nu2(k) (V^n 1)(i,k).
inline std::vector<double> coupling_bound_series(const CouplingOperator& v, const Distribution& nu1,
                                                 const Distribution& nu2, double kappa0,
                                                 unsigned n_max) {
    const std::size_t n = v.space.base_size();
    if (nu1.size() != n) throw DimensionMismatch(n, nu1.size());
    if (nu2.size() != n) throw DimensionMismatch(n, nu2.size());
    if (!(kappa0 >= 0.0 && kappa0 <= 1.0)) throw ParameterOutOfRange("kappa0 must lie in [0,1]");

    Eigen::VectorXd pair_weight(static_cast<Eigen::Index>(v.size()));
    for (std::size_t t = 0; t < v.size(); ++t) {
        const auto [i, k] = v.space.from_index(t);
        pair_weight[static_cast<Eigen::Index>(t)] = nu1[i] * nu2[k];
    }
    std::vector<double> series(n_max + 1);
    Eigen::VectorXd h = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(v.size()));
    for (unsigned step = 0; step <= n_max; ++step) {
        series[step] = (1.0 - kappa0) * pair_weight.dot(h);
        if (step < n_max) h = v.apply(h);
    }
    return series;
}

}  // namespace mixcert
