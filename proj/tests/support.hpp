#pragma once

// Test-only helpers: random chains and an eigenvalue oracle that does not
// touch the library's solver.

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"

namespace mixcert::test_support {

/// Row-normalized uniform draws; every entry is positive, so the chain is
/// irreducible and aperiodic.
inline TransitionMatrix random_stochastic(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = u(rng);
            s += m(i, j);
        }
        m.row(i) /= s;
    }
    return TransitionMatrix::validated(m);
}

/// Random stochastic matrix with some exact zeros; rows keep at least one
/// positive entry.
inline TransitionMatrix random_sparse_stochastic(std::mt19937_64& rng, std::size_t n,
                                                 double zero_prob) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = u(rng) < zero_prob ? 0.0 : u(rng);
            s += m(i, j);
        }
        if (s == 0.0) {
            m(i, i) = 1.0;
            s = 1.0;
        }
        m.row(i) /= s;
    }
    return TransitionMatrix::validated(m);
}

inline std::size_t random_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Eigen::VectorXd random_law(std::mt19937_64& rng, std::size_t n, double zero_prob = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = u(rng) < zero_prob ? 0.0 : u(rng);
    if (w.sum() == 0.0) w[0] = 1.0;
    return w / w.sum();
}

/// Characteristic polynomial coefficients c_0..c_n of det(lambda I - M),
/// leading coefficient first, by Faddeev-LeVerrier in long double.
inline std::vector<long double> characteristic_polynomial(const Eigen::MatrixXd& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const Mat a = m.cast<long double>();
    std::vector<long double> c(n + 1);
    c[0] = 1.0L;
    Mat mk = Mat::Zero(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = a * mk + c[k - 1] * Mat::Identity(n, n);
        c[k] = -(a * mk).trace() / static_cast<long double>(k);
    }
    return c;
}

/// Durand-Kerner roots of a monic polynomial.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<long double>& c) {
    using C = std::complex<long double>;
    const std::size_t n = c.size() - 1;
    std::vector<C> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(C(0.4L, 0.9L), static_cast<long double>(i));
    auto eval = [&](C x) {
        C acc = 0;
        for (auto coef : c) acc = acc * x + coef;
        return acc;
    };
    for (int iter = 0; iter < 5000; ++iter) {
        long double change = 0;
        for (std::size_t i = 0; i < n; ++i) {
            C denom = 1;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            const C step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-30L) break;
    }
    std::vector<std::complex<double>> out;
    for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
    return out;
}

inline std::vector<std::complex<double>> oracle_eigenvalues(const Eigen::MatrixXd& m) {
    return polynomial_roots(characteristic_polynomial(m));
}

}  // namespace mixcert::test_support
