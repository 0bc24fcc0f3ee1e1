#pragma once

// Eigenvalue analysis of small dense matrices: spectra, the Perron root of
// the coupling operator, |lambda_2| of the chain, detailed balance and the
// Diaconis-Stroock prefactor.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/error.hpp"

namespace mixcert {

using Complex = std::complex<double>;

/// Moduli closer than this (relative) are treated as ties when ordering.
inline constexpr double kModulusTieTolerance = 1e-9;

/// Eigenvalues sorted by nonincreasing modulus; ties (within
/// kModulusTieTolerance) broken by nonincreasing real, then imaginary part.
struct Spectrum {
    std::vector<Complex> values;

    std::size_t size() const noexcept { return values.size(); }
    const Complex& operator[](std::size_t i) const { return values[i]; }
};

namespace detail {

inline void sort_spectrum(std::vector<Complex>& v) {
    std::sort(v.begin(), v.end(),
              [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
    // Re-order runs of (numerically) equal modulus.
    std::size_t start = 0;
    while (start < v.size()) {
        const double lead = std::abs(v[start]);
        std::size_t end = start + 1;
        while (end < v.size() &&
               lead - std::abs(v[end]) <= kModulusTieTolerance * std::max(1.0, lead)) {
            ++end;
        }
        std::sort(v.begin() + static_cast<std::ptrdiff_t>(start),
                  v.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const Complex& a, const Complex& b) {
                      if (a.real() != b.real()) return a.real() > b.real();
                      return a.imag() > b.imag();
                  });
        start = end;
    }
}

}  // namespace detail

/// Real Schur (Hessenberg reduction + shifted QR) with a 100*dim iteration budget.
inline Spectrum eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw NotSquare("eigenvalues need a square matrix");
    const auto dim = m.rows();
    const long budget = 100 * static_cast<long>(std::max<Eigen::Index>(dim, 1));
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(budget);
    solver.compute(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure(budget);

    Spectrum s;
    s.values.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) s.values.push_back(solver.eigenvalues()[i]);
    detail::sort_spectrum(s.values);
    return s;
}

/// Power iteration on the all-ones vector of a nonnegative matrix.
struct PowerProbe {
    /// ||M^n 1||_inf^(1/n).
    double gelfand_root = 0.0;
    /// (||M^n 1|| / ||M^(n-2) 1||)^(1/2); converges fast when the dominant
    /// eigenvalues are +-r.
    double two_step_ratio = 0.0;
    unsigned steps = 0;
};

inline PowerProbe power_probe(const Eigen::MatrixXd& m, unsigned steps) {
    if (m.rows() != m.cols()) throw NotSquare("power probe needs a square matrix");
    if (steps < 2) throw ParameterOutOfRange("power probe needs at least 2 steps");
    PowerProbe probe;
    probe.steps = steps;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(m.rows());
    double log_norm = 0.0;
    double prev_scale = 0.0;
    double scale = 0.0;
    for (unsigned k = 1; k <= steps; ++k) {
        x = m * x;
        prev_scale = scale;
        scale = x.cwiseAbs().maxCoeff();
        if (scale == 0.0) return probe;  // nilpotent along 1
        x /= scale;
        log_norm += std::log(scale);
    }
    probe.gelfand_root = std::exp(log_norm / steps);
    probe.two_step_ratio = std::sqrt(scale * prev_scale);
    return probe;
}

/// Perron root of a nonnegative matrix: the largest eigenvalue modulus.
inline double spectral_radius(const Eigen::MatrixXd& m) {
    if ((m.array() < 0.0).any()) {
        throw ParameterOutOfRange("spectral_radius expects a nonnegative matrix");
    }
    if (m.rows() == 0) return 0.0;
    return std::abs(eigenvalues(m)[0]);
}

/// Eigen route next to the power-iteration route; a gap above 1e-6 is a
/// diagnostic for the caller, not an error.
struct RadiusCrossCheck {
    double eigen = 0.0;
    double power = 0.0;
    double gap = 0.0;
    bool agrees = true;
};

inline RadiusCrossCheck spectral_radius_checked(const Eigen::MatrixXd& m, unsigned steps = 200) {
    RadiusCrossCheck c;
    c.eigen = spectral_radius(m);
    c.power = power_probe(m, steps).two_step_ratio;
    c.gap = std::abs(c.eigen - c.power);
    c.agrees = c.gap <= 1e-6;
    return c;
}

/// Tolerance below 1 at which a second unit-modulus eigenvalue is declared.
inline constexpr double kUnitEigenvalueTolerance = 1e-9;

inline double second_eigenvalue_modulus(const TransitionMatrix& p) {
    const Spectrum s = eigenvalues(p.matrix());
    const double second = std::abs(s[1]);
    if (second >= 1.0 - kUnitEigenvalueTolerance) {
        throw NotUniquelyErgodic("eigenvalue of modulus 1 is not simple (|lambda_2| = " +
                                 std::to_string(second) + ")");
    }
    return second;
}

/// Detailed balance pi_i p_ij = pi_j p_ji up to 1e-12.
inline bool is_reversible(const TransitionMatrix& p, const Distribution& pi) {
    const std::size_t n = p.size();
    if (pi.size() != n) throw DimensionMismatch(n, pi.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            worst = std::max(worst, std::abs(pi[i] * p(i, j) - pi[j] * p(j, i)));
        }
    }
    return worst <= 1e-12;
}

/// ((1 - pi(i)) / (2 pi(i)))^(1/2).
inline double diaconis_stroock_prefactor(const Distribution& pi, std::size_t i) {
    if (i >= pi.size()) throw IndexOutOfRange(i, pi.size());
    if (!(pi[i] > 0.0)) throw ZeroMass(i);
    return std::sqrt((1.0 - pi[i]) / (2.0 * pi[i]));
}

/// Prefactor times lambda2^n. Only meaningful for reversible chains; the
/// caller gates on is_reversible.
inline double diaconis_stroock_bound(const Distribution& pi, std::size_t i, double lambda2,
                                     unsigned n) {
    return diaconis_stroock_prefactor(pi, i) * std::pow(lambda2, n);
}

struct TwoStateRates {
    double kappa;
    double r;
    double lambda2_abs;
};

/// Closed form for P = [[a, 1-a], [1-b, b]].
inline TwoStateRates two_state_closed_form(double a, double b) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
        throw ParameterOutOfRange("two-state form needs 0 < a, b < 1");
    }
    const double kappa = std::min(a, 1.0 - b) + std::min(1.0 - a, b);
    return {kappa, 1.0 - kappa, std::abs(a + b - 1.0)};
}

}  // namespace mixcert
