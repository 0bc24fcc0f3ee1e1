#pragma once

// Rate report: every convergence certificate for one chain, with the exact
// TV decay it is meant to bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/error.hpp"
#include "mixcert/matrix_io.hpp"
#include "mixcert/spectral.hpp"

namespace mixcert {

struct AnalyzeOptions {
    unsigned n_max = 50;
    bool lemma = true;
    bool appendix = true;
};

struct RateReport {
    std::size_t n = 0;
    double kappa_global = 0.0;
    Eigen::MatrixXd kappa_pairwise;
    double one_minus_kappa = 1.0;
    /// Global coefficient of P^2, used by the two-step refinement.
    double kappa_two_step = 0.0;

    // Absent when the chain is not uniquely ergodic.
    std::optional<double> lambda2_abs;
    std::optional<Spectrum> spectrum_p;
    std::optional<bool> reversible;
    std::optional<Distribution> stationary;
    /// max_i ((1 - pi(i)) / (2 pi(i)))^(1/2); reversible chains only.
    std::optional<double> ds_constant;

    // Absent when the mode set excludes the construction.
    std::optional<double> r_V_lemma;
    std::optional<double> r_V_appendix;
    std::optional<Spectrum> spectrum_v_lemma;
    std::optional<RadiusCrossCheck> radius_check_lemma;
    std::optional<RadiusCrossCheck> radius_check_appendix;

    unsigned n_max = 0;
    /// max over state pairs of TV(row i of P^n, row k of P^n).
    std::vector<double> tv_actual;
    /// (1 - kappa)^n.
    std::vector<double> md_bound;
    /// max over pairs of (V^n 1), residual construction. Valid for every n.
    std::vector<double> coupling_bound;
    /// |lambda_2|^n, r(V)^n: asymptotic rates, not finite-n bounds.
    std::optional<std::vector<double>> lambda2_power;
    std::optional<std::vector<double>> r_v_power;
    std::optional<std::vector<double>> ds_bound;

    std::vector<std::string> notes;
};

/// Absolute slack for the finite-n domination checks.
inline constexpr double kDominationSlack = 1e-10;
/// Slack for the rate ordering |lambda_2| <= r(V) <= 1 - kappa.
inline constexpr double kRateOrderSlack = 1e-8;

/// Throws InvariantViolation on the first broken report invariant.
inline void check_invariants(const RateReport& r) {
    const std::size_t len = r.n_max + 1;
    if (r.tv_actual.size() != len || r.md_bound.size() != len || r.coupling_bound.size() != len) {
        throw InvariantViolation("series lengths differ");
    }
    for (std::size_t k = 0; k < len; ++k) {
        if (r.tv_actual[k] > r.md_bound[k] + kDominationSlack) {
            throw InvariantViolation("exact TV exceeds the Markov-Dobrushin bound at n = " +
                                     std::to_string(k));
        }
        if (r.tv_actual[k] > r.coupling_bound[k] + kDominationSlack) {
            throw InvariantViolation("exact TV exceeds the coupling bound at n = " +
                                     std::to_string(k));
        }
    }
    if (r.lambda2_abs && r.r_V_lemma && *r.lambda2_abs > *r.r_V_lemma + kRateOrderSlack) {
        throw InvariantViolation("|lambda_2| exceeds r(V)");
    }
    if (r.r_V_lemma && *r.r_V_lemma > r.one_minus_kappa + kRateOrderSlack) {
        throw InvariantViolation("r(V) exceeds 1 - kappa");
    }
}

namespace detail {

inline std::vector<double> power_series(double base, unsigned n_max) {
    std::vector<double> s(n_max + 1);
    double term = 1.0;
    for (unsigned k = 0; k <= n_max; ++k) {
        s[k] = term;
        term *= base;
    }
    return s;
}

inline double worst_pair_tv(const Eigen::MatrixXd& pn) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < pn.rows(); ++i) {
        for (Eigen::Index k = i + 1; k < pn.rows(); ++k) {
            worst = std::max(worst, row_tv_distance(pn, static_cast<std::size_t>(i),
                                                    static_cast<std::size_t>(k)));
        }
    }
    return worst;
}

}  // namespace detail

/// Worst-pair exact TV distance of P^n for n = 0..n_max.
inline std::vector<double> exact_tv_series(const TransitionMatrix& p, unsigned n_max) {
    std::vector<double> s;
    s.reserve(n_max + 1);
    const auto dim = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd pn = Eigen::MatrixXd::Identity(dim, dim);
    for (unsigned k = 0; k <= n_max; ++k) {
        s.push_back(detail::worst_pair_tv(pn));
        pn = pn * p.matrix();
    }
    return s;
}

inline RateReport analyze(const TransitionMatrix& p, const AnalyzeOptions& opt = {}) {
    RateReport r;
    r.n = p.size();
    r.n_max = opt.n_max;

    const KappaTable kappa(p);
    r.kappa_global = kappa.global();
    r.kappa_pairwise = kappa.pairwise();
    r.one_minus_kappa = 1.0 - kappa.global();
    r.kappa_two_step = kappa_table_kstep(p, 2).global();

    const CouplingOperator v_lemma = build_V(p, CouplingMode::LemmaResidual);
    if (opt.lemma) {
        Spectrum s = eigenvalues(v_lemma.entries);
        r.r_V_lemma = std::abs(s[0]);
        r.spectrum_v_lemma = std::move(s);
        r.radius_check_lemma = spectral_radius_checked(v_lemma.entries);
    }
    if (opt.appendix) {
        const CouplingOperator v_app = build_V(p, CouplingMode::AppendixProduct);
        r.r_V_appendix = spectral_radius(v_app.entries);
        r.radius_check_appendix = spectral_radius_checked(v_app.entries);
    }

    try {
        r.spectrum_p = eigenvalues(p.matrix());
        r.lambda2_abs = second_eigenvalue_modulus(p);
        r.stationary = stationary(p);
        r.reversible = is_reversible(p, *r.stationary);
    } catch (const NotUniquelyErgodic& e) {
        r.lambda2_abs.reset();
        r.stationary.reset();
        r.reversible.reset();
        r.notes.push_back(std::string(e.what()) + "; eigenvalue-based fields omitted");
    }

    if (r.reversible && *r.reversible) {
        double worst = 0.0;
        bool positive = true;
        for (std::size_t i = 0; i < r.n; ++i) {
            if (!((*r.stationary)[i] > 0.0)) {
                positive = false;
                break;
            }
            worst = std::max(worst, diaconis_stroock_prefactor(*r.stationary, i));
        }
        if (positive) {
            r.ds_constant = worst;
        } else {
            r.notes.push_back("stationary law has a zero-mass state; Diaconis-Stroock bound omitted");
        }
    } else if (r.reversible) {
        r.notes.push_back(
            "chain is not reversible; the Diaconis-Stroock bound is formally not applicable");
    }

    r.tv_actual = exact_tv_series(p, opt.n_max);
    r.md_bound = md_bound_series(kappa.global(), opt.n_max);
    r.coupling_bound.reserve(opt.n_max + 1);
    for (const auto& h : v_power_ones_series(v_lemma, opt.n_max)) {
        r.coupling_bound.push_back(h.maxCoeff());
    }
    if (r.lambda2_abs) r.lambda2_power = detail::power_series(*r.lambda2_abs, opt.n_max);
    if (r.r_V_lemma) r.r_v_power = detail::power_series(*r.r_V_lemma, opt.n_max);
    if (r.ds_constant) {
        auto s = detail::power_series(*r.lambda2_abs, opt.n_max);
        for (auto& x : s) x *= *r.ds_constant;
        r.ds_bound = std::move(s);
    }

    if (kappa.global() <= 0.0) {
        r.notes.push_back(
            "kappa = 0: the classical Markov-Dobrushin method is useless here (1 - kappa = 1)");
    }
    if (r.r_V_lemma && r.r_V_appendix && std::abs(*r.r_V_lemma - *r.r_V_appendix) > 1e-9) {
        r.notes.push_back("residual (lemma) and independent-product (appendix) constructions of V "
                          "give different spectral radii");
    }
    for (const auto* check : {&r.radius_check_lemma, &r.radius_check_appendix}) {
        if (check->has_value() && !(*check)->agrees) {
            r.notes.push_back("diagnostic: eigenvalue and power-iteration routes to r(V) differ by " +
                              std::to_string((*check)->gap));
        }
    }

    check_invariants(r);
    return r;
}

inline RateReport analyze(const std::string& path, const AnalyzeOptions& opt = {}) {
    return analyze(load_transition_matrix(path), opt);
}

}  // namespace mixcert
