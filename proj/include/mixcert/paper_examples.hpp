#pragma once

// Built-in reference chains and the constants they are expected to produce.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/spectral.hpp"

namespace mixcert {

struct NamedChain {
    std::string name;
    TransitionMatrix matrix;
};

namespace reference {

inline TransitionMatrix example1() { return validate_matrix({{0.65, 0.35}, {0.35, 0.65}}); }

inline TransitionMatrix example2() {
    return validate_matrix({{0.0, 0.3, 0.7}, {0.3, 0.7, 0.0}, {0.7, 0.0, 0.3}});
}

inline TransitionMatrix example3() {
    return validate_matrix({{0.0, 0.3, 0.7}, {0.7, 0.0, 0.3}, {0.3, 0.7, 0.0}});
}

inline TransitionMatrix example4() {
    return validate_matrix({{0.0, 0.3, 0.7}, {1.0, 0.0, 0.0}, {0.8, 0.1, 0.1}});
}

inline TransitionMatrix appendix_second() {
    return validate_matrix({{0.1, 0.1, 0.8}, {0.3, 0.7, 0.0}, {0.6, 0.4, 0.0}});
}

inline std::vector<NamedChain> all() {
    return {{"example1", example1()},
            {"example2", example2()},
            {"example3", example3()},
            {"example4", example4()},
            {"appendix", appendix_second()}};
}

}  // namespace reference

struct ExampleCheck {
    std::string example;
    std::string quantity;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Runs every reference chain and compares with its published constants at
/// tolerance 1e-7. Failures are returned as data.
inline std::vector<ExampleCheck> run_paper_examples() {
    constexpr double tol = 1e-7;
    std::vector<ExampleCheck> out;
    auto check = [&](const std::string& ex, const std::string& q, double expected, double actual) {
        out.push_back({ex, q, expected, actual, tol, std::abs(actual - expected) <= tol});
    };
    auto r_lemma = [](const TransitionMatrix& p) {
        return spectral_radius(build_V(p, CouplingMode::LemmaResidual).entries);
    };
    auto r_appendix = [](const TransitionMatrix& p) {
        return spectral_radius(build_V(p, CouplingMode::AppendixProduct).entries);
    };

    {
        const auto p = reference::example1();
        const auto v = build_V(p, CouplingMode::LemmaResidual);
        const auto pi = stationary(p);
        check("example1", "kappa", 0.7, kappa_table(p).global());
        check("example1", "max |V - 0.3 I|", 0.0,
              (v.entries - 0.3 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff());
        check("example1", "r(V) lemma", 0.3, r_lemma(p));
        check("example1", "|lambda_2|", 0.3, second_eigenvalue_modulus(p));
        check("example1", "reversible", 1.0, is_reversible(p, pi) ? 1.0 : 0.0);
        check("example1", "Diaconis-Stroock prefactor", 1.0 / std::sqrt(2.0),
              diaconis_stroock_prefactor(pi, 0));
    }
    {
        const auto p = reference::example2();
        const auto table = kappa_table(p);
        double worst = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t k = i + 1; k < 3; ++k) worst = std::max(worst, std::abs(table(i, k) - 0.3));
        }
        const auto pi = stationary(p);
        check("example2", "max |kappa(i,k) - 0.3|", 0.0, worst);
        check("example2", "r(V) lemma", 0.7, r_lemma(p));
        check("example2", "|lambda_2|", 0.6082763, second_eigenvalue_modulus(p));
        check("example2", "max |pi - uniform|", 0.0,
              (pi.weights().array() - 1.0 / 3.0).abs().maxCoeff());
        check("example2", "reversible", 1.0, is_reversible(p, pi) ? 1.0 : 0.0);
    }
    {
        const auto p = reference::example3();
        const auto pi = stationary(p);
        check("example3", "|lambda_2|", 0.6082763, second_eigenvalue_modulus(p));
        check("example3", "r(V) lemma", 0.7, r_lemma(p));
        check("example3", "reversible", 0.0, is_reversible(p, pi) ? 1.0 : 0.0);
    }
    {
        const auto p = reference::example4();
        check("example4", "kappa(1,2)", 0.0, kappa_pair(p, 0, 1));
        check("example4", "kappa(1,3)", 0.2, kappa_pair(p, 0, 2));
        check("example4", "kappa(2,3)", 0.8, kappa_pair(p, 1, 2));
        check("example4", "kappa", 0.0, kappa_table(p).global());
        check("example4", "r(V) lemma", 0.85311289, r_lemma(p));
        check("example4", "|lambda_2|", 0.85311289, second_eigenvalue_modulus(p));
        check("example4", "r(V) appendix", 0.81406223, r_appendix(p));
    }
    {
        const auto p = reference::appendix_second();
        check("appendix", "1 - kappa", 0.8, 1.0 - kappa_table(p).global());
        check("appendix", "r(V) appendix", 0.5152391, r_appendix(p));
    }
    return out;
}

}  // namespace mixcert
