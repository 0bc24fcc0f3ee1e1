#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/paper_examples.hpp"
#include "support.hpp"

using namespace mixcert;
namespace ts = mixcert::test_support;

// =============================================================================
// Pair space
// =============================================================================

TEST(PairSpace, RowMajorBijection) {
    for (std::size_t n = 2; n <= 7; ++n) {
        const PairSpace s(n);
        ASSERT_EQ(s.size(), n * (n - 1));
        std::set<std::size_t> seen;
        std::size_t expected = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                if (i == k) continue;
                const auto t = s.to_index(i, k);
                EXPECT_EQ(t, expected++);
                seen.insert(t);
                EXPECT_EQ(s.from_index(t), std::make_pair(i, k));
            }
        }
        EXPECT_EQ(seen.size(), s.size());
    }
}

TEST(PairSpace, ThreeStateOrder) {
    const PairSpace s(3);
    const std::vector<std::pair<std::size_t, std::size_t>> order{{0, 1}, {0, 2}, {1, 0},
                                                                 {1, 2}, {2, 0}, {2, 1}};
    for (std::size_t t = 0; t < order.size(); ++t) EXPECT_EQ(s.from_index(t), order[t]);
}

TEST(PairSpace, Errors) {
    EXPECT_THROW(PairSpace(1), ParameterOutOfRange);
    const PairSpace s(3);
    EXPECT_THROW(s.to_index(1, 1), DiagonalPair);
    EXPECT_THROW(s.to_index(3, 1), IndexOutOfRange);
    EXPECT_THROW(s.from_index(6), IndexOutOfRange);
}

// =============================================================================
// Residual kernels
// =============================================================================

TEST(Residual, ExampleOne) {
    const auto r = residual_kernels(reference::example1(), 0, 1);
    EXPECT_NEAR(r.first[0], 1.0, 1e-15);
    EXPECT_NEAR(r.first[1], 0.0, 1e-15);
    EXPECT_NEAR(r.second[0], 0.0, 1e-15);
    EXPECT_NEAR(r.second[1], 1.0, 1e-15);
}

TEST(Residual, ExampleFourPairOneThree) {
    // p_1 = (0, .3, .7), p_3 = (.8, .1, .1): overlap (0, .1, .1), kappa = .2
    const auto r = residual_kernels(reference::example4(), 0, 2);
    EXPECT_NEAR(r.first[0], 0.0, 1e-15);
    EXPECT_NEAR(r.first[1], 0.25, 1e-15);
    EXPECT_NEAR(r.first[2], 0.75, 1e-15);
    EXPECT_NEAR(r.second[0], 1.0, 1e-15);
    EXPECT_NEAR(r.second[1], 0.0, 1e-15);
    EXPECT_NEAR(r.second[2], 0.0, 1e-15);
}

TEST(Residual, ZeroOverlapKeepsRows) {
    const auto p = reference::example4();
    const auto r = residual_kernels(p, 0, 1);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(r.first[j], p(0, j));
        EXPECT_EQ(r.second[j], p(1, j));
    }
}

TEST(Residual, IdenticalRowsFallBack) {
    const auto p = validate_matrix({{0.2, 0.8, 0.0}, {0.2, 0.8, 0.0}, {0.5, 0.0, 0.5}});
    const auto r = residual_kernels(p, 0, 1);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(r.first[j], p(0, j));
        EXPECT_EQ(r.second[j], p(0, j));
    }
}

TEST(Residual, Errors) {
    EXPECT_THROW(residual_kernels(reference::example4(), 1, 1), DiagonalPair);
    EXPECT_THROW(residual_kernels(reference::example4(), 0, 3), IndexOutOfRange);
}

TEST(Residual, DisjointSupportsAndUnitMass) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const auto p = ts::random_sparse_stochastic(rng, ts::random_size(rng, 2, 6), 0.3);
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (i == k || kappa_pair(p, i, k) >= 1.0) continue;
                const auto r = residual_kernels(p, i, k);
                for (std::size_t j = 0; j < p.size(); ++j) {
                    EXPECT_EQ(r.first[j] * r.second[j], 0.0);
                }
                EXPECT_NEAR(r.first.weights().sum(), 1.0, 1e-12);
                EXPECT_NEAR(r.second.weights().sum(), 1.0, 1e-12);
            }
        }
    }
}

// Overlap plus scaled residual gives back the row.
TEST(Residual, Reconstruction) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 100; ++t) {
        const auto p = ts::random_stochastic(rng, ts::random_size(rng, 2, 6));
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (i == k) continue;
                const double w = 1.0 - kappa_pair(p, i, k);
                const auto r = residual_kernels(p, i, k);
                const Eigen::VectorXd overlap = p.row(i).cwiseMin(p.row(k)).transpose();
                EXPECT_LE((overlap + w * r.first.weights() - p.row(i).transpose()).cwiseAbs().maxCoeff(), 1e-12);
                EXPECT_LE((overlap + w * r.second.weights() - p.row(k).transpose()).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

// =============================================================================
// Coupling operator
// =============================================================================

TEST(BuildV, ExampleOneIsScaledIdentity) {
    const auto v = build_V(reference::example1(), CouplingMode::LemmaResidual);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_LE((v.entries - 0.3 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(v.mode, CouplingMode::LemmaResidual);
}

TEST(BuildV, ExampleOneProductKernel) {
    // (1,2) -> (1,2) with .65*.65, -> (2,1) with .35*.35, normalized by .545
    const auto v = build_V(reference::example1(), CouplingMode::AppendixProduct);
    EXPECT_NEAR(v.entries(0, 0), 0.3 * 0.4225 / 0.545, 1e-15);
    EXPECT_NEAR(v.entries(0, 1), 0.3 * 0.1225 / 0.545, 1e-15);
    EXPECT_NEAR(v.entries(1, 1), 0.3 * 0.4225 / 0.545, 1e-15);
    EXPECT_NEAR(v.entries(1, 0), 0.3 * 0.1225 / 0.545, 1e-15);
}

TEST(BuildV, ExampleFourLemmaRows) {
    Eigen::MatrixXd expected(6, 6);
    expected << 0, 0, .3, 0, .7, 0,
                0, 0, .2, 0, .6, 0,
                .3, .7, 0, 0, 0, 0,
                .1, .1, 0, 0, 0, 0,
                .2, .6, 0, 0, 0, 0,
                0, 0, .1, 0, .1, 0;
    const auto v = build_V(reference::example4(), CouplingMode::LemmaResidual);
    EXPECT_LE((v.entries - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BuildV, ExampleFourAppendixRowOneThree) {
    // p_1 x p_3 off the diagonal, renormalized by 0.9 and scaled by 0.8.
    const std::vector<double> expected{0, 0, 16.0 / 75, 2.0 / 75, 112.0 / 225, 14.0 / 225};
    const auto v = build_V(reference::example4(), CouplingMode::AppendixProduct);
    const auto row = v.space.to_index(0, 2);
    for (std::size_t c = 0; c < 6; ++c) EXPECT_NEAR(v.entries(row, c), expected[c], 1e-15);
}

TEST(BuildV, RowSumsAreOneMinusPairKappa) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 200; ++t) {
        const auto p = ts::random_stochastic(rng, ts::random_size(rng, 2, 6));
        for (auto mode : {CouplingMode::LemmaResidual, CouplingMode::AppendixProduct}) {
            const auto v = build_V(p, mode);
            EXPECT_GE(v.entries.minCoeff(), 0.0);
            for (std::size_t r = 0; r < v.size(); ++r) {
                const auto [i, k] = v.space.from_index(r);
                EXPECT_NEAR(v.entries.row(r).sum(), 1.0 - kappa_pair(p, i, k), 1e-12);
                EXPECT_NEAR(v.row_weights[r], 1.0 - kappa_pair(p, i, k), 1e-15);
            }
        }
    }
}

// Swapping the two coordinates maps V onto itself.
TEST(BuildV, SwapSymmetry) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 100; ++t) {
        const auto p = ts::random_sparse_stochastic(rng, ts::random_size(rng, 2, 6), 0.2);
        const auto v = build_V(p, CouplingMode::LemmaResidual);
        for (std::size_t r = 0; r < v.size(); ++r) {
            const auto [i, k] = v.space.from_index(r);
            for (std::size_t c = 0; c < v.size(); ++c) {
                const auto [j, l] = v.space.from_index(c);
                EXPECT_NEAR(v.entries(r, c), v.entries(v.space.to_index(k, i), v.space.to_index(l, j)),
                            1e-15);
            }
        }
    }
}

TEST(VPower, ExampleFourSeriesAtPairOneTwo) {
    const std::vector<double> expected{1,        1,         0.86,       0.734,       0.6262,      0.53422,
                                       0.45575,  0.3888062, 0.33169558, 0.282973774, 0.2414085734};
    const auto v = build_V(reference::example4(), CouplingMode::LemmaResidual);
    const auto series = v_power_ones_series(v, 10);
    const auto t = v.space.to_index(0, 1);
    for (unsigned n = 0; n <= 10; ++n) EXPECT_NEAR(series[n][t], expected[n], 1e-12) << "n=" << n;
}

TEST(VPower, OneNormIsSupNorm) {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 50; ++t) {
        const auto p = ts::random_stochastic(rng, ts::random_size(rng, 2, 5));
        const auto v = build_V(p, CouplingMode::LemmaResidual);
        Eigen::MatrixXd vn = Eigen::MatrixXd::Identity(v.size(), v.size());
        for (unsigned n = 0; n <= 8; ++n) {
            EXPECT_NEAR(v_power_onenorm(v, n), vn.rowwise().sum().maxCoeff(), 1e-12);
            vn = vn * v.entries;
        }
    }
}

TEST(VPower, Submultiplicative) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 50; ++t) {
        const auto p = ts::random_stochastic(rng, ts::random_size(rng, 2, 5));
        const auto v = build_V(p, CouplingMode::LemmaResidual);
        for (unsigned a = 0; a <= 6; ++a) {
            for (unsigned b = 0; b <= 6; ++b) {
                EXPECT_LE(v_power_onenorm(v, a + b),
                          v_power_onenorm(v, a) * v_power_onenorm(v, b) + 1e-12);
            }
        }
    }
}

TEST(CouplingBound, PointMassesReadOffTheVector) {
    const auto p = reference::example4();
    const auto v = build_V(p, CouplingMode::LemmaResidual);
    const auto d1 = Distribution::point_mass(3, 0);
    const auto d2 = Distribution::point_mass(3, 1);
    const auto series = coupling_bound_series(v, d1, d2, kappa_initial(d1, d2), 10);
    const auto ones = v_power_ones_series(v, 10);
    for (unsigned n = 0; n <= 10; ++n) EXPECT_DOUBLE_EQ(series[n], ones[n][v.space.to_index(0, 1)]);
}

TEST(CouplingBound, Errors) {
    const auto v = build_V(reference::example4(), CouplingMode::LemmaResidual);
    EXPECT_THROW(coupling_bound_series(v, Distribution::uniform(2), Distribution::uniform(3), 0, 3),
                 DimensionMismatch);
    EXPECT_THROW(coupling_bound_series(v, Distribution::uniform(3), Distribution::uniform(3), 1.5, 3),
                 ParameterOutOfRange);
}

namespace {

// Per-pair check: TV(delta_i P^n, delta_k P^n) <= (V^n 1)(i,k) and <= (1-kappa)^n.
void expect_exact_domination(const TransitionMatrix& p, unsigned n_max) {
    const auto v = build_V(p, CouplingMode::LemmaResidual);
    const auto ones = v_power_ones_series(v, n_max);
    const auto md = md_bound_series(kappa_table(p).global(), n_max);
    Eigen::MatrixXd pn = Eigen::MatrixXd::Identity(p.size(), p.size());
    for (unsigned n = 0; n <= n_max; ++n) {
        for (std::size_t t = 0; t < v.size(); ++t) {
            const auto [i, k] = v.space.from_index(t);
            const double tv = row_tv_distance(pn, i, k);
            EXPECT_LE(tv, ones[n][t] + 1e-10) << "n=" << n << " pair " << i << "," << k;
            EXPECT_LE(tv, md[n] + 1e-10);
        }
        pn = pn * p.matrix();
    }
}

}  // namespace

TEST(Domination, ReferenceChains) {
    for (const auto& c : reference::all()) expect_exact_domination(c.matrix, 50);
}

TEST(Domination, RandomChains) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 200; ++t) {
        expect_exact_domination(ts::random_stochastic(rng, ts::random_size(rng, 2, 6)), 30);
    }
}

TEST(Domination, SparseRandomChains) {
    std::mt19937_64 rng(38);
    for (int t = 0; t < 100; ++t) {
        expect_exact_domination(ts::random_sparse_stochastic(rng, ts::random_size(rng, 2, 6), 0.4), 30);
    }
}
