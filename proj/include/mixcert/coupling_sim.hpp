#pragma once

// Monte Carlo realization of the coupling construction.
//
// The vector process (eta1, eta2, xi, zeta) carries two uncoupled copies
// (eta1, eta2), a shared copy xi used once they have met, and the indicator
// zeta (1 = still apart). Its four components are drawn independently given
// the current state, each from its own counter-based stream. The coupled
// copies are X1 = zeta ? eta1 : xi and X2 = zeta ? eta2 : xi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/error.hpp"
#include "mixcert/random.hpp"

namespace mixcert {

// ---------------------------------------------------------------------------
// Maximal coupling of two laws

/// Mixture form of the maximal coupling of p and q: with probability
/// kappa = sum min(p, q) draw y ~ min(p, q)/kappa and return (y, y); otherwise
/// draw y1 ~ (p - min)/(1 - kappa) and y2 ~ (q - min)/(1 - kappa) independently.
struct MaximalCoupling {
    double kappa = 0.0;
    Eigen::VectorXd overlap;
    Eigen::VectorXd residual1;
    Eigen::VectorXd residual2;
    double residual1_mass = 0.0;
    double residual2_mass = 0.0;

    MaximalCoupling(const Distribution& p, const Distribution& q) {
        if (p.size() != q.size()) throw DimensionMismatch(p.size(), q.size());
        overlap = p.weights().cwiseMin(q.weights());
        residual1 = p.weights() - overlap;
        residual2 = q.weights() - overlap;
        kappa = std::clamp(overlap.sum(), 0.0, 1.0);
        residual1_mass = residual1.sum();
        residual2_mass = residual2.sum();
    }

    bool always_equal() const noexcept {
        return kappa >= 1.0 || !(residual1_mass > 0.0) || !(residual2_mass > 0.0);
    }

    template <UniformSource G>
    std::pair<std::size_t, std::size_t> sample(G& rng) const {
        const double branch = rng.uniform();
        if (always_equal() || branch < kappa) {
            const std::size_t y = sample_index(overlap, overlap.sum(), rng.uniform());
            return {y, y};
        }
        const std::size_t y1 = sample_index(residual1, residual1_mass, rng.uniform());
        const std::size_t y2 = sample_index(residual2, residual2_mass, rng.uniform());
        return {y1, y2};
    }

    /// Exact joint law of `sample`, enumerated branch by branch.
    Eigen::MatrixXd joint_law() const {
        const auto n = overlap.size();
        Eigen::MatrixXd law = Eigen::MatrixXd::Zero(n, n);
        if (always_equal()) {
            law.diagonal() = overlap / overlap.sum();
            return law;
        }
        law.diagonal() = overlap;  // kappa * (overlap / kappa)
        law += (1.0 - kappa) * (residual1 / residual1_mass) *
               (residual2 / residual2_mass).transpose();
        return law;
    }
};

template <UniformSource G>
std::pair<std::size_t, std::size_t> maximal_coupling_sample(const Distribution& p,
                                                            const Distribution& q, G& rng) {
    return MaximalCoupling(p, q).sample(rng);
}

// ---------------------------------------------------------------------------
// Vector process

struct CouplingState {
    std::size_t eta1 = 0;
    std::size_t eta2 = 0;
    std::size_t xi = 0;
    int zeta = 1;

    bool operator==(const CouplingState&) const = default;

    std::size_t coupled_first() const noexcept { return zeta == 1 ? eta1 : xi; }
    std::size_t coupled_second() const noexcept { return zeta == 1 ? eta2 : xi; }
};

enum StreamComponent : std::uint8_t { kEta1 = 0, kEta2 = 1, kXi = 2, kZeta = 3 };

/// Per-pair kernels of the transition density, precomputed for all n^2
/// ordered pairs (diagonal pairs use the kappa = 1 fallback).
class CouplingTables {
public:
    explicit CouplingTables(const TransitionMatrix& p) : p_(p), n_(p.size()) {
        entries_.reserve(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < n_; ++k) {
                Entry e;
                e.kappa = kappa_pair(p, i, k);
                e.overlap = p.row(i).transpose().cwiseMin(p.row(k).transpose());
                e.overlap_mass = e.overlap.sum();
                if (i == k) {
                    e.phi1 = p.row(i).transpose();
                    e.phi2 = e.phi1;
                } else {
                    const auto phi = residual_kernels(p, i, k);
                    e.phi1 = phi.first.weights();
                    e.phi2 = phi.second.weights();
                }
                e.phi1_mass = e.phi1.sum();
                e.phi2_mass = e.phi2.sum();
                entries_.push_back(std::move(e));
            }
        }
        for (std::size_t i = 0; i < n_; ++i) rows_.push_back(p.row(i).transpose());
    }

    struct Entry {
        double kappa = 0.0;
        Eigen::VectorXd phi1;
        Eigen::VectorXd phi2;
        Eigen::VectorXd overlap;
        double phi1_mass = 0.0;
        double phi2_mass = 0.0;
        double overlap_mass = 0.0;
    };

    std::size_t size() const noexcept { return n_; }
    const TransitionMatrix& matrix() const noexcept { return p_; }
    const Entry& pair(std::size_t i, std::size_t k) const { return entries_[i * n_ + k]; }
    const Eigen::VectorXd& row(std::size_t i) const { return rows_[i]; }

private:
    TransitionMatrix p_;
    std::size_t n_;
    std::vector<Entry> entries_;
    std::vector<Eigen::VectorXd> rows_;
};

template <class S>
concept ComponentStreams = requires(const S& s) {
    { s.component(std::uint8_t{0}) } -> UniformSource;
};

/// One transition of (eta1, eta2, xi, zeta); the four components are
/// conditionally independent given `s`.
template <ComponentStreams Streams>
CouplingState step_vector_process(const CouplingState& s, const CouplingTables& tables,
                                  const Streams& streams) {
    const std::size_t n = tables.size();
    if (s.eta1 >= n) throw IndexOutOfRange(s.eta1, n);
    if (s.eta2 >= n) throw IndexOutOfRange(s.eta2, n);
    if (s.xi >= n) throw IndexOutOfRange(s.xi, n);
    if (s.zeta != 0 && s.zeta != 1) throw ParameterOutOfRange("zeta must be 0 or 1");

    const auto& pair = tables.pair(s.eta1, s.eta2);
    CouplingState next;

    auto g1 = streams.component(kEta1);
    next.eta1 = sample_index(pair.phi1, pair.phi1_mass, g1.uniform());
    auto g2 = streams.component(kEta2);
    next.eta2 = sample_index(pair.phi2, pair.phi2_mass, g2.uniform());

    auto g3 = streams.component(kXi);
    if (s.zeta == 1 && pair.kappa > 0.0) {
        next.xi = sample_index(pair.overlap, pair.overlap_mass, g3.uniform());
    } else {
        next.xi = sample_index(tables.row(s.xi), 1.0, g3.uniform());
    }

    auto g4 = streams.component(kZeta);
    const double u = g4.uniform();
    next.zeta = (s.zeta == 1 && !(u < pair.kappa)) ? 1 : 0;
    return next;
}

template <ComponentStreams Streams>
CouplingState step_vector_process(const CouplingState& s, const TransitionMatrix& p,
                                  const Streams& streams) {
    return step_vector_process(s, CouplingTables(p), streams);
}

// ---------------------------------------------------------------------------
// Simulation

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint32_t horizon = 50;
    std::uint64_t seed = 0;

    void validate() const {
        if (trials < 1) throw ParameterOutOfRange("trials must be >= 1");
        if (horizon < 1) throw ParameterOutOfRange("horizon must be >= 1");
    }
};

/// Bernoulli frequency with its plug-in standard error.
struct SimEstimate {
    double point = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;

    static SimEstimate from_count(std::uint64_t hits, std::uint64_t trials) {
        const double p = static_cast<double>(hits) / static_cast<double>(trials);
        return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
    }
};

/// Path of one trial from (x1, x2, x1, 1), states 0..horizon.
inline std::vector<CouplingState> trajectory(const CouplingTables& tables, std::size_t x1,
                                             std::size_t x2, std::uint64_t seed,
                                             std::uint64_t trial, std::uint32_t horizon) {
    std::vector<CouplingState> path;
    path.reserve(horizon + 1);
    path.push_back({x1, x2, x1, 1});
    for (std::uint32_t step = 0; step < horizon; ++step) {
        path.push_back(step_vector_process(path.back(), tables, StepStreams(seed, trial, step)));
    }
    return path;
}

struct SimResult {
    SimConfig config;
    std::size_t x1 = 0;
    std::size_t x2 = 0;
    /// P(X1_n != X2_n) for n = 0..horizon, i.e. the frequency of zeta_n = 1.
    std::vector<SimEstimate> miss_prob;
    /// Index k counts trials with coupling time n0 = k (index 0 is always 0).
    std::vector<std::uint64_t> coupling_time_histogram;
    /// Trials still uncoupled at the horizon.
    std::uint64_t coupling_time_overflow = 0;
    Distribution marginal1 = Distribution::uniform(2);
    Distribution marginal2 = Distribution::uniform(2);
};

namespace detail {

struct SimCounts {
    std::vector<std::uint64_t> uncoupled;
    std::vector<std::uint64_t> histogram;
    std::uint64_t overflow = 0;
    std::vector<std::uint64_t> final1;
    std::vector<std::uint64_t> final2;

    SimCounts(std::size_t n, std::uint32_t horizon)
        : uncoupled(horizon + 1, 0), histogram(horizon + 1, 0), final1(n, 0), final2(n, 0) {}

    SimCounts& operator+=(const SimCounts& o) {
        for (std::size_t i = 0; i < uncoupled.size(); ++i) uncoupled[i] += o.uncoupled[i];
        for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += o.histogram[i];
        overflow += o.overflow;
        for (std::size_t i = 0; i < final1.size(); ++i) final1[i] += o.final1[i];
        for (std::size_t i = 0; i < final2.size(); ++i) final2[i] += o.final2[i];
        return *this;
    }
};

inline void run_trials(const CouplingTables& tables, std::size_t x1, std::size_t x2,
                       const SimConfig& cfg, std::uint64_t first, std::uint64_t last,
                       SimCounts& counts) {
    for (std::uint64_t trial = first; trial < last; ++trial) {
        const auto path = trajectory(tables, x1, x2, cfg.seed, trial, cfg.horizon);
        bool coupled = false;
        for (std::uint32_t n = 0; n <= cfg.horizon; ++n) {
            if (path[n].zeta == 1) {
                ++counts.uncoupled[n];
            } else if (!coupled) {
                coupled = true;
                ++counts.histogram[n];
            }
        }
        if (!coupled) ++counts.overflow;
        ++counts.final1[path.back().coupled_first()];
        ++counts.final2[path.back().coupled_second()];
    }
}

inline Distribution empirical(const std::vector<std::uint64_t>& counts, std::uint64_t trials) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i) {
        w[static_cast<Eigen::Index>(i)] =
            static_cast<double>(counts[i]) / static_cast<double>(trials);
    }
    return Distribution::validated(std::move(w), kDerivedTolerance);
}

}  // namespace detail

/// Runs cfg.trials independent trajectories from (x1, x2). Trials are split
/// across `threads` workers; counts are summed, so output depends only on cfg.
inline SimResult simulate_coupling(const TransitionMatrix& p, std::size_t x1, std::size_t x2,
                                   const SimConfig& cfg, unsigned threads = 1) {
    const std::size_t n = p.size();
    if (x1 >= n) throw IndexOutOfRange(x1, n);
    if (x2 >= n) throw IndexOutOfRange(x2, n);
    if (x1 == x2) throw TrivialStart(x1);
    cfg.validate();

    const CouplingTables tables(p);
    threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, cfg.trials));
    std::vector<detail::SimCounts> partial(threads, detail::SimCounts(n, cfg.horizon));
    {
        std::vector<std::jthread> workers;
        const std::uint64_t chunk = (cfg.trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t first = std::min(cfg.trials, w * chunk);
            const std::uint64_t last = std::min(cfg.trials, first + chunk);
            workers.emplace_back([&, w, first, last] {
                detail::run_trials(tables, x1, x2, cfg, first, last, partial[w]);
            });
        }
    }
    detail::SimCounts total(n, cfg.horizon);
    for (const auto& part : partial) total += part;

    SimResult r;
    r.config = cfg;
    r.x1 = x1;
    r.x2 = x2;
    r.miss_prob.reserve(cfg.horizon + 1);
    for (const auto c : total.uncoupled) r.miss_prob.push_back(SimEstimate::from_count(c, cfg.trials));
    r.coupling_time_histogram = std::move(total.histogram);
    r.coupling_time_overflow = total.overflow;
    r.marginal1 = detail::empirical(total.final1, cfg.trials);
    r.marginal2 = detail::empirical(total.final2, cfg.trials);
    return r;
}

struct MarginalCheck {
    std::vector<double> expected;
    std::vector<double> z_scores;
    std::vector<bool> flagged;
    bool all_within = true;
};

/// Compares an empirical law at step `horizon` from x with row x of P^horizon;
/// flags states deviating by more than 4 binomial standard deviations.
inline MarginalCheck verify_marginals(const TransitionMatrix& p, std::size_t x,
                                      const Distribution& empirical_law, std::uint64_t trials,
                                      unsigned horizon) {
    const std::size_t n = p.size();
    if (x >= n) throw IndexOutOfRange(x, n);
    if (empirical_law.size() != n) throw DimensionMismatch(n, empirical_law.size());
    if (trials < 1) throw ParameterOutOfRange("trials must be >= 1");

    const Distribution exact = propagate(Distribution::point_mass(n, x), p, horizon);
    MarginalCheck check;
    for (std::size_t j = 0; j < n; ++j) {
        const double pj = exact[j];
        const double dev = empirical_law[j] - pj;
        const double sigma = std::sqrt(pj * (1.0 - pj) / static_cast<double>(trials));
        double z = 0.0;
        if (sigma > 0.0) {
            z = dev / sigma;
        } else if (dev != 0.0) {
            z = dev > 0.0 ? HUGE_VAL : -HUGE_VAL;
        }
        const bool flag = std::abs(dev) > 4.0 * sigma;
        check.expected.push_back(pj);
        check.z_scores.push_back(z);
        check.flagged.push_back(flag);
        check.all_within = check.all_within && !flag;
    }
    return check;
}

}  // namespace mixcert
