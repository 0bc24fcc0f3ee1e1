#pragma once

// Simulation front end: Monte Carlo coupling estimates next to the exact
// coupling bound and the exact marginal laws.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/coupling_sim.hpp"
#include "mixcert/format.hpp"

namespace mixcert {

struct SimulationReport {
    SimResult sim;
    /// (V^n 1)(x1, x2) of the residual construction, kappa0 = 0.
    std::vector<double> exact_bound;
    MarginalCheck marginal1;
    MarginalCheck marginal2;
};

inline SimulationReport simulate_command(const TransitionMatrix& p, std::size_t x1, std::size_t x2,
                                         const SimConfig& cfg, unsigned threads = 1) {
    SimulationReport rep;
    rep.sim = simulate_coupling(p, x1, x2, cfg, threads);
    const std::size_t n = p.size();
    const auto d1 = Distribution::point_mass(n, x1);
    const auto d2 = Distribution::point_mass(n, x2);
    rep.exact_bound = coupling_bound_series(build_V(p, CouplingMode::LemmaResidual), d1, d2,
                                            kappa_initial(d1, d2), cfg.horizon);
    rep.marginal1 = verify_marginals(p, x1, rep.sim.marginal1, cfg.trials, cfg.horizon);
    rep.marginal2 = verify_marginals(p, x2, rep.sim.marginal2, cfg.trials, cfg.horizon);
    return rep;
}

inline nlohmann::ordered_json simulation_json(const SimulationReport& r) {
    using json = nlohmann::ordered_json;
    const auto& s = r.sim;
    json j;
    j["x1"] = s.x1 + 1;
    j["x2"] = s.x2 + 1;
    j["trials"] = s.config.trials;
    j["horizon"] = s.config.horizon;
    j["seed"] = s.config.seed;
    json miss = json::array();
    for (const auto& e : s.miss_prob) miss.push_back({{"point", e.point}, {"stderr", e.std_error}});
    j["miss_prob"] = std::move(miss);
    j["exact_coupling_bound"] = r.exact_bound;
    j["coupling_time_histogram"] = s.coupling_time_histogram;
    j["coupling_time_overflow"] = s.coupling_time_overflow;
    auto marginal = [](const Distribution& emp, const MarginalCheck& c) {
        json m;
        json e = json::array();
        for (std::size_t i = 0; i < emp.size(); ++i) e.push_back(emp[i]);
        m["empirical"] = std::move(e);
        m["exact"] = c.expected;
        json z = json::array();
        for (double v : c.z_scores) z.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        m["z_scores"] = std::move(z);
        m["all_within_4_sigma"] = c.all_within;
        return m;
    };
    j["marginal1"] = marginal(s.marginal1, r.marginal1);
    j["marginal2"] = marginal(s.marginal2, r.marginal2);
    return j;
}

inline void write_simulation_text(const SimulationReport& r, std::ostream& out) {
    const auto& s = r.sim;
    out << "Coupling simulation from " << pair_label(s.x1, s.x2) << ": " << s.config.trials
        << " trials, horizon " << s.config.horizon << ", seed " << s.config.seed << "\n\n";
    out << "   n  P(X1 != X2)       stderr            exact bound\n";
    for (std::size_t n = 0; n < s.miss_prob.size(); ++n) {
        std::string row = std::to_string(n);
        row.insert(0, 4 - std::min<std::size_t>(4, row.size()), ' ');
        auto col = [](std::string v) {
            v.resize(std::max<std::size_t>(v.size(), 18), ' ');
            return v;
        };
        out << row << "  " << col(format_number(s.miss_prob[n].point, 8))
            << col(format_number(s.miss_prob[n].std_error, 8)) << format_number(r.exact_bound[n], 8)
            << '\n';
    }
    out << "\nCoupling time histogram (n0: count)\n";
    for (std::size_t k = 1; k < s.coupling_time_histogram.size(); ++k) {
        if (s.coupling_time_histogram[k] == 0) continue;
        out << "  " << k << ": " << s.coupling_time_histogram[k] << '\n';
    }
    out << "  > " << s.config.horizon << ": " << s.coupling_time_overflow << '\n';

    auto marginal = [&](const char* name, std::size_t x, const Distribution& emp,
                        const MarginalCheck& c) {
        out << '\n' << name << " at n = " << s.config.horizon << " from state " << x + 1
            << (c.all_within ? " (all |z| <= 4)" : " (some |z| > 4)") << '\n';
        for (std::size_t j = 0; j < emp.size(); ++j) {
            out << "  state " << j + 1 << ": empirical " << format_number(emp[j], 8) << ", exact "
                << format_number(c.expected[j], 8) << ", z " << format_number(c.z_scores[j], 4)
                << '\n';
        }
    };
    marginal("Marginal of X1", s.x1, s.marginal1, r.marginal1);
    marginal("Marginal of X2", s.x2, s.marginal2, r.marginal2);
}

}  // namespace mixcert
