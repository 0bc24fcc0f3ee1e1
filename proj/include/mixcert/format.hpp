#pragma once

// Text, JSON and CSV renderings of a RateReport. All number formatting goes
// through std::to_chars, so output does not depend on the process locale.

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixcert/error.hpp"
#include "mixcert/report.hpp"
#include "mixcert/spectral.hpp"

namespace mixcert {

/// Shortest general-format rendering with `precision` significant digits.
inline std::string format_number(double v, int precision = 12) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

inline std::string pair_label(std::size_t i, std::size_t k) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")";
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kSeriesCsvHeader =
    "n,tv_actual,md_bound,coupling_bound,lambda2_power,ds_bound";

inline void write_series_csv(const RateReport& r, std::ostream& out) {
    auto cell = [](const std::optional<std::vector<double>>& s, std::size_t k) {
        return s ? format_number((*s)[k]) : std::string();
    };
    out << kSeriesCsvHeader << '\n';
    for (std::size_t k = 0; k <= r.n_max; ++k) {
        out << k << ',' << format_number(r.tv_actual[k]) << ',' << format_number(r.md_bound[k])
            << ',' << format_number(r.coupling_bound[k]) << ',' << cell(r.lambda2_power, k) << ','
            << cell(r.ds_bound, k) << '\n';
    }
}

inline void emit_series_csv(const RateReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_series_csv(r, out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json spectrum_json(const Spectrum& s) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& z : s.values) arr.push_back({{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

/// Fixed key set; absent quantities are null.
inline nlohmann::ordered_json report_json(const RateReport& r) {
    using json = nlohmann::ordered_json;
    json j;
    j["n"] = r.n;
    j["kappa_global"] = r.kappa_global;
    json table = json::array();
    for (Eigen::Index i = 0; i < r.kappa_pairwise.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < r.kappa_pairwise.cols(); ++k) row.push_back(r.kappa_pairwise(i, k));
        table.push_back(std::move(row));
    }
    j["kappa_pairwise"] = std::move(table);
    j["one_minus_kappa"] = r.one_minus_kappa;
    j["kappa_two_step"] = r.kappa_two_step;
    j["lambda2_abs"] = optional_json(r.lambda2_abs);
    j["r_V_lemma"] = optional_json(r.r_V_lemma);
    j["r_V_appendix"] = optional_json(r.r_V_appendix);
    j["reversible"] = optional_json(r.reversible);
    if (r.stationary) {
        json pi = json::array();
        for (std::size_t i = 0; i < r.stationary->size(); ++i) pi.push_back((*r.stationary)[i]);
        j["stationary"] = std::move(pi);
    } else {
        j["stationary"] = nullptr;
    }
    j["ds_constant"] = optional_json(r.ds_constant);
    j["spectrum_P"] = r.spectrum_p ? spectrum_json(*r.spectrum_p) : json(nullptr);
    j["spectrum_V_lemma"] = r.spectrum_v_lemma ? spectrum_json(*r.spectrum_v_lemma) : json(nullptr);
    j["n_max"] = r.n_max;
    j["tv_actual"] = r.tv_actual;
    j["bound_series"] = {
        {"md_bound", r.md_bound},
        {"coupling_bound", r.coupling_bound},
        {"lambda2_power", optional_json(r.lambda2_power)},
        {"r_v_power", optional_json(r.r_v_power)},
        {"ds_bound", optional_json(r.ds_bound)},
    };
    j["units"] = "all probabilities and rates are dimensionless; TV uses the sup-over-events "
                 "convention (half the L1 distance)";
    j["notes"] = r.notes;
    return j;
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string opt_text(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("n/a");
}

inline void line(std::ostream& out, const std::string& label, const std::string& value) {
    out << "  " << label;
    for (std::size_t pad = label.size(); pad < 34; ++pad) out << ' ';
    out << value << '\n';
}

}  // namespace detail

inline void write_report_text(const RateReport& r, std::ostream& out) {
    using detail::line;
    using detail::opt_text;
    out << "Convergence rate report (" << r.n << " states)\n\n";
    line(out, "kappa (Markov-Dobrushin)", format_number(r.kappa_global));
    line(out, "1 - kappa", format_number(r.one_minus_kappa));
    line(out, "kappa of P^2", format_number(r.kappa_two_step));
    line(out, "|lambda_2|", opt_text(r.lambda2_abs));
    line(out, "r(V), residual coupling", opt_text(r.r_V_lemma));
    line(out, "r(V), independent product", opt_text(r.r_V_appendix));
    line(out, "reversible", r.reversible ? (*r.reversible ? "yes" : "no") : "n/a");
    if (r.stationary) {
        std::string pi;
        for (std::size_t i = 0; i < r.stationary->size(); ++i) {
            if (i) pi += ' ';
            pi += format_number((*r.stationary)[i]);
        }
        line(out, "stationary law", pi);
    } else {
        line(out, "stationary law", "n/a");
    }
    line(out, "Diaconis-Stroock constant", opt_text(r.ds_constant));

    out << "\nPairwise kappa\n";
    for (Eigen::Index i = 0; i < r.kappa_pairwise.rows(); ++i) {
        for (Eigen::Index k = i + 1; k < r.kappa_pairwise.cols(); ++k) {
            line(out, pair_label(static_cast<std::size_t>(i), static_cast<std::size_t>(k)),
                 format_number(r.kappa_pairwise(i, k)));
        }
    }

    const std::size_t n = r.n_max;
    out << "\nAt n = " << n << " (TV as sup over events; L1 convention is twice that)\n";
    line(out, "exact worst-pair TV", format_number(r.tv_actual[n]) + "  (L1 convention: " +
                                         format_number(2.0 * r.tv_actual[n]) + ")");
    line(out, "Markov-Dobrushin (1-kappa)^n", format_number(r.md_bound[n]) +
                                                  "  (L1 convention: " +
                                                  format_number(2.0 * r.md_bound[n]) + ")");
    line(out, "two-step, L1 convention",
         format_number(md_bound_kstep(r.kappa_two_step, 2, r.kappa_global, static_cast<unsigned>(n))));
    line(out, "coupling max V^n 1", format_number(r.coupling_bound[n]));
    if (r.ds_bound) line(out, "Diaconis-Stroock", format_number((*r.ds_bound)[n]));
    out << "Asymptotic rates (limsup statements, not finite-n bounds)\n";
    if (r.lambda2_power) line(out, "|lambda_2|^n", format_number((*r.lambda2_power)[n]));
    if (r.r_v_power) line(out, "r(V)^n", format_number((*r.r_v_power)[n]));

    if (!r.notes.empty()) {
        out << "\nNotes\n";
        for (const auto& note : r.notes) out << "  - " << note << '\n';
    }
}

inline std::string report_text(const RateReport& r) {
    std::ostringstream out;
    write_report_text(r, out);
    return out.str();
}

}  // namespace mixcert
