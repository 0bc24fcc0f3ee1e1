#pragma once

// Plain-text matrix format: one row per line, entries separated by commas
// and/or whitespace, '#' starts a comment line, blank lines are skipped.

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mixcert/chain.hpp"
#include "mixcert/error.hpp"

namespace mixcert {

inline Eigen::MatrixXd parse_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::vector<double> row;
        std::string_view rest(line);
        while (true) {
            const auto start = rest.find_first_not_of(" \t,");
            if (start == std::string_view::npos) break;
            rest.remove_prefix(start);
            const auto end = rest.find_first_of(" \t,");
            const auto token = rest.substr(0, end);
            double value = 0.0;
            const char* tb = token.data();
            const char* te = token.data() + token.size();
            if (*tb == '+') ++tb;
            const auto [ptr, ec] = std::from_chars(tb, te, value);
            if (ec != std::errc() || ptr != te) {
                throw ParseError(line_no, "not a number: '" + std::string(token) + "'");
            }
            row.push_back(value);
            if (end == std::string_view::npos) break;
            rest.remove_prefix(end);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(line_no, "ragged row: expected " + std::to_string(rows.front().size()) +
                                          " entries, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(line_no, "no matrix rows found");

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

inline TransitionMatrix load_transition_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return TransitionMatrix::validated(parse_matrix(in));
}

}  // namespace mixcert
