// mixcert: convergence-rate certificates for finite Markov chains.
//
// Exit codes: 0 success, 1 parse/validation error, 2 numerical failure,
// 3 example-suite failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mixcert/mixcert.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitExamples = 3;

int exit_code_for(const mixcert::Error& e) {
    switch (e.kind()) {
        case mixcert::ErrorKind::ConvergenceFailure:
        case mixcert::ErrorKind::NotUniquelyErgodic:
        case mixcert::ErrorKind::InvariantViolation:
            return kExitNumerical;
        default:
            return kExitInput;
    }
}

mixcert::AnalyzeOptions analyze_options(unsigned n_max, const std::string& mode) {
    mixcert::AnalyzeOptions opt;
    opt.n_max = n_max;
    opt.lemma = mode != "appendix";
    opt.appendix = mode != "lemma";
    return opt;
}

int run_examples(const std::string& format) {
    const auto checks = mixcert::run_paper_examples();
    bool all = true;
    for (const auto& c : checks) all = all && c.passed;
    if (format == "json") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            arr.push_back({{"example", c.example},
                           {"quantity", c.quantity},
                           {"expected", c.expected},
                           {"actual", c.actual},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed}});
        }
        std::cout << nlohmann::ordered_json{{"checks", arr}, {"all_passed", all}}.dump(2) << '\n';
    } else {
        for (const auto& c : checks) {
            std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.example << "  " << c.quantity
                      << ": expected " << mixcert::format_number(c.expected) << ", got "
                      << mixcert::format_number(c.actual) << " (tol "
                      << mixcert::format_number(c.tolerance) << ")\n";
        }
        std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    }
    return all ? kExitOk : kExitExamples;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convergence-rate certificates for finite Markov chains"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    unsigned n_max = 50;
    std::string mode = "both";
    std::string format = "text";
    std::uint64_t trials = 100000;
    std::uint32_t horizon = 50;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t x1 = 1;
    std::size_t x2 = 2;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };

    auto* analyze = app.add_subcommand("analyze", "Compute every rate certificate for a chain");
    analyze->add_option("--input", input, "Matrix file")->required();
    analyze->add_option("--n-max", n_max, "Last step of the bound series")->capture_default_str();
    analyze->add_option("--mode", mode, "Coupling-operator construction(s)")
        ->check(CLI::IsMember({"lemma", "appendix", "both"}))
        ->capture_default_str();
    add_format(analyze);

    auto* series = app.add_subcommand("series", "Write the bound series as CSV");
    series->add_option("--input", input, "Matrix file")->required();
    series->add_option("--n-max", n_max, "Last step of the series")->capture_default_str();
    series->add_option("--output", output, "CSV path (default: stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of the coupled pair");
    simulate->add_option("--input", input, "Matrix file")->required();
    simulate->add_option("--x1", x1, "Start of the first copy (1-based)")->capture_default_str();
    simulate->add_option("--x2", x2, "Start of the second copy (1-based)")->capture_default_str();
    simulate->add_option("--trials", trials, "Number of trajectories")->capture_default_str();
    simulate->add_option("--horizon", horizon, "Steps per trajectory")->capture_default_str();
    simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
    simulate->add_option("--threads", threads, "Worker threads (output does not depend on it)")
        ->capture_default_str();
    add_format(simulate);

    auto* examples = app.add_subcommand("examples", "Check the built-in reference chains");
    add_format(examples);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*examples) return run_examples(format);

        const auto p = mixcert::load_transition_matrix(input);
        if (*analyze) {
            const auto report = mixcert::analyze(p, analyze_options(n_max, mode));
            if (format == "json") {
                std::cout << mixcert::report_json(report).dump(2) << '\n';
            } else {
                mixcert::write_report_text(report, std::cout);
            }
        } else if (*series) {
            const auto report = mixcert::analyze(p, analyze_options(n_max, "both"));
            if (output.empty()) {
                mixcert::write_series_csv(report, std::cout);
            } else {
                mixcert::emit_series_csv(report, output);
            }
        } else if (*simulate) {
            if (x1 < 1 || x2 < 1) throw mixcert::IndexOutOfRange(0, p.size());
            const mixcert::SimConfig cfg{trials, horizon, seed};
            const auto rep = mixcert::simulate_command(p, x1 - 1, x2 - 1, cfg, threads);
            if (format == "json") {
                std::cout << mixcert::simulation_json(rep).dump(2) << '\n';
            } else {
                mixcert::write_simulation_text(rep, std::cout);
            }
        }
    } catch (const mixcert::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}
