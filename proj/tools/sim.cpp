// sim: command-line driver.
//
//   sim run --mode {honest|epr|naive} --beta B --n N --test-frac T
//           --set-size M --trials K --seed S [--format {json|csv}] [--out PATH]
//   sim verify [--beta-grid b1,b2,...]
//   sim oracle --beta B --set-size M
//
// Exit codes: 0 success, 1 verification/invariant violation, 2 bad arguments.

#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otsim/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitBadArgs = 2;

struct RunArgs {
    std::string mode;
    double beta = 0.0;
    std::size_t n = 0;
    double test_frac = 0.0;
    std::size_t set_size = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;
};

int do_run(const RunArgs& a)
{
    otsim::ExperimentConfig config;
    try {
        const auto mode = otsim::parse_mode(a.mode);
        if (!mode) throw std::invalid_argument("unknown mode " + a.mode);
        config.params.beta = otsim::Beta(a.beta);
        config.params.n_states = a.n;
        config.params.test_fraction = a.test_frac;
        config.params.set_size = a.set_size;
        config.params.mode = *mode;
        config.params.seed = a.seed;
        config.trials = a.trials;
        config.output_format = a.format == "csv" ? otsim::OutputFormat::Csv
                                                 : otsim::OutputFormat::Json;
        if (!a.out.empty()) config.output_path = a.out;
        config.params.validate();
        if (config.trials == 0) throw std::invalid_argument("trials must be at least 1");
    } catch (const std::invalid_argument& e) {
        std::cerr << "sim run: " << e.what() << '\n';
        return kExitBadArgs;
    }

    otsim::RunStats stats;
    try {
        stats = otsim::run_experiment(config);
    } catch (const std::runtime_error& e) {
        // Parameters that almost never yield two full sets.
        std::cerr << "sim run: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const std::logic_error& e) {
        std::cerr << "sim run: invariant violated: " << e.what() << '\n';
        return kExitViolation;
    }

    const std::string text = otsim::emit_report(stats, config.output_format);
    if (config.output_path) {
        try {
            otsim::write_text_file(*config.output_path, text);
        } catch (const std::runtime_error& e) {
            std::cerr << "sim run: " << e.what() << '\n';
            return kExitBadArgs;
        }
    } else {
        std::cout << text;
    }
    return kExitOk;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw std::invalid_argument("bad grid value '" + item + "'");
        }
        grid.push_back(v);
        start = comma + 1;
    }
    return grid;
}

int do_verify(const std::string& grid_text)
{
    std::vector<double> grid;
    otsim::VerificationReport report;
    try {
        grid = grid_text.empty() ? otsim::default_beta_grid() : parse_grid(grid_text);
        report = otsim::verify_identities(grid);
    } catch (const std::invalid_argument& e) {
        std::cerr << "sim verify: " << e.what() << '\n';
        return kExitBadArgs;
    }

    double worst_distance = 0.0;
    double worst_deficit = 0.0;
    for (const auto& c : report.checks) {
        worst_distance = std::max(worst_distance, c.reduced_state_distance);
        worst_deficit = std::max(worst_deficit, c.fidelity_deficit);
    }
    std::cout << "checked " << report.checks.size() << " beta values\n"
              << "max reduced-state distance: " << otsim::format_number(worst_distance) << '\n'
              << "max correction fidelity deficit: " << otsim::format_number(worst_deficit)
              << '\n';
    for (const auto& v : report.violations) std::cout << "VIOLATION " << v << '\n';
    std::cout << (report.ok() ? "OK" : "FAILED") << '\n';
    return report.ok() ? kExitOk : kExitViolation;
}

int do_oracle(double beta, std::size_t set_size)
{
    try {
        std::cout << otsim::format_number(otsim::analytic_accuracy(otsim::Beta(beta), set_size))
                  << '\n';
    } catch (const std::invalid_argument& e) {
        std::cerr << "sim oracle: " << e.what() << '\n';
        return kExitBadArgs;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"EPR attack simulator for a cheat-sensitive 2-1 oblivious transfer"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Monte Carlo sessions, report on stdout or --out");
    run->add_option("--mode", run_args.mode, "Alice strategy")
        ->required()
        ->check(CLI::IsMember({"honest", "epr", "naive"}));
    run->add_option("--beta", run_args.beta, "bias parameter in (0,1]")->required();
    run->add_option("--n", run_args.n, "states per session")->required();
    run->add_option("--test-frac", run_args.test_frac, "per-index test probability")->required();
    run->add_option("--set-size", run_args.set_size, "size of each announced set")->required();
    run->add_option("--trials", run_args.trials, "number of sessions")->required();
    run->add_option("--seed", run_args.seed, "master seed")->required();
    run->add_option("--format", run_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--out", run_args.out, "write the report here instead of stdout");

    std::string grid_text;
    auto* verify = app.add_subcommand("verify", "check the state identities on a beta grid");
    verify->add_option("--beta-grid", grid_text, "comma-separated beta values");

    double oracle_beta = 0.0;
    std::size_t oracle_m = 0;
    auto* oracle = app.add_subcommand("oracle", "exact guess accuracy of the attack");
    oracle->add_option("--beta", oracle_beta, "bias parameter in (0,1]")->required();
    oracle->add_option("--set-size", oracle_m, "size of each announced set")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadArgs;
    }

    if (*run) return do_run(run_args);
    if (*verify) return do_verify(grid_text);
    if (*oracle) return do_oracle(oracle_beta, oracle_m);
    return kExitBadArgs;
}
