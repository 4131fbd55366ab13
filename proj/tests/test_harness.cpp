#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "otsim/harness.hpp"
#include "test_helpers.hpp"

using namespace otsim;
using otsim::testing::binomial_sigma;

namespace {

// Independent oracle: walk every Bernoulli pattern of the 2m set members.
double brute_force_accuracy(double p1, double p0, std::size_t m)
{
    double acc = 0.0;
    const std::size_t patterns = std::size_t{1} << (2 * m);
    for (std::size_t bits = 0; bits < patterns; ++bits) {
        double weight = 1.0;
        int x = 0;
        int y = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const bool a = (bits >> i) & 1u;
            const bool b = (bits >> (m + i)) & 1u;
            weight *= a ? p1 : 1.0 - p1;
            weight *= b ? p0 : 1.0 - p0;
            x += a;
            y += b;
        }
        acc += weight * (x > y ? 1.0 : x == y ? 0.5 : 0.0);
    }
    return acc;
}

ExperimentConfig config_for(AliceMode mode, double beta, std::size_t n, double test_frac,
                            std::size_t m, std::size_t trials, std::uint64_t seed)
{
    ExperimentConfig c;
    c.params.beta = Beta(beta);
    c.params.n_states = n;
    c.params.test_fraction = test_frac;
    c.params.set_size = m;
    c.params.mode = mode;
    c.params.seed = seed;
    c.trials = trials;
    return c;
}

// Enough states that both pools comfortably hold m indices.
std::size_t states_for(double beta, std::size_t m, double test_frac)
{
    const double e1_rate = beta / 2.0;
    return static_cast<std::size_t>(std::ceil((2.0 * m / e1_rate + 40.0) / (1.0 - test_frac)));
}

}  // namespace

TEST_CASE("analytic_accuracy agrees with brute-force enumeration")
{
    for (double beta : {0.05, 0.25, 0.5, 0.75, 1.0}) {
        const double p1 = prime_given_e1(Beta(beta));
        const double p0 = prime_given_e0(Beta(beta));
        CHECK(p1 == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(p0 == doctest::Approx((1 - 0.75 * beta) / (2 - beta)).epsilon(1e-15));
        for (std::size_t m = 1; m <= 8; ++m) {
            CHECK(std::abs(analytic_accuracy(Beta(beta), m) - brute_force_accuracy(p1, p0, m)) <=
                  1e-12);
        }
    }
    for (int i = 0; i < 50; ++i) {
        const double p1 = (i % 10) / 9.0;
        const double p0 = ((i * 7) % 11) / 10.0;
        CHECK(std::abs(analytic_accuracy(p1, p0, 5) - brute_force_accuracy(p1, p0, 5)) <= 1e-12);
    }
}

TEST_CASE("analytic_accuracy frozen values")
{
    // Exact rational evaluation, tests/oracles/oracle_values.py
    CHECK(analytic_accuracy(Beta(0.5), 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(analytic_accuracy(Beta(0.25), 1) == doctest::Approx(0.6428571428571429).epsilon(1e-13));
    CHECK(analytic_accuracy(Beta(0.25), 25) == doctest::Approx(0.9824891127260023).epsilon(1e-12));
    CHECK(analytic_accuracy(Beta(0.5), 10) == doctest::Approx(0.9382736329919743).epsilon(1e-12));
    CHECK(analytic_accuracy(Beta(0.5), 25) == doctest::Approx(0.9929587659545979).epsilon(1e-12));
    CHECK(analytic_accuracy(Beta(0.75), 5) == doctest::Approx(0.902495341796875).epsilon(1e-12));
    CHECK(analytic_accuracy(Beta(0.75), 25) == doctest::Approx(0.9984467776833664).epsilon(1e-12));
    CHECK(analytic_accuracy(Beta(0.5), 200) > 0.9999);
    CHECK(analytic_accuracy(0.3, 0.3, 17) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("analytic_accuracy bounds and monotonicity")
{
    CHECK_THROWS_AS(analytic_accuracy(Beta(0.5), 0), std::invalid_argument);
    CHECK_THROWS_AS(analytic_accuracy(Beta(0.5), 10'001), std::invalid_argument);
    CHECK_NOTHROW(analytic_accuracy(Beta(0.5), 10'000));
    CHECK_THROWS_AS(analytic_accuracy(Beta(0.5), 20, 10), std::invalid_argument);
    CHECK_THROWS_AS(analytic_accuracy(1.2, 0.5, 3), std::invalid_argument);

    for (double beta : {0.1, 0.5, 0.9}) {
        double prev = 0.0;
        for (std::size_t m = 1; m <= 300; ++m) {
            const double a = analytic_accuracy(Beta(beta), m);
            CHECK(a >= prev - 1e-12);
            prev = a;
        }
    }
    for (std::size_t m : {1u, 3u, 10u}) {
        double prev = 0.0;
        for (int gap = 0; gap <= 50; ++gap) {
            const double a = analytic_accuracy(0.5 + gap / 100.0, 0.5, m);
            CHECK(a >= prev - 1e-12);
            prev = a;
        }
    }
}

TEST_CASE("wilson_interval")
{
    CHECK(wilson_interval(0, 30).lo == 0.0);
    CHECK(wilson_interval(30, 30).hi == 1.0);
    const Interval mid = wilson_interval(50, 100, 1.96);
    CHECK(mid.lo == doctest::Approx(0.40382982859014716).epsilon(1e-12));
    CHECK(mid.hi == doctest::Approx(0.5961701714098528).epsilon(1e-12));
    for (std::size_t n = 1; n <= 60; ++n) {
        for (std::size_t s = 0; s <= n; ++s) {
            const Interval ci = wilson_interval(s, n);
            const double p = static_cast<double>(s) / static_cast<double>(n);
            CHECK(ci.lo <= p);
            CHECK(p <= ci.hi);
            CHECK(ci.lo >= 0.0);
            CHECK(ci.hi <= 1.0);
        }
    }
    CHECK_THROWS_AS(wilson_interval(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
}

TEST_CASE("stream derivation")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        for (std::uint64_t retry = 0; retry < 10; ++retry) {
            seen.insert(derive_stream_seed(42, trial, retry));
        }
    }
    CHECK(seen.size() == 1000);
    CHECK(derive_stream_seed(1, 2, 3) == derive_stream_seed(1, 2, 3));
    CHECK(derive_stream_seed(1, 2, 3) != derive_stream_seed(2, 2, 3));
}

TEST_CASE("run_experiment basics")
{
    SUBCASE("honest completeness and random-guess baseline")
    {
        const RunStats s = run_experiment(config_for(AliceMode::Honest, 0.5, 100, 0.3, 5, 2000, 9));
        CHECK(s.trials_completed == 2000);
        CHECK(s.abort_rate.value == 0.0);
        CHECK(s.abort_rate.successes == 0);
        REQUIRE(s.guess_accuracy.has_value());
        CHECK(std::abs(s.guess_accuracy->value - 0.5) <= 3.0 * binomial_sigma(0.5, 2000));
        CHECK(s.e1_honest.has_value());
        CHECK_FALSE(s.e1_prime.has_value());
        CHECK(*s.prime_fraction_rc == 0.0);
        CHECK(s.tests_passed == s.tests_run);
    }

    SUBCASE("EPR single-index sets")
    {
        const RunStats s = run_experiment(config_for(AliceMode::Epr, 0.5, 40, 0.25, 1, 3000, 5));
        CHECK(s.abort_rate.value == 0.0);
        REQUIRE(s.guess_accuracy.has_value());
        CHECK(std::abs(s.guess_accuracy->value - 2.0 / 3.0) <=
              3.0 * binomial_sigma(2.0 / 3.0, s.guess_accuracy->count));
        CHECK(s.guess_accuracy->ci.lo <= s.guess_accuracy->value);
        CHECK(s.guess_accuracy->value <= s.guess_accuracy->ci.hi);
    }

    SUBCASE("retries are counted")
    {
        // Pool of e=1 indices averages 5 for set size 4, so retries happen.
        const RunStats s = run_experiment(config_for(AliceMode::Epr, 0.5, 20, 0.0, 4, 300, 2));
        CHECK(s.retried_sessions > 0);
        CHECK(s.trials_completed == 300);
    }

    SUBCASE("invalid configs")
    {
        CHECK_THROWS_AS(run_experiment(config_for(AliceMode::Epr, 0.5, 20, 0.0, 4, 0, 2)),
                        std::invalid_argument);
        CHECK_THROWS_AS(run_experiment(config_for(AliceMode::Epr, 0.5, 20, 0.5, 6, 10, 2)),
                        std::invalid_argument);
    }

    SUBCASE("hopeless pools exhaust retries loudly")
    {
        CHECK_THROWS_AS(run_experiment(config_for(AliceMode::Honest, 1e-9, 20, 0.0, 1, 2, 2)),
                        std::runtime_error);
    }
}

TEST_CASE("Monte Carlo accuracy matches the exact oracle")
{
    for (double beta : {0.25, 0.5, 0.75}) {
        for (std::size_t m : {1u, 5u, 25u}) {
            CAPTURE(beta);
            CAPTURE(m);
            const RunStats s = run_experiment(
                config_for(AliceMode::Epr, beta, states_for(beta, m, 0.2), 0.2, m, 2000, 77));
            REQUIRE(s.guess_accuracy.has_value());
            const double exact = analytic_accuracy(Beta(beta), m);
            CHECK(std::abs(s.guess_accuracy->value - exact) <=
                  3.0 * binomial_sigma(exact, s.guess_accuracy->count));
        }
    }
}

TEST_CASE("leakage grows with set size")
{
    double prev_exact = 0.0;
    for (std::size_t m : {1u, 2u, 5u, 10u, 25u}) {
        const double exact = analytic_accuracy(Beta(0.5), m);
        CHECK(exact >= prev_exact);
        prev_exact = exact;
        const RunStats s = run_experiment(
            config_for(AliceMode::Epr, 0.5, states_for(0.5, m, 0.25), 0.25, m, 1500, 1234 + m));
        CHECK(std::abs(s.guess_accuracy->value - exact) <=
              3.0 * binomial_sigma(exact, s.guess_accuracy->count));
    }
}

TEST_CASE("Wilson interval coverage over repeated small experiments")
{
    const double truth = 2.0 / 3.0;
    int covered = 0;
    constexpr int kReps = 200;
    for (int rep = 0; rep < kReps; ++rep) {
        const RunStats s = run_experiment(
            config_for(AliceMode::Epr, 0.5, 30, 0.2, 1, 100, 5000 + static_cast<std::uint64_t>(rep)));
        const Interval ci = s.guess_accuracy->ci;
        covered += (ci.lo <= truth && truth <= ci.hi) ? 1 : 0;
    }
    CHECK(covered >= 180);
}

TEST_CASE("verify_identities")
{
    const VerificationReport r = verify_identities(default_beta_grid());
    CHECK(r.checks.size() == 99);
    CHECK(r.ok());
    for (const auto& c : r.checks) {
        CHECK(c.reduced_state_distance <= 1e-12);
        CHECK(c.fidelity_deficit <= 1e-10);
        CHECK(c.ordering_holds);
    }
    CHECK(verify_identities({1.0}).ok());
    CHECK(verify_identities({1e-8, 0.333, 0.999999}).ok());
    CHECK_THROWS_AS(verify_identities({}), std::invalid_argument);
    CHECK_THROWS_AS(verify_identities({1.5}), std::invalid_argument);
}

TEST_CASE("emit_report")
{
    ExperimentConfig c = config_for(AliceMode::Epr, 0.5, 100, 0.25, 5, 200, 31);
    const RunStats s = run_experiment(c);

    SUBCASE("JSON key set and round trip")
    {
        const std::string text = emit_report(s, OutputFormat::Json);
        const auto j = nlohmann::json::parse(text);
        std::set<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
        const std::set<std::string> expected = {
            "config",          "seed",           "trials_completed", "retried_sessions",
            "abort_rate",      "abort_rate_ci",  "guess_accuracy",   "guess_accuracy_ci",
            "e1_freq_honest",  "e1_freq_prime",  "e1_freq_double_prime",
            "prime_fraction_rc", "prime_fraction_other"};
        CHECK(keys == expected);

        auto printed = [](double v) { return std::stod(format_number(v)); };
        CHECK(j["seed"].get<std::uint64_t>() == 31);
        CHECK(j["trials_completed"].get<std::size_t>() == s.trials_completed);
        CHECK(j["retried_sessions"].get<std::size_t>() == s.retried_sessions);
        CHECK(j["abort_rate"].get<double>() == printed(s.abort_rate.value));
        CHECK(j["guess_accuracy"].get<double>() == printed(s.guess_accuracy->value));
        CHECK(j["guess_accuracy_ci"][0].get<double>() == printed(s.guess_accuracy->ci.lo));
        CHECK(j["guess_accuracy_ci"][1].get<double>() == printed(s.guess_accuracy->ci.hi));
        CHECK(j["e1_freq_prime"]["value"].get<double>() == printed(s.e1_prime->value));
        CHECK(j["e1_freq_double_prime"]["ci"][1].get<double>() ==
              printed(s.e1_double_prime->ci.hi));
        CHECK(j["e1_freq_honest"].is_null());
        CHECK(j["prime_fraction_rc"].get<double>() == printed(*s.prime_fraction_rc));
        CHECK(j["config"]["mode"] == "epr");
        CHECK(j["config"]["beta"].get<double>() == 0.5);
        CHECK(j["config"]["set_size"].get<std::size_t>() == 5);

        CHECK(emit_report(run_experiment(c), OutputFormat::Json) == text);
    }

    SUBCASE("CSV has one header and one data row")
    {
        const std::string text = emit_report(s, OutputFormat::Csv);
        std::istringstream in(text);
        std::string header;
        std::string row;
        std::string extra;
        REQUIRE(std::getline(in, header));
        REQUIRE(std::getline(in, row));
        CHECK_FALSE(std::getline(in, extra));
        CHECK(std::count(header.begin(), header.end(), ',') ==
              std::count(row.begin(), row.end(), ','));
        CHECK(header.rfind("mode,beta,n,", 0) == 0);

        ExperimentConfig other = config_for(AliceMode::Honest, 0.2, 300, 0.1, 3, 20, 8);
        const std::string other_text = emit_report(run_experiment(other), OutputFormat::Csv);
        CHECK(other_text.substr(0, other_text.find('\n')) == header);
    }

    SUBCASE("numbers use 12 significant digits")
    {
        CHECK(format_number(2.0 / 3.0) == "0.666666666667");
        CHECK(format_number(0.0) == "0");
        CHECK(format_number(1.0) == "1");
    }

    SUBCASE("unwritable path")
    {
        CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x/report.json", "{}"), std::runtime_error);
        const auto path = std::filesystem::temp_directory_path() / "otsim_report_test.json";
        write_text_file(path.string(), "{}\n");
        CHECK(std::filesystem::file_size(path) == 3);
        std::filesystem::remove(path);
    }
}
