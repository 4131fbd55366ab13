#pragma once

// Monte Carlo experiment runner, exact oracles and report emission.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otsim/protocol.hpp"

namespace otsim {

// ---------------------------------------------------------------- oracles

inline constexpr std::size_t kDefaultMaxSetSize = 10'000;

/// P(Prime | e=1) for attack states; 3/4 for every beta.
double prime_given_e1(Beta beta);
/// P(Prime | e=0) for attack states, (1 - 3beta/4) / (2 - beta).
double prime_given_e0(Beta beta);

/// Probability that counting Prime indices picks the right set:
/// P(X > Y) + P(X = Y)/2 with X ~ Bin(m, p1), Y ~ Bin(m, p0), by exact
/// summation over the two pmfs. Throws std::invalid_argument when m is zero
/// or above max_set_size.
double analytic_accuracy(double p1, double p0, std::size_t m,
                         std::size_t max_set_size = kDefaultMaxSetSize);
double analytic_accuracy(Beta beta, std::size_t m,
                         std::size_t max_set_size = kDefaultMaxSetSize);

struct Interval {
    double lo;
    double hi;
};

/// Wilson score interval for successes out of n trials.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

// ------------------------------------------------------------- experiment

enum class OutputFormat : std::uint8_t { Json, Csv };

struct ExperimentConfig {
    ProtocolParams params;
    std::size_t trials = 1;
    OutputFormat output_format = OutputFormat::Json;
    std::optional<std::string> output_path;
};

struct RateEstimate {
    std::size_t successes = 0;
    std::size_t count = 0;
    double value = 0.0;
    Interval ci{0.0, 1.0};
};

/// Folded per-trial results. guess_accuracy is over non-aborted trials;
/// for honest Alice it is the score of a uniform random-guess probe.
struct RunStats {
    ExperimentConfig config;
    std::size_t trials_completed = 0;
    std::size_t retried_sessions = 0;
    RateEstimate abort_rate;
    std::optional<RateEstimate> guess_accuracy;
    std::optional<RateEstimate> e1_honest;
    std::optional<RateEstimate> e1_prime;
    std::optional<RateEstimate> e1_double_prime;
    std::optional<double> prime_fraction_rc;
    std::optional<double> prime_fraction_other;
    // Not part of the report; kept for test-pass analysis.
    std::size_t tests_run = 0;
    std::size_t tests_passed = 0;
};

/// Stateless (seed, trial, retry) -> stream seed mix.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t retry);

inline constexpr std::size_t kMaxRetries = 1000;

/// Everything one trial contributes to RunStats, in integer counts.
struct TrialOutcome {
    std::size_t retries = 0;
    bool aborted = false;
    std::size_t tests_run = 0;
    std::size_t tests_passed = 0;
    bool guessed = false;
    bool guess_correct = false;
    std::size_t e1_ones[3] = {0, 0, 0};  // indexed by FamilyTag
    std::size_t e1_count[3] = {0, 0, 0};
    std::size_t prime_in_rc = 0;
    std::size_t prime_in_other = 0;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Runs one trial, retrying on insufficient pools with fresh derived streams.
/// Throws std::runtime_error after kMaxRetries failed attempts.
TrialOutcome run_trial(const ProtocolParams& params, std::size_t trial_index);

/// Reduces a transcript to counts. `probe` supplies the random guess for
/// strategies that never guess.
TrialOutcome summarize(const Transcript& t, Rng& probe);

RunStats fold_outcomes(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes);

/// OpenMP over trials; identical output to run_experiment_serial.
RunStats run_experiment(const ExperimentConfig& config);
/// Single-threaded reference.
RunStats run_experiment_serial(const ExperimentConfig& config);

// ----------------------------------------------------------- verification

struct BetaCheck {
    double beta;
    double reduced_state_distance;
    double fidelity_deficit;
    bool ordering_holds;
};

struct VerificationReport {
    std::vector<BetaCheck> checks;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kReducedStateBound = 1e-12;
inline constexpr double kFidelityDeficitBound = 1e-10;

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_beta_grid();

VerificationReport verify_identities(const std::vector<double>& beta_grid);

// ---------------------------------------------------------------- reports

/// Fixed key order, 12 significant digits, trailing newline.
std::string emit_report(const RunStats& stats, OutputFormat format);

/// Writes text to path; throws std::runtime_error if it cannot.
void write_text_file(const std::string& path, const std::string& text);

std::string format_number(double value);

}  // namespace otsim
