#include <exception>
#include <stdexcept>
#include <string>

#include "otsim/harness.hpp"

namespace otsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Retry slot reserved for the random-guess probe stream.
constexpr std::uint64_t kProbeSlot = ~std::uint64_t{0};

std::optional<StateFamily> family_of(const IndexRecord& rec)
{
    return rec.alice_observation ? rec.alice_observation : rec.family_prepared;
}

std::size_t count_prime(const Transcript& t, const std::vector<std::size_t>& set)
{
    std::size_t n = 0;
    for (std::size_t i : set) {
        const auto f = family_of(t.records[i]);
        if (f && f->tag == FamilyTag::Prime) ++n;
    }
    return n;
}

RateEstimate estimate(std::size_t successes, std::size_t count)
{
    RateEstimate r;
    r.successes = successes;
    r.count = count;
    r.value = static_cast<double>(successes) / static_cast<double>(count);
    r.ci = wilson_interval(successes, count);
    return r;
}

std::optional<RateEstimate> maybe_estimate(std::size_t successes, std::size_t count)
{
    if (count == 0) return std::nullopt;
    return estimate(successes, count);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t retry)
{
    return splitmix64(splitmix64(splitmix64(master) ^ trial) ^ retry);
}

TrialOutcome summarize(const Transcript& t, Rng& probe)
{
    if (t.status == SessionStatus::InsufficientPool) {
        throw std::invalid_argument("cannot summarize a session that did not form its sets");
    }
    TrialOutcome out;
    out.aborted = t.aborted;
    for (const auto& rec : t.records) {
        if (rec.test_passed) {
            ++out.tests_run;
            if (*rec.test_passed) ++out.tests_passed;
        }
    }
    if (t.aborted) return out;

    for (const auto& rec : t.records) {
        if (!rec.e_outcome) continue;
        const auto f = family_of(rec);
        if (!f) continue;
        const auto slot = static_cast<std::size_t>(f->tag);
        ++out.e1_count[slot];
        if (*rec.e_outcome == 1) ++out.e1_ones[slot];
    }

    const int choice = t.bob_choice.value();
    const int guess = t.alice_guess ? *t.alice_guess
                                    : std::uniform_int_distribution<int>(0, 1)(probe);
    out.guessed = true;
    out.guess_correct = guess == choice;

    const auto& rc = choice == 0 ? t.r0 : t.r1;
    const auto& other = choice == 0 ? t.r1 : t.r0;
    out.prime_in_rc = count_prime(t, rc);
    out.prime_in_other = count_prime(t, other);
    return out;
}

TrialOutcome run_trial(const ProtocolParams& params, std::size_t trial_index)
{
    for (std::size_t retry = 0; retry < kMaxRetries; ++retry) {
        Rng rng(derive_stream_seed(params.seed, trial_index, retry));
        Transcript t = run_session(params, rng);
        if (t.status == SessionStatus::InsufficientPool) continue;
        Rng probe(derive_stream_seed(params.seed, trial_index, kProbeSlot));
        TrialOutcome out = summarize(t, probe);
        out.retries = retry;
        return out;
    }
    throw std::runtime_error("trial " + std::to_string(trial_index) + " could not form both sets in " +
                             std::to_string(kMaxRetries) + " attempts");
}

RunStats fold_outcomes(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes)
{
    RunStats s;
    s.config = config;
    s.trials_completed = outcomes.size();

    std::size_t aborted = 0;
    std::size_t guessed = 0;
    std::size_t correct = 0;
    std::size_t ones[3] = {0, 0, 0};
    std::size_t counts[3] = {0, 0, 0};
    std::size_t prime_rc = 0;
    std::size_t prime_other = 0;
    for (const auto& o : outcomes) {
        s.retried_sessions += o.retries;
        s.tests_run += o.tests_run;
        s.tests_passed += o.tests_passed;
        if (o.aborted) {
            ++aborted;
            continue;
        }
        if (o.guessed) {
            ++guessed;
            if (o.guess_correct) ++correct;
        }
        for (int k = 0; k < 3; ++k) {
            ones[k] += o.e1_ones[k];
            counts[k] += o.e1_count[k];
        }
        prime_rc += o.prime_in_rc;
        prime_other += o.prime_in_other;
    }

    if (!outcomes.empty()) s.abort_rate = estimate(aborted, outcomes.size());
    s.guess_accuracy = maybe_estimate(correct, guessed);
    s.e1_honest = maybe_estimate(ones[0], counts[0]);
    s.e1_prime = maybe_estimate(ones[1], counts[1]);
    s.e1_double_prime = maybe_estimate(ones[2], counts[2]);
    const std::size_t formed = outcomes.size() - aborted;
    if (formed > 0) {
        const double slots = static_cast<double>(formed * config.params.set_size);
        s.prime_fraction_rc = static_cast<double>(prime_rc) / slots;
        s.prime_fraction_other = static_cast<double>(prime_other) / slots;
    }
    return s;
}

namespace {

void check_config(const ExperimentConfig& config)
{
    if (config.trials == 0) throw std::invalid_argument("trials must be at least 1");
    config.params.validate();
}

}  // namespace

RunStats run_experiment_serial(const ExperimentConfig& config)
{
    check_config(config);
    std::vector<TrialOutcome> outcomes(config.trials);
    for (std::size_t i = 0; i < config.trials; ++i) outcomes[i] = run_trial(config.params, i);
    return fold_outcomes(config, outcomes);
}

RunStats run_experiment(const ExperimentConfig& config)
{
    check_config(config);
    std::vector<TrialOutcome> outcomes(config.trials);
    const auto n = static_cast<std::int64_t>(config.trials);
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            outcomes[static_cast<std::size_t>(i)] =
                run_trial(config.params, static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(otsim_trial_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return fold_outcomes(config, outcomes);
}

}  // namespace otsim
