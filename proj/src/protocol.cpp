#include "otsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>

namespace otsim {

std::string_view to_string(AliceMode mode)
{
    switch (mode) {
    case AliceMode::Honest: return "honest";
    case AliceMode::Epr: return "epr";
    case AliceMode::NaiveCheat: return "naive";
    }
    return "unknown";
}

std::optional<AliceMode> parse_mode(std::string_view text)
{
    if (text == "honest") return AliceMode::Honest;
    if (text == "epr") return AliceMode::Epr;
    if (text == "naive") return AliceMode::NaiveCheat;
    return std::nullopt;
}

void ProtocolParams::validate() const
{
    if (n_states == 0) throw std::invalid_argument("n_states must be positive");
    if (set_size == 0) throw std::invalid_argument("set_size must be positive");
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in [0, 1)");
    }
    const double expected_untested = static_cast<double>(n_states) * (1.0 - test_fraction);
    if (expected_untested < 2.0 * static_cast<double>(set_size)) {
        throw std::invalid_argument("expected untested count " +
                                    std::to_string(expected_untested) +
                                    " is below 2 * set_size");
    }
}

Ket epr_prepare(Beta beta)
{
    return make_phi_prime(beta);
}

RevealedState epr_answer_test(const Ket& joint, const UnitaryMatrix& correction, Rng& rng)
{
    const Ket corrected = apply_on_subsystem(correction, 0, joint);
    MeasurementResult m = measure_subsystem(corrected, 0, rng);
    if (m.outcome > 1) {
        throw std::logic_error("corrected attack state measured outside the honest levels");
    }
    return {static_cast<int>(m.outcome), std::move(m.post_state)};
}

RevealedState epr_answer_test(const Ket& joint, Beta beta, Rng& rng)
{
    return epr_answer_test(joint, correction_unitary(beta), rng);
}

Observation epr_observe(const Ket& joint, Rng& rng)
{
    MeasurementResult m = measure_subsystem(joint, 0, rng);
    const FamilyTag tag = m.outcome < 2 ? FamilyTag::Prime : FamilyTag::DoublePrime;
    return {{tag, static_cast<int>(m.outcome % 2)}, std::move(m.post_state)};
}

bool bob_test(const Delivery& delivery, int revealed_bit, Beta beta, Rng& rng)
{
    if (revealed_bit != 0 && revealed_bit != 1) {
        throw std::invalid_argument("revealed bit must be 0 or 1");
    }
    const Ket reference = make_state({FamilyTag::Honest, revealed_bit}, beta);
    return projective_test(delivery.joint, delivery.bob_subsystem, reference, rng).pass;
}

namespace {

std::vector<std::size_t> sample_sorted(const std::vector<std::size_t>& pool, std::size_t count,
                                       Rng& rng)
{
    std::vector<std::size_t> out;
    out.reserve(count);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), count, rng);
    return out;
}

int uniform_bit(Rng& rng)
{
    return std::uniform_int_distribution<int>(0, 1)(rng);
}

}  // namespace

std::optional<Partition> bob_partition(const std::map<std::size_t, int>& e_outcomes, int choice,
                                       std::size_t set_size, Rng& rng)
{
    if (choice != 0 && choice != 1) throw std::invalid_argument("choice bit must be 0 or 1");
    std::vector<std::size_t> ones;
    std::vector<std::size_t> zeros;
    for (const auto& [index, e] : e_outcomes) (e == 1 ? ones : zeros).push_back(index);
    if (ones.size() < set_size || zeros.size() < set_size) return std::nullopt;

    std::vector<std::size_t> chosen = sample_sorted(ones, set_size, rng);
    std::vector<std::size_t> other = sample_sorted(zeros, set_size, rng);
    if (choice == 0) return Partition{std::move(chosen), std::move(other)};
    return Partition{std::move(other), std::move(chosen)};
}

int alice_infer_choice(const std::map<std::size_t, StateFamily>& observations,
                       std::span<const std::size_t> r0, std::span<const std::size_t> r1,
                       Rng& rng)
{
    auto prime_count = [&](std::span<const std::size_t> set) {
        std::size_t count = 0;
        for (std::size_t index : set) {
            const auto it = observations.find(index);
            if (it == observations.end()) {
                throw std::invalid_argument("no observation for index " + std::to_string(index));
            }
            if (it->second.tag == FamilyTag::Prime) ++count;
        }
        return count;
    };
    const std::size_t c0 = prime_count(r0);
    const std::size_t c1 = prime_count(r1);
    if (c0 > c1) return 0;
    if (c1 > c0) return 1;
    return uniform_bit(rng);
}

Transcript run_session(const ProtocolParams& params, Rng& rng)
{
    params.validate();
    const std::unique_ptr<AliceStrategy> alice = make_strategy(params.mode, params.beta);

    Transcript t;
    t.records.resize(params.n_states);
    std::vector<Delivery> deliveries;
    deliveries.reserve(params.n_states);

    for (std::size_t i = 0; i < params.n_states; ++i) {
        Preparation p = alice->prepare(i, rng);
        t.records[i].index = i;
        t.records[i].family_prepared = p.family;
        deliveries.push_back(std::move(p.delivery));
    }

    std::bernoulli_distribution flag(params.test_fraction);
    for (auto& rec : t.records) rec.tested = flag(rng);

    for (auto& rec : t.records) {
        if (!rec.tested) continue;
        Delivery& d = deliveries[rec.index];
        const int bit = alice->answer_test(rec.index, d, rng);
        rec.revealed_bit = bit;
        rec.test_passed = bob_test(d, bit, params.beta, rng);
        if (!*rec.test_passed) {
            t.aborted = true;
            t.status = SessionStatus::Aborted;
            return t;
        }
    }

    std::map<std::size_t, int> e_outcomes;
    for (auto& rec : t.records) {
        if (rec.tested) continue;
        Delivery& d = deliveries[rec.index];
        MeasurementResult m = measure_subsystem(d.joint, d.bob_subsystem, rng);
        d.joint = std::move(m.post_state);
        rec.e_outcome = static_cast<int>(m.outcome);
        e_outcomes.emplace(rec.index, *rec.e_outcome);
        rec.alice_observation = alice->observe(rec.index, d, rng);
    }

    const int choice = uniform_bit(rng);
    t.bob_choice = choice;
    std::optional<Partition> sets = bob_partition(e_outcomes, choice, params.set_size, rng);
    if (!sets) {
        t.status = SessionStatus::InsufficientPool;
        return t;
    }
    t.r0 = std::move(sets->r0);
    t.r1 = std::move(sets->r1);
    t.alice_guess = alice->guess_choice(t.r0, t.r1, rng);
    return t;
}

}  // namespace otsim
