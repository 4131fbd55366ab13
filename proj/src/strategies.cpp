#include <map>
#include <stdexcept>

#include "otsim/protocol.hpp"

namespace otsim {

namespace {

int uniform_bit(Rng& rng)
{
    return std::uniform_int_distribution<int>(0, 1)(rng);
}

// Sends |psi_b> for a fresh uniform b and reveals b when asked.
class HonestAlice final : public AliceStrategy {
public:
    explicit HonestAlice(Beta beta)
        : states_{make_state({FamilyTag::Honest, 0}, beta), make_state({FamilyTag::Honest, 1}, beta)}
    {
    }

    Preparation prepare(std::size_t index, Rng& rng) override
    {
        const StateFamily family{FamilyTag::Honest, uniform_bit(rng)};
        bits_[index] = family.sign_bit;
        return {{states_[family.sign_bit], 0}, family};
    }

    int answer_test(std::size_t index, Delivery&, Rng&) override { return bits_.at(index); }

    std::optional<StateFamily> observe(std::size_t, Delivery&, Rng&) override
    {
        return std::nullopt;
    }

    std::optional<int> guess_choice(std::span<const std::size_t>, std::span<const std::size_t>,
                                    Rng&) override
    {
        return std::nullopt;
    }

private:
    Ket states_[2];
    std::map<std::size_t, int> bits_;
};

// Entangles every index with a 4-level register. Tested indices are steered
// back to the honest purification and answered honestly; untested ones are
// measured to learn which family Bob holds.
class EprAlice final : public AliceStrategy {
public:
    explicit EprAlice(Beta beta) : attack_state_(epr_prepare(beta)), correction_(correction_unitary(beta))
    {
    }

    Preparation prepare(std::size_t, Rng&) override
    {
        return {{attack_state_, 1}, std::nullopt};
    }

    int answer_test(std::size_t, Delivery& delivery, Rng& rng) override
    {
        RevealedState r = epr_answer_test(delivery.joint, correction_, rng);
        delivery.joint = std::move(r.joint);
        return r.revealed_bit;
    }

    std::optional<StateFamily> observe(std::size_t index, Delivery& delivery, Rng& rng) override
    {
        Observation o = epr_observe(delivery.joint, rng);
        delivery.joint = std::move(o.joint);
        observations_.emplace(index, o.family);
        return o.family;
    }

    std::optional<int> guess_choice(std::span<const std::size_t> r0,
                                    std::span<const std::size_t> r1, Rng& rng) override
    {
        return alice_infer_choice(observations_, r0, r1, rng);
    }

private:
    Ket attack_state_;
    UnitaryMatrix correction_;
    std::map<std::size_t, StateFamily> observations_;
};

// Unentangled cheater: sends |psi'_s> outright and reveals s. Nothing to
// steer with, so tests catch it with the psi'/psi overlap deficit.
class NaiveCheatAlice final : public AliceStrategy {
public:
    explicit NaiveCheatAlice(Beta beta)
        : states_{make_state({FamilyTag::Prime, 0}, beta), make_state({FamilyTag::Prime, 1}, beta)}
    {
    }

    Preparation prepare(std::size_t index, Rng& rng) override
    {
        const StateFamily family{FamilyTag::Prime, uniform_bit(rng)};
        families_.emplace(index, family);
        return {{states_[family.sign_bit], 0}, family};
    }

    int answer_test(std::size_t index, Delivery&, Rng&) override
    {
        return families_.at(index).sign_bit;
    }

    std::optional<StateFamily> observe(std::size_t index, Delivery&, Rng&) override
    {
        return families_.at(index);
    }

    std::optional<int> guess_choice(std::span<const std::size_t> r0,
                                    std::span<const std::size_t> r1, Rng& rng) override
    {
        return alice_infer_choice(families_, r0, r1, rng);
    }

private:
    Ket states_[2];
    std::map<std::size_t, StateFamily> families_;
};

}  // namespace

std::unique_ptr<AliceStrategy> make_strategy(AliceMode mode, Beta beta)
{
    switch (mode) {
    case AliceMode::Honest: return std::make_unique<HonestAlice>(beta);
    case AliceMode::Epr: return std::make_unique<EprAlice>(beta);
    case AliceMode::NaiveCheat: return std::make_unique<NaiveCheatAlice>(beta);
    }
    throw std::invalid_argument("unknown Alice mode");
}

}  // namespace otsim
