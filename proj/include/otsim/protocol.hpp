#pragma once

// Transmission / test / partition skeleton of a cheat-sensitive 2-1 OT
// session, and the Alice strategies that run against it.
//
// Session order:
//   1. Alice prepares every index and hands Bob his register.
//   2. Bob flags each index for testing with probability test_fraction and
//      tests flagged indices in order; the first failure aborts the session.
//   3. Bob measures every untested register in the computational basis (e);
//      Alice may then measure whatever she kept.
//   4. Bob picks a choice bit c and announces R_c drawn from e=1 indices and
//      R_{1-c} drawn from e=0 indices.
//   5. Alice may guess c.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "otsim/qcore.hpp"
#include "otsim/states.hpp"

namespace otsim {

enum class AliceMode : std::uint8_t { Honest, Epr, NaiveCheat };

std::string_view to_string(AliceMode mode);
/// Accepts the CLI spellings "honest", "epr", "naive".
std::optional<AliceMode> parse_mode(std::string_view text);

struct ProtocolParams {
    Beta beta{0.5};
    std::size_t n_states = 200;
    double test_fraction = 0.25;
    std::size_t set_size = 10;
    AliceMode mode = AliceMode::Honest;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when the expected untested count
    /// n_states * (1 - test_fraction) cannot hold two sets of set_size.
    void validate() const;
};

/// What Bob receives for one index. Bob owns subsystem `bob_subsystem` of
/// `joint`; any other subsystem stays with Alice.
struct Delivery {
    Ket joint;
    std::size_t bob_subsystem;
};

struct Preparation {
    Delivery delivery;
    /// Absent when Alice sent half of an entangled state.
    std::optional<StateFamily> family;
};

/// Alice's side of a session. One instance per session; implementations keep
/// whatever per-index memory they need.
class AliceStrategy {
public:
    virtual ~AliceStrategy() = default;

    virtual Preparation prepare(std::size_t index, Rng& rng) = 0;
    /// Bit to reveal for a tested index; may act on Alice's share first.
    virtual int answer_test(std::size_t index, Delivery& delivery, Rng& rng) = 0;
    /// Local measurement on an untested index after Bob's measurement.
    virtual std::optional<StateFamily> observe(std::size_t index, Delivery& delivery,
                                               Rng& rng) = 0;
    virtual std::optional<int> guess_choice(std::span<const std::size_t> r0,
                                            std::span<const std::size_t> r1, Rng& rng) = 0;
};

std::unique_ptr<AliceStrategy> make_strategy(AliceMode mode, Beta beta);

struct IndexRecord {
    std::size_t index = 0;
    std::optional<StateFamily> family_prepared;  // absent: entangled attack state
    bool tested = false;
    std::optional<int> revealed_bit;
    std::optional<bool> test_passed;  // absent if the session aborted first
    std::optional<int> e_outcome;
    std::optional<StateFamily> alice_observation;

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

enum class SessionStatus : std::uint8_t { Completed, Aborted, InsufficientPool };

struct Transcript {
    std::vector<IndexRecord> records;
    std::optional<int> bob_choice;
    std::vector<std::size_t> r0;
    std::vector<std::size_t> r1;
    std::optional<int> alice_guess;
    bool aborted = false;
    SessionStatus status = SessionStatus::Completed;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

Transcript run_session(const ProtocolParams& params, Rng& rng);

// EPR attack steps.

Ket epr_prepare(Beta beta);

struct RevealedState {
    int revealed_bit;
    Ket joint;
};

/// Applies `correction` to Alice's register and measures it. Throws
/// std::logic_error if the measurement lands outside levels {0, 1}.
RevealedState epr_answer_test(const Ket& joint, const UnitaryMatrix& correction, Rng& rng);
RevealedState epr_answer_test(const Ket& joint, Beta beta, Rng& rng);

struct Observation {
    StateFamily family;
    Ket joint;
};

/// Levels 0,1 of Alice's register read as (Prime, 0/1), levels 2,3 as
/// (DoublePrime, 0/1).
Observation epr_observe(const Ket& joint, Rng& rng);

// Bob's steps.

/// Binary test of Bob's register against |psi_revealed_bit>.
bool bob_test(const Delivery& delivery, int revealed_bit, Beta beta, Rng& rng);

struct Partition {
    std::vector<std::size_t> r0;
    std::vector<std::size_t> r1;
};

/// R_choice from the e=1 pool, R_{1-choice} from the e=0 pool, each of
/// set_size indices sampled without replacement and listed ascending.
/// Returns nullopt when either pool is too small.
std::optional<Partition> bob_partition(const std::map<std::size_t, int>& e_outcomes, int choice,
                                       std::size_t set_size, Rng& rng);

/// Guesses the label of the set holding more Prime-family indices; ties are
/// broken uniformly. Throws std::invalid_argument on a missing observation.
int alice_infer_choice(const std::map<std::size_t, StateFamily>& observations,
                       std::span<const std::size_t> r0, std::span<const std::size_t> r1,
                       Rng& rng);

}  // namespace otsim
