#pragma once

// The single-qubit state families, the honest purification |phi>, the
// attacker's four-branch state |phi'>, and the Alice-side unitary mapping
// one onto the other.

#include <cstdint>
#include <string_view>

#include "otsim/qcore.hpp"

namespace otsim {

/// Bias parameter, restricted to (0, 1].
class Beta {
public:
    explicit Beta(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

enum class FamilyTag : std::uint8_t { Honest, Prime, DoublePrime };

struct StateFamily {
    FamilyTag tag;
    int sign_bit;  // 0 or 1

    friend bool operator==(const StateFamily&, const StateFamily&) = default;
};

std::string_view to_string(FamilyTag tag);

/// Weight of |1>: beta/2, 3beta/4 or beta/4.
double prob_e1(FamilyTag tag, Beta beta);

/// sqrt(1-w)|0> + (-1)^sign sqrt(w)|1>, w = prob_e1(tag).
Ket make_state(StateFamily family, Beta beta);

/// (|0>|psi_0> + |1>|psi_1>) / sqrt2, dims {2, 2}; subsystem 0 is Alice.
Ket make_phi(Beta beta);

/// (|0>|psi'_0> + |1>|psi'_1> + |2>|psi''_0> + |3>|psi''_1>) / 2, dims {4, 2}.
Ket make_phi_prime(Beta beta);

/// make_phi with Alice's qubit placed on levels {0,1} of a 4-level register.
Ket embed_phi(Beta beta);

/// Alice-side U with (U (x) I)|phi'> = embed_phi up to global phase.
UnitaryMatrix correction_unitary(Beta beta);

}  // namespace otsim
