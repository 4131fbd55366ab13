#include <cstdio>
#include <stdexcept>
#include <string>

#include "otsim/harness.hpp"

namespace otsim {

std::vector<double> default_beta_grid()
{
    std::vector<double> grid;
    for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
    return grid;
}

VerificationReport verify_identities(const std::vector<double>& beta_grid)
{
    if (beta_grid.empty()) throw std::invalid_argument("beta grid is empty");
    VerificationReport report;
    for (double b : beta_grid) {
        const Beta beta(b);
        BetaCheck check{b, 0.0, 0.0, false};

        const Ket phi = make_phi(beta);
        const Ket phi_prime = make_phi_prime(beta);
        check.reduced_state_distance = max_entry_distance(partial_trace(phi_prime, 1).entries(),
                                                          partial_trace(phi, 1).entries());

        const Ket corrected = apply_on_subsystem(correction_unitary(beta), 0, phi_prime);
        const Vector target = embed_phi(beta).amplitudes();
        check.fidelity_deficit = 1.0 - fidelity(target, corrected.amplitudes());
        const bool matches = equal_up_to_phase(target, corrected.amplitudes(), kUnitaryTolerance);

        check.ordering_holds = prob_e1(FamilyTag::DoublePrime, beta) <
                                   prob_e1(FamilyTag::Honest, beta) &&
                               prob_e1(FamilyTag::Honest, beta) < prob_e1(FamilyTag::Prime, beta);

        char label[32];
        std::snprintf(label, sizeof label, "beta=%g: ", b);
        if (check.reduced_state_distance > kReducedStateBound) {
            report.violations.push_back(std::string(label) + "Bob reduced states differ by " +
                                        format_number(check.reduced_state_distance));
        }
        if (check.fidelity_deficit > kFidelityDeficitBound || !matches) {
            report.violations.push_back(std::string(label) + "correction fidelity deficit " +
                                        format_number(check.fidelity_deficit));
        }
        if (!check.ordering_holds) {
            report.violations.push_back(std::string(label) + "e=1 probability ordering broken");
        }
        report.checks.push_back(check);
    }
    return report;
}

}  // namespace otsim
