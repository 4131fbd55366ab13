#include "otsim/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace otsim {

Beta::Beta(double value) : value_(value)
{
    if (!(value > 0.0 && value <= 1.0)) {
        throw std::invalid_argument("beta must lie in (0, 1], got " + std::to_string(value));
    }
}

std::string_view to_string(FamilyTag tag)
{
    switch (tag) {
    case FamilyTag::Honest: return "honest";
    case FamilyTag::Prime: return "prime";
    case FamilyTag::DoublePrime: return "double_prime";
    }
    return "unknown";
}

double prob_e1(FamilyTag tag, Beta beta)
{
    const double b = beta.value();
    switch (tag) {
    case FamilyTag::Honest: return b / 2.0;
    case FamilyTag::Prime: return 3.0 * b / 4.0;
    case FamilyTag::DoublePrime: return b / 4.0;
    }
    throw std::invalid_argument("unknown family tag");
}

Ket make_state(StateFamily family, Beta beta)
{
    if (family.sign_bit != 0 && family.sign_bit != 1) {
        throw std::invalid_argument("sign_bit must be 0 or 1");
    }
    const double w = prob_e1(family.tag, beta);
    Vector v(2);
    v(0) = std::sqrt(1.0 - w);
    v(1) = (family.sign_bit == 0 ? 1.0 : -1.0) * std::sqrt(w);
    return Ket(std::move(v), {2});
}

namespace {

// sum_k |k> (x) branch_k, scaled by 1/sqrt(#branches).
Ket uniform_branches(const std::vector<Ket>& branches, std::size_t alice_dim)
{
    const double scale = 1.0 / std::sqrt(static_cast<double>(branches.size()));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(alice_dim * 2));
    for (std::size_t k = 0; k < branches.size(); ++k) {
        v.segment(static_cast<Eigen::Index>(2 * k), 2) = scale * branches[k].amplitudes();
    }
    return Ket(std::move(v), {alice_dim, 2});
}

}  // namespace

Ket make_phi(Beta beta)
{
    return uniform_branches({make_state({FamilyTag::Honest, 0}, beta),
                             make_state({FamilyTag::Honest, 1}, beta)},
                            2);
}

Ket make_phi_prime(Beta beta)
{
    return uniform_branches({make_state({FamilyTag::Prime, 0}, beta),
                             make_state({FamilyTag::Prime, 1}, beta),
                             make_state({FamilyTag::DoublePrime, 0}, beta),
                             make_state({FamilyTag::DoublePrime, 1}, beta)},
                            4);
}

Ket embed_phi(Beta beta)
{
    const Ket phi = make_phi(beta);
    Vector v = Vector::Zero(8);
    v.head(4) = phi.amplitudes();
    return Ket(std::move(v), {4, 2});
}

UnitaryMatrix correction_unitary(Beta beta)
{
    const Ket target = embed_phi(beta);
    const Ket source = make_phi_prime(beta);

    // Both states purify the same Bob density; decompose both over one Bob
    // eigenbasis so that Schmidt terms pair up by Bob vector.
    const DensityMatrix rho_b = partial_trace(target, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_b.entries());
    const Matrix& bob_basis = eig.eigenvectors();

    const SchmidtDecomposition from = schmidt_decompose_in_basis(source, bob_basis);
    const SchmidtDecomposition to = schmidt_decompose_in_basis(target, bob_basis);
    if (from.coefficients.size() != to.coefficients.size()) {
        throw std::logic_error("purifications have different Schmidt rank");
    }

    std::vector<Vector> from_cols;
    std::vector<Vector> to_cols;
    for (std::size_t k = 0; k < to.basis_b.size(); ++k) {
        std::size_t match = from.basis_b.size();
        for (std::size_t j = 0; j < from.basis_b.size(); ++j) {
            if (from.basis_b[j] == to.basis_b[k]) match = j;
        }
        if (match == from.basis_b.size()) {
            throw std::logic_error("Schmidt terms do not share a Bob vector");
        }
        from_cols.push_back(from.basis_a[match]);
        to_cols.push_back(to.basis_a[k]);
    }

    const UnitaryMatrix v = complete_to_unitary(from_cols, 4);
    const UnitaryMatrix w = complete_to_unitary(to_cols, 4);
    return UnitaryMatrix(w.entries() * v.entries().adjoint());
}

}  // namespace otsim
