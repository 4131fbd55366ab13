#include "otsim/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace otsim {

namespace {

std::size_t product(const std::vector<std::size_t>& dims)
{
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

// Splits the flat index space around one subsystem: left x target x right.
struct Split {
    std::size_t left;
    std::size_t dim;
    std::size_t right;

    std::size_t flat(std::size_t l, std::size_t t, std::size_t r) const
    {
        return (l * dim + t) * right + r;
    }
};

Split split_at(const Ket& state, std::size_t target)
{
    const auto& dims = state.dims();
    if (target >= dims.size()) {
        throw std::invalid_argument("subsystem index " + std::to_string(target) +
                                    " out of range for " + std::to_string(dims.size()) +
                                    " subsystems");
    }
    Split s{1, dims[target], 1};
    for (std::size_t i = 0; i < target; ++i) s.left *= dims[i];
    for (std::size_t i = target + 1; i < dims.size(); ++i) s.right *= dims[i];
    return s;
}

double sample_uniform(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

Ket::Ket(Vector amplitudes, std::vector<std::size_t> dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims))
{
    if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](auto d) { return d == 0; })) {
        throw std::invalid_argument("Ket dims must be a non-empty list of positive integers");
    }
    if (product(dims_) != static_cast<std::size_t>(amps_.size())) {
        throw std::invalid_argument("Ket dims do not match amplitude count");
    }
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
        throw std::invalid_argument("Ket is not normalized (norm " + std::to_string(amps_.norm()) +
                                    ")");
    }
}

Ket Ket::basis(std::size_t dim, std::size_t index)
{
    if (index >= dim) throw std::invalid_argument("basis index out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return Ket(std::move(v), {dim});
}

DensityMatrix::DensityMatrix(Matrix entries) : rho_(std::move(entries))
{
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex(1.0)) > kNormTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kNormTolerance) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

UnitaryMatrix::UnitaryMatrix(Matrix entries) : u_(std::move(entries))
{
    if (u_.rows() == 0 || u_.rows() != u_.cols()) {
        throw std::invalid_argument("unitary must be square and non-empty");
    }
    const Matrix gram = u_.adjoint() * u_;
    if ((gram - Matrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff() >
        kUnitaryTolerance) {
        throw std::invalid_argument("matrix is not unitary");
    }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return UnitaryMatrix(Matrix::Identity(n, n));
}

UnitaryMatrix UnitaryMatrix::adjoint() const
{
    return UnitaryMatrix(u_.adjoint());
}

Vector SchmidtDecomposition::reconstruct() const
{
    if (coefficients.empty()) return {};
    const auto da = basis_a.front().size();
    const auto db = basis_b.front().size();
    Vector out = Vector::Zero(da * db);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        for (Eigen::Index i = 0; i < da; ++i) {
            out.segment(i * db, db) += coefficients[k] * basis_a[k](i) * basis_b[k];
        }
    }
    return out;
}

Ket tensor(const Ket& a, const Ket& b)
{
    const auto& va = a.amplitudes();
    const auto& vb = b.amplitudes();
    Vector out(va.size() * vb.size());
    for (Eigen::Index i = 0; i < va.size(); ++i) {
        out.segment(i * vb.size(), vb.size()) = va(i) * vb;
    }
    std::vector<std::size_t> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return Ket(std::move(out), std::move(dims));
}

Ket apply_on_subsystem(const UnitaryMatrix& u, std::size_t target, const Ket& state)
{
    const Split s = split_at(state, target);
    if (u.dim() != s.dim) {
        throw std::invalid_argument("unitary dimension " + std::to_string(u.dim()) +
                                    " does not match subsystem dimension " +
                                    std::to_string(s.dim));
    }
    const auto& in = state.amplitudes();
    const auto& m = u.entries();
    Vector out = Vector::Zero(in.size());
    for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t r = 0; r < s.right; ++r) {
            for (std::size_t i = 0; i < s.dim; ++i) {
                Complex acc = 0.0;
                for (std::size_t j = 0; j < s.dim; ++j) {
                    acc += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                           in(static_cast<Eigen::Index>(s.flat(l, j, r)));
                }
                out(static_cast<Eigen::Index>(s.flat(l, i, r))) = acc;
            }
        }
    }
    return Ket(std::move(out), state.dims());
}

DensityMatrix partial_trace(const Ket& state, std::size_t keep)
{
    if (state.subsystems() < 2) {
        throw std::invalid_argument("partial_trace needs at least two subsystems");
    }
    const Split s = split_at(state, keep);
    const auto& psi = state.amplitudes();
    const auto n = static_cast<Eigen::Index>(s.dim);
    Matrix rho = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < s.dim; ++i) {
        for (std::size_t j = 0; j < s.dim; ++j) {
            Complex acc = 0.0;
            for (std::size_t l = 0; l < s.left; ++l) {
                for (std::size_t r = 0; r < s.right; ++r) {
                    acc += psi(static_cast<Eigen::Index>(s.flat(l, i, r))) *
                           std::conj(psi(static_cast<Eigen::Index>(s.flat(l, j, r))));
                }
            }
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(std::move(rho));
}

std::vector<double> outcome_probabilities(const Ket& state, std::size_t target)
{
    const Split s = split_at(state, target);
    const auto& psi = state.amplitudes();
    std::vector<double> probs(s.dim, 0.0);
    for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t t = 0; t < s.dim; ++t) {
            for (std::size_t r = 0; r < s.right; ++r) {
                probs[t] += std::norm(psi(static_cast<Eigen::Index>(s.flat(l, t, r))));
            }
        }
    }
    return probs;
}

Ket collapse(const Ket& state, std::size_t target, std::size_t outcome)
{
    const Split s = split_at(state, target);
    if (outcome >= s.dim) throw std::invalid_argument("outcome out of range");
    const auto& psi = state.amplitudes();
    Vector out = Vector::Zero(psi.size());
    for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t r = 0; r < s.right; ++r) {
            const auto idx = static_cast<Eigen::Index>(s.flat(l, outcome, r));
            out(idx) = psi(idx);
        }
    }
    const double weight = out.squaredNorm();
    if (weight < kMinBranchProbability) {
        throw std::domain_error("collapse onto a branch of negligible probability");
    }
    out /= std::sqrt(weight);
    return Ket(std::move(out), state.dims());
}

MeasurementResult measure_subsystem(const Ket& state, std::size_t target, Rng& rng)
{
    const std::vector<double> probs = outcome_probabilities(state, target);
    const double u = sample_uniform(rng);
    double cumulative = 0.0;
    std::size_t chosen = probs.size();
    std::size_t last_viable = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < kMinBranchProbability) continue;
        last_viable = k;
        cumulative += probs[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    // Rounding can leave u just above the final cumulative sum.
    if (chosen == probs.size()) chosen = last_viable;
    return {chosen, collapse(state, target, chosen), probs[chosen]};
}

double test_pass_probability(const Ket& state, std::size_t target, const Ket& reference)
{
    const Split s = split_at(state, target);
    if (reference.size() != s.dim) {
        throw std::invalid_argument("reference dimension does not match target subsystem");
    }
    const auto& psi = state.amplitudes();
    const auto& ref = reference.amplitudes();
    double p = 0.0;
    for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t r = 0; r < s.right; ++r) {
            Complex overlap = 0.0;
            for (std::size_t t = 0; t < s.dim; ++t) {
                overlap += std::conj(ref(static_cast<Eigen::Index>(t))) *
                           psi(static_cast<Eigen::Index>(s.flat(l, t, r)));
            }
            p += std::norm(overlap);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

TestResult projective_test(const Ket& state, std::size_t target, const Ket& reference, Rng& rng)
{
    const double p_pass = test_pass_probability(state, target, reference);
    bool pass = sample_uniform(rng) < p_pass;
    if (pass && p_pass < kMinBranchProbability) pass = false;
    if (!pass && 1.0 - p_pass < kMinBranchProbability) pass = true;

    const Split s = split_at(state, target);
    const auto& psi = state.amplitudes();
    const auto& ref = reference.amplitudes();
    Vector projected = Vector::Zero(psi.size());
    for (std::size_t l = 0; l < s.left; ++l) {
        for (std::size_t r = 0; r < s.right; ++r) {
            Complex overlap = 0.0;
            for (std::size_t t = 0; t < s.dim; ++t) {
                overlap += std::conj(ref(static_cast<Eigen::Index>(t))) *
                           psi(static_cast<Eigen::Index>(s.flat(l, t, r)));
            }
            for (std::size_t t = 0; t < s.dim; ++t) {
                projected(static_cast<Eigen::Index>(s.flat(l, t, r))) =
                    overlap * ref(static_cast<Eigen::Index>(t));
            }
        }
    }
    Vector out = pass ? projected : Vector(psi - projected);
    out /= out.norm();
    return {pass, Ket(std::move(out), state.dims())};
}

SchmidtDecomposition schmidt_decompose_in_basis(const Ket& state, const Matrix& basis_b)
{
    if (state.subsystems() != 2) {
        throw std::invalid_argument("Schmidt decomposition needs exactly two subsystems");
    }
    const auto da = static_cast<Eigen::Index>(state.dims()[0]);
    const auto db = static_cast<Eigen::Index>(state.dims()[1]);
    if (basis_b.rows() != db || basis_b.cols() != db) {
        throw std::invalid_argument("B basis has the wrong shape");
    }
    // Row-major reshape: coeffs(i, j) = <i|<j|state>.
    Matrix coeffs(da, db);
    for (Eigen::Index i = 0; i < da; ++i) {
        coeffs.row(i) = state.amplitudes().segment(i * db, db).transpose();
    }

    struct Term {
        double weight;
        Vector a;
        Vector b;
    };
    std::vector<Term> terms;
    for (Eigen::Index k = 0; k < db; ++k) {
        // (I (x) <b_k|) |state>
        Vector a = coeffs * basis_b.col(k).conjugate();
        const double weight = a.squaredNorm();
        if (weight < kZeroSchmidtWeight) continue;
        terms.push_back({weight, a / std::sqrt(weight), basis_b.col(k)});
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& x, const Term& y) { return x.weight > y.weight; });

    SchmidtDecomposition out;
    for (auto& t : terms) {
        out.coefficients.push_back(std::sqrt(t.weight));
        out.basis_a.push_back(std::move(t.a));
        out.basis_b.push_back(std::move(t.b));
    }
    return out;
}

SchmidtDecomposition schmidt_decompose(const Ket& state)
{
    if (state.subsystems() != 2) {
        throw std::invalid_argument("Schmidt decomposition needs exactly two subsystems");
    }
    const DensityMatrix rho_b = partial_trace(state, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho_b.entries());
    return schmidt_decompose_in_basis(state, eig.eigenvectors());
}

UnitaryMatrix complete_to_unitary(std::span<const Vector> columns, std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    if (columns.size() > dim) throw std::invalid_argument("more columns than dimension");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].size() != n) throw std::invalid_argument("column has wrong length");
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex g = columns[j].dot(columns[i]);
            const Complex expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - expected) > kOrthonormalTolerance) {
                throw std::invalid_argument("input columns are not orthonormal");
            }
        }
    }

    Matrix u = Matrix::Zero(n, n);
    Eigen::Index filled = 0;
    for (const auto& c : columns) u.col(filled++) = c;

    // Gram-Schmidt over the computational basis, taking at each step the
    // candidate with the largest residual. Two passes for stability.
    while (filled < n) {
        Vector best;
        double best_norm = -1.0;
        for (Eigen::Index e = 0; e < n; ++e) {
            Vector v = Vector::Unit(n, e);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index c = 0; c < filled; ++c) v -= u.col(c).dot(v) * u.col(c);
            }
            const double nv = v.norm();
            if (nv > best_norm + 1e-12) {
                best_norm = nv;
                best = std::move(v);
            }
        }
        u.col(filled++) = best / best_norm;
    }
    return UnitaryMatrix(std::move(u));
}

double fidelity(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("fidelity of vectors of unequal size");
    return std::norm(a.dot(b));
}

bool equal_up_to_phase(const Vector& a, const Vector& b, double tol)
{
    if (a.size() != b.size()) return false;
    const Complex overlap = a.dot(b);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (b - phase * a).cwiseAbs().maxCoeff() <= tol;
}

double max_entry_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrices of unequal shape");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace otsim
