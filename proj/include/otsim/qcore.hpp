#pragma once

// Dense statevector / density-matrix engine for small systems (total
// dimension of a few tens at most). Values are immutable; every operation
// that needs randomness takes the stream explicitly.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace otsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kOrthonormalTolerance = 1e-10;
/// Measurement branches lighter than this are never sampled.
inline constexpr double kMinBranchProbability = 1e-15;
/// Schmidt weights (squared coefficients) below this are dropped.
inline constexpr double kZeroSchmidtWeight = 1e-14;

/// Pure state over an ordered list of subsystems. Subsystem 0 is the most
/// significant digit of the flat amplitude index.
class Ket {
public:
    /// Throws std::invalid_argument unless the dims multiply to the vector
    /// length and the vector has unit norm within 1e-12.
    Ket(Vector amplitudes, std::vector<std::size_t> dims);

    /// Computational basis state |index> of a single subsystem.
    static Ket basis(std::size_t dim, std::size_t index);

    const Vector& amplitudes() const noexcept { return amps_; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    std::size_t subsystems() const noexcept { return dims_.size(); }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

private:
    Vector amps_;
    std::vector<std::size_t> dims_;
};

class DensityMatrix {
public:
    /// Checks Hermiticity, trace and positivity (all within 1e-12).
    explicit DensityMatrix(Matrix entries);

    const Matrix& entries() const noexcept { return rho_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    Complex operator()(std::size_t r, std::size_t c) const {
        return rho_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

private:
    Matrix rho_;
};

class UnitaryMatrix {
public:
    /// Checks U^dagger U = I within 1e-10 entrywise.
    explicit UnitaryMatrix(Matrix entries);

    static UnitaryMatrix identity(std::size_t dim);

    const Matrix& entries() const noexcept { return u_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(u_.rows()); }
    UnitaryMatrix adjoint() const;

private:
    Matrix u_;
};

/// state = sum_k coefficients[k] * basis_a[k] (x) basis_b[k], zero-weight
/// terms omitted, coefficients descending.
struct SchmidtDecomposition {
    std::vector<double> coefficients;
    std::vector<Vector> basis_a;
    std::vector<Vector> basis_b;

    /// Rebuilds the flat bipartite amplitude vector.
    Vector reconstruct() const;
};

struct MeasurementResult {
    std::size_t outcome;
    Ket post_state;
    double probability;
};

struct TestResult {
    bool pass;
    Ket post_state;
};

Ket tensor(const Ket& a, const Ket& b);

Ket apply_on_subsystem(const UnitaryMatrix& u, std::size_t target, const Ket& state);

DensityMatrix partial_trace(const Ket& state, std::size_t keep);

/// Born probabilities of a computational-basis measurement of one subsystem.
std::vector<double> outcome_probabilities(const Ket& state, std::size_t target);

/// Normalized state after outcome `outcome` on `target`; throws
/// std::domain_error if the branch weight is below kMinBranchProbability.
Ket collapse(const Ket& state, std::size_t target, std::size_t outcome);

MeasurementResult measure_subsystem(const Ket& state, std::size_t target, Rng& rng);

/// Pass probability of the binary test {|ref><ref|, I - |ref><ref|}.
double test_pass_probability(const Ket& state, std::size_t target, const Ket& reference);

TestResult projective_test(const Ket& state, std::size_t target, const Ket& reference, Rng& rng);

/// Bipartite decomposition using the eigenbasis of the B-side reduced state.
SchmidtDecomposition schmidt_decompose(const Ket& state);

/// Same, but with a caller-fixed orthonormal basis of B in which the B-side
/// reduced state is diagonal. Two purifications of the same mixed state
/// decomposed over one shared basis get matched Schmidt terms even when the
/// spectrum is degenerate.
SchmidtDecomposition schmidt_decompose_in_basis(const Ket& state, const Matrix& basis_b);

/// Extends orthonormal columns to a unitary whose leading columns are the
/// inputs. Throws std::invalid_argument on non-orthonormal input.
UnitaryMatrix complete_to_unitary(std::span<const Vector> columns, std::size_t dim);

/// max_phase |<a|b>|^2, i.e. fidelity modulo global phase.
double fidelity(const Vector& a, const Vector& b);

bool equal_up_to_phase(const Vector& a, const Vector& b, double tol);

double max_entry_distance(const Matrix& a, const Matrix& b);

}  // namespace otsim
