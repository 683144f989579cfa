#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlqas/rng.hpp"

namespace rlqas {

using cplx = std::complex<double>;

struct DimensionMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonHermitianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUnitaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadIndexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StateValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix dagger() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cplx s) const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs_diff(const ComplexMatrix& rhs) const;

    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigenvalues descending; eigenvectors are the matching orthonormal columns.
struct Spectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// Cyclic Jacobi diagonalisation for Hermitian matrices of dimension <= 16.
// Throws NonHermitianError / NoConvergenceError (200-sweep cap).
Spectrum hermitian_eig(const ComplexMatrix& m);

// Normalised state vector of n qubits; qubit 0 is the most significant bit of
// the basis index.
class PureState {
public:
    PureState(std::size_t n_qubits, std::vector<cplx> amplitudes);
    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

private:
    std::size_t n_qubits_;
    std::vector<cplx> amplitudes_;
};

// Unit-trace Hermitian PSD operator. Construction validates trace and
// Hermiticity to 1e-10; eigenvalues below -1e-8 are rejected and smaller
// negative ones are clamped to zero followed by renormalisation.
class DensityMatrix {
public:
    DensityMatrix(std::size_t n_qubits, ComplexMatrix mat);

    static DensityMatrix from_pure(const PureState& psi);
    static DensityMatrix maximally_mixed(std::size_t n_qubits);
    static DensityMatrix computational_basis(std::size_t n_qubits, std::size_t index);
    static DensityMatrix diagonal(std::size_t n_qubits, const std::vector<double>& probs);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }

    // Trusted constructor for operations that preserve validity by
    // construction (unitary conjugation, dephasing, partial trace).
    struct Unchecked {};
    DensityMatrix(std::size_t n_qubits, ComplexMatrix mat, Unchecked)
        : n_qubits_(n_qubits), mat_(std::move(mat)) {}

private:
    std::size_t n_qubits_;
    ComplexMatrix mat_;
};

// rho' = U rho U^dagger. Checks unitarity of u to 1e-10.
DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u);
PureState apply_unitary(const PureState& psi, const ComplexMatrix& u);

// Full dephasing in the computational basis: off-diagonals zeroed.
DensityMatrix dephase(const DensityMatrix& rho);

// Reduced state on the kept qubits (ascending order of the given indices).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

double purity(const DensityMatrix& rho);

// In bits. 0 log 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);

// S(target | other) = S(rho) - S(Tr_target rho) for a 2-qubit state, in bits.
double conditional_entropy(const DensityMatrix& rho, std::size_t target);

// Wootters concurrence of a 2-qubit mixed state.
double concurrence_mixed(const DensityMatrix& rho);

// sqrt(2 (1 - Tr rho_A^2)) for a normalised 2-qubit pure state.
double concurrence_pure(const PureState& psi);

// Hilbert-Schmidt random density matrix: G G^dagger / Tr(G G^dagger) with G a
// square matrix of independent standard complex Gaussians. Deterministic in
// the seed.
DensityMatrix sample_hs_random_state(std::size_t n_qubits, std::uint64_t seed);

// Haar-random pure state (normalised complex Gaussian vector).
PureState sample_haar_pure(std::size_t n_qubits, std::uint64_t seed);

}  // namespace rlqas
