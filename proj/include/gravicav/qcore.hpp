#ifndef GRAVICAV_QCORE_HPP
#define GRAVICAV_QCORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "gravicav/errors.hpp"

// Truncated-Fock-space linear algebra: ladder operators, states, tensor
// embeddings and matrix exponentials, with explicit truncation-error guards.
//
// Conventions fixed here and relied on everywhere else:
//   * one mode's Fock space is levels 0..dim-1, dim >= 2;
//   * in tensor products mode 0 is the slowest-varying index, so the flat
//     index of |n_0, n_1, ..., n_{K-1}> is ((n_0*d_1 + n_1)*d_2 + ...);
//   * truncated states are renormalized and the discarded mass is reported;
//   * the "guarded" region of a mode excludes its top two Fock levels,
//     where truncation corrupts matrix elements by construction.

namespace gravicav::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical tolerances used by guards and invariant checks.
/// All must be strictly positive and < 1.
struct Tolerances {
    double unitarity = 1e-8;
    double normalization = 1e-12;
    double tail = 1e-8;
    double expm = 1e-10;

    void validate() const;
};

/// Normalized amplitudes over a truncated Fock basis, together with the
/// probability mass the truncation discarded and whether the top two levels
/// hold more mass than the tail tolerance allows.
struct StateVector {
    Vector amplitudes;
    double discarded_mass = 0.0;
    bool tail_flagged = false;

    int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Throws InvalidDimension unless dim >= 2; returns dim.
int check_dim(int dim);

/// Annihilation operator a on a dim-level space: a|n> = sqrt(n)|n-1>.
Matrix annihilation(int dim);

/// Creation operator, the adjoint of annihilation().
Matrix creation(int dim);

/// Number operator diag(0, 1, ..., dim-1).
Matrix number_operator(int dim);

Matrix identity(int dim);

/// Number eigenstate |n>.
StateVector fock_state(int n, int dim);

/// Poisson mass strictly above `level` for a coherent state of amplitude
/// magnitude |alpha|. Used by the truncation guard.
double coherent_tail_mass(double alpha_abs, int level);

/// Truncated coherent state c_n = e^{-|a|^2/2} a^n / sqrt(n!), renormalized.
/// Rejects amplitudes whose exact state keeps more than tail_tol of its mass
/// above level dim-3.
StateVector coherent_state(Complex alpha, int dim, double tail_tol = Tolerances{}.tail);

/// Truncated squeezed vacuum with magnitude r and phase theta; only even
/// levels are populated. Requires sinh^2(r) <= dim/6. The exact tail above
/// the top two levels is reported via tail_flagged rather than rejected
/// (squeezed tails decay slowly; the mean-occupation bound is the guard).
StateVector squeezed_vacuum(double r, double theta, int dim, double tail_tol = Tolerances{}.tail);

/// exp(beta a† - conj(beta) a). Requires |beta|^2 <= dim/4.
Matrix displacement_operator(Complex beta, int dim);

/// exp((conj(xi) a^2 - xi a†^2)/2) with xi = r e^{i theta}.
/// Requires sinh^2(r) <= dim/6.
Matrix squeeze_operator(double r, double theta, int dim);

/// Dense matrix exponential. Hermitian and anti-hermitian inputs go through
/// an eigendecomposition (the result of the anti-hermitian branch is unitary
/// to machine precision); everything else through Pade-13 scaling and
/// squaring. Accuracy target: residual below Tolerances::expm for
/// ||M|| <= 50.
Matrix matrix_exp(const Matrix& m);

/// I (x) ... (x) op (x) ... (x) I with `op` in position `slot` of the listed
/// mode dimensions. Mode 0 is the slowest-varying index.
Matrix embed(const Matrix& op, std::span<const int> dims, int slot);

/// Embedding of an operator that acts jointly on the pair of modes
/// (slot_a, slot_b), slot_a < slot_b, given on their product space with
/// slot_a slower-varying.
Matrix embed_pair(const Matrix& op, std::span<const int> dims, int slot_a, int slot_b);

/// Kronecker product, left factor slowest-varying.
Matrix kronecker(const Matrix& a, const Matrix& b);

/// |psi_0> (x) |psi_1> (x) ... in the fixed mode order.
Vector tensor_product(std::span<const Vector> states);

/// <psi|op|psi>. Throws DimensionMismatch if sizes differ.
Complex expectation(const Vector& psi, const Matrix& op);
Complex expectation(const StateVector& psi, const Matrix& op);

/// Applies the annihilation operator of mode `slot` without materializing
/// its embedding.
Vector apply_annihilation(const Vector& psi, std::span<const int> dims, int slot);

/// max |(M - M†)_{ij}|
double hermiticity_residual(const Matrix& m);

/// max |(U†U - I)_{ij}|
double unitarity_residual(const Matrix& u);

/// max |m_{IJ}| over rows and columns whose per-mode indices all stay below
/// dim_k - guard_levels. `guards` may give a per-mode guard depth; a single
/// entry applies to every mode.
double guarded_max_abs(const Matrix& m, std::span<const int> dims, std::span<const int> guards);
double guarded_max_abs(const Matrix& m, std::span<const int> dims, int guard_levels = 2);

/// Probability mass of `psi` in the top `levels` Fock levels of one mode.
double mode_tail_mass(const Vector& psi, std::span<const int> dims, int mode, int levels = 2);

/// Sum of mode_tail_mass over all modes.
double total_tail_mass(const Vector& psi, std::span<const int> dims, int levels = 2);

}  // namespace gravicav::qcore

#endif
