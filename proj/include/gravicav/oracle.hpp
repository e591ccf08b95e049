#ifndef GRAVICAV_ORACLE_HPP
#define GRAVICAV_ORACLE_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <optional>
#include <span>
#include <vector>

#include "gravicav/params.hpp"
#include "gravicav/qcore.hpp"

// Brute-force ground truth: the joint Hamiltonian on truncated spaces,
// numerically exact propagation, and the reference expectation values the
// closed forms are validated against.
//
// Operator-identity checks (factorization, conjugation identities) are
// evaluated with extra truncation headroom on the gravitational modes and
// the residuals reported on the guarded block of the requested dimensions;
// without headroom the top of the basis contaminates the comparison and the
// residual measures the truncation instead of the identity.

namespace gravicav::oracle {

using qcore::Complex;
using qcore::Matrix;
using qcore::Vector;

enum class Frame { Rotating, Lab };

struct GwMode {
    double Omega = 1.0;  // angular frequency, rad/s
    double q = 0.0;      // dimensionless coupling, in [0, 1)
    int dim = 2;         // truncation dimension
};

struct JointSystem {
    int optical_dim = 2;
    std::vector<GwMode> modes;
    Frame frame = Frame::Rotating;
    double omega0 = 0.0;  // optical angular frequency; only enters in the Lab frame

    std::vector<int> dims() const;
    long total_dim() const;
    void validate(long budget) const;
};

/// Joint-space dimension budget: explicit override, else the
/// GRAVICAV_BUDGET environment variable, else 4096.
long dimension_budget(std::optional<long> override_budget = std::nullopt);

/// H = [omega0 a†a +] sum_k Omega_k b_k†b_k - sum_k q_k Omega_k a†a (b_k + b_k†),
/// hermitian, in rad/s. The Rotating frame omits the omega0 term.
Matrix build_hamiltonian(const JointSystem& sys);

/// exp(-iHt) applied through one hermitian eigendecomposition of H, reusable
/// across a whole time grid.
class Propagator {
  public:
    Propagator(const JointSystem& sys, long budget = dimension_budget());

    Vector evolve(const Vector& initial, double t) const;

    /// Columns of exp(-iHt) at the given flat basis indices.
    Matrix evolved_columns(double t, std::span<const long> columns) const;

    const JointSystem& system() const { return sys_; }

  private:
    JointSystem sys_;
    Eigen::VectorXd eigenvalues_;
    Matrix eigenvectors_;
};

/// One-shot exp(-iHt) |initial>. Norm is preserved to ~1e-14; callers verify
/// rather than renormalize.
Vector propagate(const JointSystem& sys, const Vector& initial, double t,
                 long budget = dimension_budget());

/// Closed-form evolution operator on the system's own truncated space:
/// product over modes of
///   exp(i A_k(t)/2 (a†a)^2) exp(-i Omega_k t b_k†b_k)
///     exp(q_k a†a (conj(gamma_k) b_k - gamma_k b_k†))
/// times exp(-i omega0 t a†a) in the Lab frame.
Matrix closed_form_unitary(const JointSystem& sys, double t, long budget = dimension_budget());

struct FactorizationCheck {
    double max_residual = 0.0;       // max entry difference on the guarded block
    double unitarity_residual = 0.0; // of the closed-form operator
    std::vector<int> padded_dims;
};

/// Compares closed_form_unitary against exp(-iHt) over a set of times,
/// with `pad` extra levels on every gravitational mode and the comparison
/// restricted to the guarded block of the nominal dimensions.
FactorizationCheck factorization_check(const JointSystem& sys, std::span<const double> times,
                                       int pad, long budget = dimension_budget());

struct BchReport {
    double shift_residual = 0.0;     // V† b V = b + q a†a
    double number_residual = 0.0;    // V† b†b V = b†b + q a†a (b + b†) + q^2 (a†a)^2
    double counter_residual = 0.0;   // V† a†a V = a†a
    double unguarded_residual = 0.0; // first identity, no headroom and no guard
};

/// Verifies the three conjugation identities of V = exp(-q a†a (b - b†)) on
/// the guarded block of (dim_optical, dim_mode). The identities hold under
/// conjugation by V†; the reports stay at truncation level when evaluated
/// that way and blow up to O(1) when the guard and headroom are dropped,
/// which unguarded_residual documents.
BchReport bch_identity_checks(double q, int dim_optical, int dim_mode, int pad = 12,
                              long budget = dimension_budget());

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> mean_quadrature;
    std::vector<double> variance;
    std::vector<double> tail_mass;
    std::vector<bool> tail_flagged;
    double unitarity_residual = 0.0;
};

/// Reference quadrature statistics over a time grid.
///
/// With every gravitational mode in vacuum the joint state is propagated with
/// exp(-iHt) and the moments of a† + a evaluated directly (Kerr effect
/// included). With a traveling coherent or squeezed wave present the
/// linear-optics reduction is evaluated instead: per-mode displacement
/// matrices acting on the per-mode state prepared fresh at each sample, which
/// is the regime the closed forms describe. Thermal modes are estimated
/// analytically and rejected here.
EvolutionResult heisenberg_expectations(const JointSystem& sys, double optical_alpha,
                                        const std::vector<params::GwModeState>& gw_states,
                                        std::span<const double> time_grid,
                                        const qcore::Tolerances& tol = {},
                                        long budget = dimension_budget());

}  // namespace gravicav::oracle

#endif
