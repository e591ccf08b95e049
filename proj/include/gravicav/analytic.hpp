#ifndef GRAVICAV_ANALYTIC_HPP
#define GRAVICAV_ANALYTIC_HPP

#include <complex>

#include "gravicav/errors.hpp"

// Closed-form observables of the optical mode coupled to quantized
// gravitational-wave modes, in the frame co-rotating at the optical
// frequency. Mean quadrature is <a† + a>, variance <(a† + a)^2> - <a† + a>^2.
//
// Two printed-formula discrepancies are kept selectable so they can be
// arbitrated against the brute-force propagator:
//   * the vacuum-variance first cosine argument (PhaseConvention),
//   * the traveling-wave overlap phase and the squeezed displacement factor
//     (CoherentVariant / SqueezedVariant). The Exact* variants are the ones
//     the propagator reproduces.

namespace gravicav::analytic {

using Complex = std::complex<double>;

enum class PhaseConvention { Printed, Corrected };
enum class CoherentVariant { ExactOverlap, PrintedForm };
enum class SqueezedVariant { ExactIdentity, LargeSqueezeApprox };

/// Per-mode displacement envelope 1 - e^{i Omega t}; |gamma|^2 = 2(1 - cos Omega t) <= 4.
Complex displacement_envelope(double Omega, double t);

/// Kerr phase 2 q^2 (Omega t - sin Omega t) accumulated by one mode. t >= 0.
double kerr_phase(double q, double Omega, double t);

struct KerrFactors {
    Complex gamma;      // displacement envelope
    double kerr;        // accumulated Kerr phase, radians
    double q, Omega, t;
};
KerrFactors kerr_factors(double q, double Omega, double t);

/// Leading-order estimate of the total Kerr phase over the gravitational
/// continuum: (omega0/Epl) * omega0 * t. Order-one prefactors dropped.
double kerr_phase_estimate(double omega0, double Epl, double t);

/// Worst-case vacuum damping exp(-(omega0/Epl)^2 * lnRatio) over the
/// continuum between the infrared and Planck cutoffs.
double worst_case_damping(double omega0, double Epl, double lnRatio);

/// Vacuum overlap of a single displaced mode: exp(-q^2 |gamma|^2 / 2).
double single_mode_damping(double q, double Omega, double t);

/// 2 alpha D e^{-alpha^2 (1 - cos F)} cos(F/2 + alpha^2 sin F), alpha real >= 0.
double vacuum_mean_quadrature(double alpha, double D, double F);

/// Quadrature variance for the gravitational vacuum. The two conventions
/// differ only in the first cosine argument (F vs 2F); Corrected is the
/// one consistent with the exact single-mode algebra.
double vacuum_variance(double alpha, double D, double F,
                       PhaseConvention conv = PhaseConvention::Corrected);

struct Moments {
    double mean;
    double variance;
};

/// Exact one-mode moments for optical coherent state alpha (real) and the
/// gravitational mode in vacuum:
///   <a>   = alpha e^{iA/2} e^{alpha^2 (e^{iA} - 1)} e^{-q^2 |gamma|^2 / 2}
///   <a^2> = alpha^2 e^{2iA} e^{alpha^2 (e^{2iA} - 1)} e^{-2 q^2 |gamma|^2}
/// with <a†a> = alpha^2 conserved.
Moments single_mode_exact_moments(double alpha, double q, double Omega, double t);

struct VarianceMinimum {
    double F0;
    double var_min;
};

/// First local minimum of vacuum_variance over F in (0, 2pi]: grid scan with
/// step 1e-3, then golden-section refinement to |dF| <= 1e-6. Throws
/// NoMinimumFound when the variance is monotone on the interval.
VarianceMinimum first_variance_minimum(double alpha, double D,
                                       PhaseConvention conv = PhaseConvention::Corrected);

/// Minimum of vacuum_variance over an even grid on (F_lo, F_hi]; used to
/// document the printed-convention scan. Returns the grid minimum value.
double grid_min_variance(double alpha, double D, PhaseConvention conv, double F_lo, double F_hi,
                         double step);

/// Mean quadrature with one gravitational mode in a coherent state of
/// amplitude lambda:
///   ExactOverlap: 2 alpha e^{-q^2 |gamma|^2/2} cos(2 q lambda sin Omega t)
///   PrintedForm:  2 alpha e^{-q^2 |gamma|^2/2} cos(q lambda sin Omega t)
/// The factor two in ExactOverlap is the exact coherent-coherent displacement
/// overlap <beta|D(mu)|beta> = e^{-|mu|^2/2} e^{2i Im(mu conj(beta))}.
double coherent_wave_mean_quadrature(double alpha, double q, double lambda, double Omega, double t,
                                     CoherentVariant variant = CoherentVariant::ExactOverlap);

/// First-order phase swing q lambda sin(Omega t) of the optical field; with
/// couplings derived in `params` its amplitude equals (omega0/Omega) f for a
/// wave of strain f.
double wave_phase_shift(double q, double lambda, double Omega, double t);

/// Mean quadrature with the gravitational mode in a squeezed vacuum of
/// magnitude xi0 and phase theta = 2 Omega t.
///   ExactIdentity: 2 alpha exp(-|mu|^2/2),
///                  mu = -q (gamma cosh xi0 + conj(gamma) e^{i theta} sinh xi0)
///   LargeSqueezeApprox: 2 alpha (1 - 8 q^2 e^{2 xi0} sin^4(Omega t / 2))
/// Sets *domain_warning when the correction term 8 q^2 e^{2 xi0} exceeds 0.1.
double squeezed_wave_mean_quadrature(double alpha, double q, double xi0, double Omega, double t,
                                     SqueezedVariant variant = SqueezedVariant::ExactIdentity,
                                     bool* domain_warning = nullptr);

/// 8 (omega0/Epl)^2 (upsilon/Omega)^4, the amplitude of the squeezed-wave
/// quadrature oscillation.
double squeezed_oscillation_prefactor(double omega0, double Epl, double upsilon, double Omega);

/// Thermal bound exp(-4 q^2 (2 nbar + 1)) on the damping of the vacuum result.
double thermal_damping(double q, double nbar);

}  // namespace gravicav::analytic

#endif
