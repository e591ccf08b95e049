#ifndef GRAVICAV_PARAMS_HPP
#define GRAVICAV_PARAMS_HPP

#include <filesystem>
#include <optional>
#include <variant>

#include "gravicav/errors.hpp"

// Physical constants and the parameter maps between experimental quantities
// (strain, frequency, temperature, Hubble rate) and the model couplings
// (q, lambda, xi0, nbar).
//
// The API is SI-facing. The single-graviton strain carries the one place
// where an order-one convention has to be fixed: it is pinned so that
//   * graviton_number_from_strain(single_graviton_strain(O, V), O, V) = 1,
//   * the wave energy density (c^2/32 pi G) O^2 f^2 times V equals hbar*O
//     for f = single_graviton_strain,
//   * the phase swing q*lambda equals (omega0/Omega) f for any V.
// The last condition fixes the calibration factor in coupling_q.

namespace gravicav::params {

struct PhysicalConstants {
    double G = 6.67430e-11;          // m^3 kg^-1 s^-2
    double hbar = 1.054571817e-34;   // J s
    double kB = 1.380649e-23;        // J K^-1
    double c = 2.99792458e8;         // m s^-1
    double Epl = 0.0;                // Planck angular frequency sqrt(c^5/(hbar G)), rad/s
    double lnCutoffRatio = 62.0;     // ln(Planck/infrared cutoff)

    /// CODATA values with Epl derived from them.
    static PhysicalConstants codata();

    /// Planck angular frequency implied by G, hbar, c.
    double derived_Epl() const;

    /// Throws InvalidParameter unless everything is positive and Epl agrees
    /// with derived_Epl() to 1e-6 relative.
    void validate() const;
};

/// Reads `key value` (or `key=value`) overrides for G, hbar, kB, c, Epl and
/// lnCutoffRatio from a text file; '#' starts a comment. Keys not present
/// keep their CODATA defaults; Epl is re-derived unless overridden.
PhysicalConstants load_constants(const std::filesystem::path& file);

struct CavityConfig {
    double omega0;  // optical angular frequency, rad/s
    double ell0;    // cavity length, m
    double alpha;   // coherent amplitude, dimensionless

    void validate(const PhysicalConstants& pc) const;
};

struct Vacuum {};
struct Coherent {
    double lambda = 0.0;
};
struct Squeezed {
    double xi0 = 0.0;
};
struct ThermalEstimate {
    double nbar = 0.0;
};

/// Per-mode quantum state of the gravitational field.
using GwModeState = std::variant<Vacuum, Coherent, Squeezed, ThermalEstimate>;

/// One gravitational mode given either its quantization volume or its
/// coupling directly (exactly one of the two).
struct GwModeConfig {
    double Omega = 1.0;            // rad/s
    std::optional<double> V;       // m^3
    std::optional<double> q;       // dimensionless
    GwModeState state = Vacuum{};

    void validate() const;

    /// The dimensionless coupling: q when given, else derived from V through
    /// coupling_q for the cavity frequency omega0.
    double coupling(double omega0, const PhysicalConstants& pc) const;
};

/// Shifted resonance omega0 (1 - h/2) of a cavity strained by h.
/// Rejects |h| > 1e-2 where the first-order expansion is untrustworthy.
double cavity_frequency_shift(double omega0, double h);

/// Strain equivalent to a single graviton of angular frequency Omega in
/// quantization volume V: sqrt(32 pi G hbar / (c^2 Omega V)).
double single_graviton_strain(double Omega, double V, const PhysicalConstants& pc);

/// Mean graviton number of a coherent wave of strain f:
/// N = c^2 V Omega f^2 / (32 pi G hbar); the coherent amplitude is sqrt(N).
double graviton_number_from_strain(double f, double Omega, double V, const PhysicalConstants& pc);

/// Bose-Einstein occupation 1/(e^{hbar Omega / kB T} - 1).
double nbar(double Omega, double T, const PhysicalConstants& pc);

/// Characteristic frequency of the relic squeezed background,
/// 1e9 sqrt(H / 1e-4 Mpl) Hz, for a Hubble rate given in Planck-mass units.
double upsilon_of_hubble(double H_over_Mpl);

/// Squeeze magnitude from sinh(xi0) = (upsilon/Omega)^2 / 2, both in Hz.
/// Sets *domain_warning when xi0 < 3, outside the xi0 >> 1 regime the
/// relation was derived in.
double xi0_from_frequency(double upsilon_hz, double Omega_hz, bool* domain_warning = nullptr);

/// Interferometer estimate b (2 pi ell0 / lambda_opt) f for b bounces.
double ligo_phase_estimate(int bounces, double ell0, double lambda_opt, double f);

/// Dimensionless optomechanical coupling of one gravitational mode,
/// calibrated so the quadrature phase swing q*lambda equals (omega0/Omega) f
/// for a wave of strain f in any quantization volume.
double coupling_q(double omega0, double Omega, double V, const PhysicalConstants& pc);

/// Upper bound omega0 / Epl on the coupling over the cut-off continuum.
double q_max(double omega0, const PhysicalConstants& pc);

}  // namespace gravicav::params

#endif
