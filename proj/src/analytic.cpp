#include "gravicav/analytic.hpp"

#include <cmath>
#include <limits>

namespace gravicav::analytic {

namespace {
const Complex kI(0.0, 1.0);
}

Complex displacement_envelope(double Omega, double t) { return 1.0 - std::exp(kI * Omega * t); }

double kerr_phase(double q, double Omega, double t) {
    if (t < 0.0) throw InvalidParameter("kerr_phase: negative time");
    return 2.0 * q * q * (Omega * t - std::sin(Omega * t));
}

KerrFactors kerr_factors(double q, double Omega, double t) {
    return {displacement_envelope(Omega, t), kerr_phase(q, Omega, t), q, Omega, t};
}

double kerr_phase_estimate(double omega0, double Epl, double t) {
    if (!(omega0 > 0.0) || !(omega0 < Epl)) throw InvalidParameter("kerr_phase_estimate: need 0 < omega0 < Epl");
    if (t < 0.0) throw InvalidParameter("kerr_phase_estimate: negative time");
    return (omega0 / Epl) * omega0 * t;
}

double worst_case_damping(double omega0, double Epl, double lnRatio) {
    if (!(omega0 > 0.0) || !(omega0 < Epl)) throw InvalidParameter("worst_case_damping: need 0 < omega0 < Epl");
    if (!(lnRatio > 0.0)) throw InvalidParameter("worst_case_damping: lnRatio must be positive");
    const double x = omega0 / Epl;
    return std::exp(-x * x * lnRatio);
}

double single_mode_damping(double q, double Omega, double t) {
    return std::exp(-q * q * std::norm(displacement_envelope(Omega, t)) / 2.0);
}

namespace {

void check_alpha_damping(double alpha, double D) {
    if (alpha < 0.0) throw InvalidParameter("coherent amplitude alpha must be >= 0");
    if (!(D > 0.0 && D <= 1.0)) throw InvalidParameter("damping factor must lie in (0, 1]");
}

}  // namespace

double vacuum_mean_quadrature(double alpha, double D, double F) {
    check_alpha_damping(alpha, D);
    const double a2 = alpha * alpha;
    return 2.0 * alpha * D * std::exp(-a2 * (1.0 - std::cos(F))) * std::cos(F / 2.0 + a2 * std::sin(F));
}

double vacuum_variance(double alpha, double D, double F, PhaseConvention conv) {
    check_alpha_damping(alpha, D);
    const double a2 = alpha * alpha;
    const double first_arg =
        (conv == PhaseConvention::Corrected ? 2.0 * F : F) + a2 * std::sin(2.0 * F);
    const double sq = 2.0 * a2 * D * D * std::exp(-a2 * (1.0 - std::cos(2.0 * F))) * std::cos(first_arg);
    const double mean_sq_half = 2.0 * a2 * D * D * std::exp(-2.0 * a2 * (1.0 - std::cos(F))) *
                                std::cos(F + 2.0 * a2 * std::sin(F));
    const double incoherent = 2.0 * a2 * (1.0 - D * D * std::exp(-2.0 * a2 * (1.0 - std::cos(F))));
    return sq - mean_sq_half + incoherent + 1.0;
}

Moments single_mode_exact_moments(double alpha, double q, double Omega, double t) {
    if (alpha < 0.0) throw InvalidParameter("coherent amplitude alpha must be >= 0");
    const Complex g = displacement_envelope(Omega, t);
    const double A = 2.0 * q * q * (Omega * t - std::sin(Omega * t));
    const double g2 = std::norm(g);
    const Complex ea = alpha * std::exp(kI * A / 2.0) * std::exp(alpha * alpha * (std::exp(kI * A) - 1.0)) *
                       std::exp(-q * q * g2 / 2.0);
    const Complex ea2 = alpha * alpha * std::exp(2.0 * kI * A) *
                        std::exp(alpha * alpha * (std::exp(2.0 * kI * A) - 1.0)) * std::exp(-2.0 * q * q * g2);
    const double mean = 2.0 * ea.real();
    const double variance = 2.0 * ea2.real() + 2.0 * alpha * alpha + 1.0 - mean * mean;
    return {mean, variance};
}

VarianceMinimum first_variance_minimum(double alpha, double D, PhaseConvention conv) {
    if (!(alpha > 0.0)) throw InvalidParameter("first_variance_minimum: alpha must be > 0");
    const double step = 1e-3;
    const double two_pi = 2.0 * M_PI;
    auto f = [&](double F) { return vacuum_variance(alpha, D, F, conv); };

    // first sign change of the forward difference
    double lo = 0.0, hi = 0.0;
    double prev = f(step);
    bool descending = false;
    for (int i = 2; i * step <= two_pi + step / 2; ++i) {
        const double F = i * step;
        const double v = f(F);
        if (v < prev) descending = true;
        if (descending && v > prev) {
            lo = (i - 2) * step;
            hi = F;
            break;
        }
        prev = v;
    }
    if (hi == 0.0) throw NoMinimumFound("variance is monotone on (0, 2pi]");

    // golden-section refinement
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double F0 = (a + b) / 2.0;
    return {F0, f(F0)};
}

double grid_min_variance(double alpha, double D, PhaseConvention conv, double F_lo, double F_hi,
                         double step) {
    if (!(step > 0.0) || !(F_hi > F_lo)) throw InvalidParameter("grid_min_variance: bad grid");
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 1; F_lo + i * step < F_hi; ++i) mn = std::min(mn, vacuum_variance(alpha, D, F_lo + i * step, conv));
    return mn;
}

double coherent_wave_mean_quadrature(double alpha, double q, double lambda, double Omega, double t,
                                     CoherentVariant variant) {
    if (alpha < 0.0 || lambda < 0.0) throw InvalidParameter("alpha and lambda must be >= 0");
    const double damping = single_mode_damping(q, Omega, t);
    const double swing = q * lambda * std::sin(Omega * t);
    const double phase = variant == CoherentVariant::ExactOverlap ? 2.0 * swing : swing;
    return 2.0 * alpha * damping * std::cos(phase);
}

double wave_phase_shift(double q, double lambda, double Omega, double t) {
    return q * lambda * std::sin(Omega * t);
}

double squeezed_wave_mean_quadrature(double alpha, double q, double xi0, double Omega, double t,
                                     SqueezedVariant variant, bool* domain_warning) {
    if (alpha < 0.0 || xi0 < 0.0) throw InvalidParameter("alpha and xi0 must be >= 0");
    const double correction_scale = 8.0 * q * q * std::exp(2.0 * xi0);
    if (domain_warning) *domain_warning = correction_scale > 0.1;
    const double theta = 2.0 * Omega * t;
    if (variant == SqueezedVariant::LargeSqueezeApprox) {
        const double s = std::sin(Omega * t / 2.0);
        return 2.0 * alpha * (1.0 - correction_scale * s * s * s * s);
    }
    const Complex g = displacement_envelope(Omega, t);
    const Complex mu = -q * (g * std::cosh(xi0) + std::conj(g) * std::exp(kI * theta) * std::sinh(xi0));
    return 2.0 * alpha * std::exp(-std::norm(mu) / 2.0);
}

double squeezed_oscillation_prefactor(double omega0, double Epl, double upsilon, double Omega) {
    if (!(omega0 > 0.0) || !(Epl > 0.0) || !(upsilon > 0.0) || !(Omega > 0.0)) {
        throw InvalidParameter("squeezed_oscillation_prefactor: all arguments must be positive");
    }
    const double x = omega0 / Epl;
    const double y = upsilon / Omega;
    return 8.0 * x * x * y * y * y * y;
}

double thermal_damping(double q, double nbar) {
    if (nbar < 0.0) throw InvalidParameter("thermal occupation nbar must be >= 0");
    return std::exp(-4.0 * q * q * (2.0 * nbar + 1.0));
}

}  // namespace gravicav::analytic
