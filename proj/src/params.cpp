#include "gravicav/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gravicav::params {

PhysicalConstants PhysicalConstants::codata() {
    PhysicalConstants pc;
    pc.Epl = pc.derived_Epl();
    return pc;
}

double PhysicalConstants::derived_Epl() const {
    return std::sqrt(c * c * c * c * c / (hbar * G));
}

void PhysicalConstants::validate() const {
    for (double v : {G, hbar, kB, c, Epl, lnCutoffRatio}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter("physical constants must be positive and finite");
    }
    const double ref = derived_Epl();
    if (std::abs(Epl - ref) > 1e-6 * ref) {
        throw InvalidParameter("Epl inconsistent with sqrt(c^5/(hbar G)) beyond 1e-6 relative");
    }
}

PhysicalConstants load_constants(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open constants file " + file.string());
    PhysicalConstants pc;
    bool epl_overridden = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == '=') ch = ' ';
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        double value;
        if (!(ls >> value)) {
            throw ParseError("constants file " + file.string() + ":" + std::to_string(lineno) +
                             ": expected `key value`");
        }
        if (key == "G") pc.G = value;
        else if (key == "hbar") pc.hbar = value;
        else if (key == "kB") pc.kB = value;
        else if (key == "c") pc.c = value;
        else if (key == "Epl") { pc.Epl = value; epl_overridden = true; }
        else if (key == "lnCutoffRatio") pc.lnCutoffRatio = value;
        else throw ParseError("constants file " + file.string() + ":" + std::to_string(lineno) +
                              ": unknown key `" + key + "`");
    }
    if (!epl_overridden) pc.Epl = pc.derived_Epl();
    pc.validate();
    return pc;
}

void GwModeConfig::validate() const {
    if (!(Omega > 0.0)) throw InvalidParameter("mode frequency Omega must be positive");
    if (V.has_value() == q.has_value()) {
        throw InvalidParameter("give exactly one of the quantization volume V and the coupling q");
    }
    if (V && !(*V > 0.0)) throw InvalidParameter("quantization volume V must be positive");
    if (q && !(*q >= 0.0 && *q < 1.0)) throw InvalidParameter("coupling q must lie in [0, 1)");
    std::visit([](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Coherent>) {
            if (!(st.lambda >= 0.0) || !std::isfinite(st.lambda))
                throw InvalidParameter("coherent amplitude lambda must be finite and >= 0");
        } else if constexpr (std::is_same_v<T, Squeezed>) {
            if (!(st.xi0 >= 0.0) || !std::isfinite(st.xi0))
                throw InvalidParameter("squeeze magnitude xi0 must be finite and >= 0");
        } else if constexpr (std::is_same_v<T, ThermalEstimate>) {
            if (!(st.nbar >= 0.0) || !std::isfinite(st.nbar))
                throw InvalidParameter("thermal occupation nbar must be finite and >= 0");
        }
    }, state);
}

double GwModeConfig::coupling(double omega0, const PhysicalConstants& pc) const {
    validate();
    if (q) return *q;
    return coupling_q(omega0, Omega, *V, pc);
}

void CavityConfig::validate(const PhysicalConstants& pc) const {
    if (!(omega0 > 0.0) || !(ell0 > 0.0) || !(alpha > 0.0)) {
        throw InvalidParameter("cavity parameters must be positive");
    }
    if (!(omega0 < pc.Epl)) throw InvalidParameter("omega0 must lie below the Planck frequency");
}

double cavity_frequency_shift(double omega0, double h) {
    if (!(omega0 > 0.0)) throw InvalidParameter("omega0 must be positive");
    if (std::abs(h) > 1e-2) throw InvalidParameter("strain |h| > 1e-2: outside the linearized regime");
    return omega0 * (1.0 - h / 2.0);
}

double single_graviton_strain(double Omega, double V, const PhysicalConstants& pc) {
    if (!(Omega > 0.0) || !(V > 0.0)) throw InvalidParameter("Omega and V must be positive");
    return std::sqrt(32.0 * M_PI * pc.G * pc.hbar / (pc.c * pc.c * Omega * V));
}

double graviton_number_from_strain(double f, double Omega, double V, const PhysicalConstants& pc) {
    if (!(f >= 0.0) || !(Omega > 0.0) || !(V > 0.0)) throw InvalidParameter("need f >= 0, Omega > 0, V > 0");
    return pc.c * pc.c * V * Omega * f * f / (32.0 * M_PI * pc.G * pc.hbar);
}

double nbar(double Omega, double T, const PhysicalConstants& pc) {
    if (!(Omega > 0.0) || !(T > 0.0)) throw InvalidParameter("Omega and T must be positive");
    const double x = pc.hbar * Omega / (pc.kB * T);
    return 1.0 / std::expm1(x);
}

double upsilon_of_hubble(double H_over_Mpl) {
    if (!(H_over_Mpl > 0.0)) throw InvalidParameter("H/Mpl must be positive");
    return 1e9 * std::sqrt(H_over_Mpl / 1e-4);
}

double xi0_from_frequency(double upsilon_hz, double Omega_hz, bool* domain_warning) {
    if (!(upsilon_hz > 0.0) || !(Omega_hz > 0.0)) throw InvalidParameter("upsilon and Omega must be positive");
    const double ratio = upsilon_hz / Omega_hz;
    const double xi0 = std::asinh(ratio * ratio / 2.0);
    if (domain_warning) *domain_warning = xi0 < 3.0;
    return xi0;
}

double ligo_phase_estimate(int bounces, double ell0, double lambda_opt, double f) {
    if (bounces <= 0 || !(ell0 > 0.0) || !(lambda_opt > 0.0) || !(f >= 0.0)) {
        throw InvalidParameter("need bounces > 0, ell0 > 0, lambda_opt > 0, f >= 0");
    }
    return bounces * (2.0 * M_PI * ell0 / lambda_opt) * f;
}

double coupling_q(double omega0, double Omega, double V, const PhysicalConstants& pc) {
    if (!(omega0 > 0.0)) throw InvalidParameter("omega0 must be positive");
    // Calibration: with lambda = sqrt(N(f)) the phase swing q*lambda must
    // equal (omega0/Omega) f, which fixes the prefactor of f1/(4 Omega) at 4.
    const double phase_calibration = 4.0;
    return phase_calibration * omega0 * single_graviton_strain(Omega, V, pc) / (4.0 * Omega);
}

double q_max(double omega0, const PhysicalConstants& pc) {
    if (!(omega0 > 0.0)) throw InvalidParameter("omega0 must be positive");
    return omega0 / pc.Epl;
}

}  // namespace gravicav::params
