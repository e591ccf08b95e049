#include "gravicav/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "gravicav/analytic.hpp"

namespace gravicav::oracle {

namespace {

const Complex kI(0.0, 1.0);

std::vector<long> guarded_flat_indices(std::span<const int> full_dims, std::span<const int> keep) {
    std::vector<long> stride(full_dims.size());
    long acc = 1;
    for (int k = static_cast<int>(full_dims.size()) - 1; k >= 0; --k) {
        stride[k] = acc;
        acc *= full_dims[k];
    }
    std::vector<long> idx{0};
    for (size_t k = 0; k < full_dims.size(); ++k) {
        std::vector<long> next;
        next.reserve(idx.size() * keep[k]);
        for (long base : idx)
            for (int n = 0; n < keep[k]; ++n) next.push_back(base + n * stride[k]);
        idx.swap(next);
    }
    return idx;
}

}  // namespace

std::vector<int> JointSystem::dims() const {
    std::vector<int> d;
    d.reserve(modes.size() + 1);
    d.push_back(optical_dim);
    for (const auto& m : modes) d.push_back(m.dim);
    return d;
}

long JointSystem::total_dim() const {
    long p = optical_dim;
    for (const auto& m : modes) p *= m.dim;
    return p;
}

void JointSystem::validate(long budget) const {
    qcore::check_dim(optical_dim);
    if (modes.empty()) throw InvalidParameter("joint system needs at least one gravitational mode");
    for (const auto& m : modes) {
        qcore::check_dim(m.dim);
        if (!(m.Omega > 0.0)) throw InvalidParameter("mode frequency Omega must be positive");
        if (!(m.q >= 0.0 && m.q < 1.0)) throw InvalidParameter("coupling q must lie in [0, 1)");
    }
    if (frame == Frame::Lab && !(omega0 > 0.0)) {
        throw InvalidParameter("Lab frame requires a positive optical frequency omega0");
    }
    if (total_dim() > budget) {
        throw BudgetExceeded("joint dimension " + std::to_string(total_dim()) +
                             " exceeds budget " + std::to_string(budget));
    }
}

long dimension_budget(std::optional<long> override_budget) {
    if (override_budget) {
        if (*override_budget < 4) throw InvalidParameter("dimension budget must be >= 4");
        return *override_budget;
    }
    if (const char* env = std::getenv("GRAVICAV_BUDGET")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || v < 4) throw InvalidParameter("GRAVICAV_BUDGET must be an integer >= 4");
        return v;
    }
    return 4096;
}

Matrix build_hamiltonian(const JointSystem& sys) {
    const auto dims = sys.dims();
    Matrix h = Matrix::Zero(sys.total_dim(), sys.total_dim());
    const Matrix n_opt = qcore::number_operator(sys.optical_dim);
    if (sys.frame == Frame::Lab) h += sys.omega0 * qcore::embed(n_opt, dims, 0);
    for (size_t k = 0; k < sys.modes.size(); ++k) {
        const auto& m = sys.modes[k];
        const int slot = static_cast<int>(k) + 1;
        const Matrix b = qcore::annihilation(m.dim);
        h += m.Omega * qcore::embed(qcore::number_operator(m.dim), dims, slot);
        // pair term a†a (b + b†) assembled on the (optical, k) pair space
        const Matrix pair = qcore::kronecker(n_opt, (b + b.adjoint()).eval());
        h -= m.q * m.Omega * qcore::embed_pair(pair, dims, 0, slot);
    }
    return h;
}

Propagator::Propagator(const JointSystem& sys, long budget) : sys_(sys) {
    sys_.validate(budget);
    const Matrix h = build_hamiltonian(sys_);
    if (qcore::hermiticity_residual(h) > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
        throw ExpmFailure("assembled Hamiltonian is not hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw ExpmFailure("Hamiltonian eigendecomposition failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
}

Vector Propagator::evolve(const Vector& initial, double t) const {
    if (initial.size() != eigenvectors_.rows()) {
        throw DimensionMismatch("state size does not match the joint system");
    }
    Vector coeff = eigenvectors_.adjoint() * initial;
    coeff.array() *= (-kI * t * eigenvalues_.cast<Complex>().array()).exp();
    return eigenvectors_ * coeff;
}

Matrix Propagator::evolved_columns(double t, std::span<const long> columns) const {
    Matrix sel(eigenvectors_.rows(), columns.size());
    for (size_t j = 0; j < columns.size(); ++j) sel.col(j) = eigenvectors_.adjoint().col(columns[j]);
    sel = (-kI * t * eigenvalues_.cast<Complex>().array()).exp().matrix().asDiagonal() * sel;
    return eigenvectors_ * sel;
}

Vector propagate(const JointSystem& sys, const Vector& initial, double t, long budget) {
    return Propagator(sys, budget).evolve(initial, t);
}

Matrix closed_form_unitary(const JointSystem& sys, double t, long budget) {
    sys.validate(budget);
    const auto dims = sys.dims();
    const long total = sys.total_dim();
    Matrix u = Matrix::Identity(total, total);
    for (size_t k = 0; k < sys.modes.size(); ++k) {
        const auto& m = sys.modes[k];
        const int slot = static_cast<int>(k) + 1;
        const Complex g = analytic::displacement_envelope(m.Omega, t);
        const double A = analytic::kerr_phase(m.q, m.Omega, t);

        Matrix kerr = Matrix::Zero(sys.optical_dim, sys.optical_dim);
        for (int n = 0; n < sys.optical_dim; ++n) {
            kerr(n, n) = std::exp(kI * (A / 2.0) * static_cast<double>(n) * static_cast<double>(n));
        }
        Matrix free_mode = Matrix::Zero(m.dim, m.dim);
        for (int n = 0; n < m.dim; ++n) free_mode(n, n) = std::exp(-kI * m.Omega * t * static_cast<double>(n));

        const Matrix b = qcore::annihilation(m.dim);
        const Matrix n_opt = qcore::number_operator(sys.optical_dim);
        const Matrix generator =
            m.q * qcore::kronecker(n_opt, (std::conj(g) * b - g * b.adjoint()).eval());
        const Matrix pair = qcore::kronecker(kerr, Matrix::Identity(m.dim, m.dim)) *
                            qcore::kronecker(Matrix::Identity(sys.optical_dim, sys.optical_dim), free_mode) *
                            qcore::matrix_exp(generator);
        u = qcore::embed_pair(pair, dims, 0, slot) * u;
    }
    if (sys.frame == Frame::Lab) {
        Matrix free_opt = Matrix::Zero(sys.optical_dim, sys.optical_dim);
        for (int n = 0; n < sys.optical_dim; ++n) free_opt(n, n) = std::exp(-kI * sys.omega0 * t * static_cast<double>(n));
        u = qcore::embed(free_opt, dims, 0) * u;
    }
    return u;
}

FactorizationCheck factorization_check(const JointSystem& sys, std::span<const double> times,
                                       int pad, long budget) {
    if (pad < 0) throw InvalidParameter("padding must be >= 0");
    JointSystem padded = sys;
    for (auto& m : padded.modes) m.dim += pad;
    padded.validate(budget);

    const auto full_dims = padded.dims();
    // guarded block of the nominal dimensions
    std::vector<int> keep(full_dims.size());
    keep[0] = sys.optical_dim - 2;
    for (size_t k = 0; k < sys.modes.size(); ++k) keep[k + 1] = sys.modes[k].dim - 2;
    for (int v : keep)
        if (v <= 0) throw InvalidParameter("guard removes an entire mode");
    const auto idx = guarded_flat_indices(full_dims, keep);

    const Propagator prop(padded, budget);
    FactorizationCheck out;
    out.padded_dims = full_dims;
    for (double t : times) {
        const Matrix u_closed = closed_form_unitary(padded, t, budget);
        out.unitarity_residual = std::max(out.unitarity_residual, qcore::unitarity_residual(u_closed));
        const Matrix u_cols = prop.evolved_columns(t, idx);
        double mx = 0.0;
        for (size_t j = 0; j < idx.size(); ++j)
            for (long r : idx) mx = std::max(mx, std::abs(u_cols(r, j) - u_closed(r, idx[j])));
        out.max_residual = std::max(out.max_residual, mx);
    }
    return out;
}

BchReport bch_identity_checks(double q, int dim_optical, int dim_mode, int pad, long budget) {
    if (!(q >= 0.0 && q < 1.0)) throw InvalidParameter("coupling q must lie in [0, 1)");
    qcore::check_dim(dim_optical);
    qcore::check_dim(dim_mode);
    if (pad < 0) throw InvalidParameter("padding must be >= 0");
    const int dp = dim_mode + pad;
    if (static_cast<long>(dim_optical) * dp > budget) {
        throw BudgetExceeded("padded BCH check exceeds the dimension budget");
    }

    const auto conjugation_residuals = [&](int dmode, bool guard) {
        const std::vector<int> dims{dim_optical, dmode};
        const Matrix b = qcore::embed(qcore::annihilation(dmode), dims, 1);
        const Matrix n = qcore::embed(qcore::number_operator(dim_optical), dims, 0);
        const Matrix v = qcore::matrix_exp(
            (-q * qcore::embed_pair(
                      qcore::kronecker(qcore::number_operator(dim_optical),
                                       (qcore::annihilation(dmode) - qcore::creation(dmode)).eval()),
                      dims, 0, 1))
                .eval());
        const Matrix bd = b.adjoint();
        const Matrix r1 = v.adjoint() * b * v - (b + q * n);
        const Matrix r2 = v.adjoint() * bd * b * v - (bd * b + q * n * (b + bd) + q * q * n * n);
        const Matrix r3 = v.adjoint() * n * v - n;
        if (!guard) return std::array<double, 3>{r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff(),
                                                 r3.cwiseAbs().maxCoeff()};
        const std::vector<int> keep{dim_optical - 2, dim_mode - 2};
        const auto idx = guarded_flat_indices(dims, keep);
        std::array<double, 3> res{0.0, 0.0, 0.0};
        const Matrix* rs[] = {&r1, &r2, &r3};
        for (int m = 0; m < 3; ++m)
            for (long i : idx)
                for (long j : idx) res[m] = std::max(res[m], std::abs((*rs[m])(i, j)));
        return res;
    };

    BchReport rep;
    const auto padded = conjugation_residuals(dp, true);
    rep.shift_residual = padded[0];
    rep.number_residual = padded[1];
    rep.counter_residual = padded[2];
    rep.unguarded_residual = conjugation_residuals(dim_mode, false)[0];
    return rep;
}

namespace {

struct ModeOverlaps {
    Complex z1;          // <Psi| D(-q gamma) |Psi>
    Complex z2;          // <Psi| D(-2 q gamma) |Psi>
    double tail = 0.0;
    bool flagged = false;
    double unitarity = 0.0;
};

// Per-mode displacement expectation for the linear-optics route. The state is
// prepared fresh at time t; coherent amplitudes too large for the basis are
// handled in the displaced frame, where the same expectation splits into an
// exact frame phase times the matrix vacuum overlap.
ModeOverlaps traveling_wave_overlaps(const GwMode& mode, const params::GwModeState& state, double t,
                                     const qcore::Tolerances& tol) {
    const Complex g = analytic::displacement_envelope(mode.Omega, t);
    const Complex mu1 = -mode.q * g;
    const Complex mu2 = -2.0 * mode.q * g;
    const Matrix d1 = qcore::displacement_operator(mu1, mode.dim);
    const Matrix d2 = qcore::displacement_operator(mu2, mode.dim);

    ModeOverlaps out;
    out.unitarity = std::max(qcore::unitarity_residual(d1), qcore::unitarity_residual(d2));

    if (std::holds_alternative<params::Vacuum>(state)) {
        const auto vac = qcore::fock_state(0, mode.dim);
        out.z1 = qcore::expectation(vac, d1);
        out.z2 = qcore::expectation(vac, d2);
        return out;
    }
    if (const auto* coh = std::get_if<params::Coherent>(&state)) {
        const Complex beta = coh->lambda * std::exp(kI * mode.Omega * t);
        if (qcore::coherent_tail_mass(coh->lambda, mode.dim - 3) <= tol.tail) {
            const auto psi = qcore::coherent_state(beta, mode.dim, tol.tail);
            out.z1 = qcore::expectation(psi, d1);
            out.z2 = qcore::expectation(psi, d2);
            out.tail = qcore::coherent_tail_mass(coh->lambda, mode.dim - 2);
            out.flagged = psi.tail_flagged;
            return out;
        }
        // displaced frame: <beta|D(mu)|beta> = e^{2i Im(mu conj(beta))} <0|D(mu)|0>
        const auto vac = qcore::fock_state(0, mode.dim);
        out.z1 = std::exp(2.0 * kI * std::imag(mu1 * std::conj(beta))) * qcore::expectation(vac, d1);
        out.z2 = std::exp(2.0 * kI * std::imag(mu2 * std::conj(beta))) * qcore::expectation(vac, d2);
        return out;
    }
    if (const auto* sq = std::get_if<params::Squeezed>(&state)) {
        const double theta = 2.0 * mode.Omega * t;
        const auto psi = qcore::squeezed_vacuum(sq->xi0, theta, mode.dim, tol.tail);
        out.z1 = qcore::expectation(psi, d1);
        out.z2 = qcore::expectation(psi, d2);
        const Vector& amps = psi.amplitudes;
        out.tail = std::norm(amps(mode.dim - 1)) + std::norm(amps(mode.dim - 2));
        out.flagged = psi.tail_flagged;
        return out;
    }
    throw InvalidParameter("thermal gravitational modes are estimated analytically, not simulated");
}

}  // namespace

EvolutionResult heisenberg_expectations(const JointSystem& sys, double optical_alpha,
                                        const std::vector<params::GwModeState>& gw_states,
                                        std::span<const double> time_grid,
                                        const qcore::Tolerances& tol, long budget) {
    if (optical_alpha < 0.0) throw InvalidParameter("optical amplitude alpha must be >= 0");
    sys.validate(budget);
    if (gw_states.size() != sys.modes.size()) {
        throw InvalidParameter("one gravitational state is required per mode");
    }
    for (const auto& st : gw_states) {
        if (std::holds_alternative<params::ThermalEstimate>(st)) {
            throw InvalidParameter("thermal gravitational modes are estimated analytically, not simulated");
        }
    }
    const bool all_vacuum = std::all_of(gw_states.begin(), gw_states.end(), [](const auto& st) {
        return std::holds_alternative<params::Vacuum>(st);
    });

    EvolutionResult out;
    out.times.assign(time_grid.begin(), time_grid.end());
    const size_t n = time_grid.size();
    out.mean_quadrature.resize(n);
    out.variance.resize(n);
    out.tail_mass.resize(n);
    out.tail_flagged.resize(n);

    if (all_vacuum) {
        const auto dims = sys.dims();
        std::vector<Vector> factors;
        factors.push_back(qcore::coherent_state(optical_alpha, sys.optical_dim, tol.tail).amplitudes);
        for (const auto& m : sys.modes) factors.push_back(qcore::fock_state(0, m.dim).amplitudes);
        const Vector psi0 = qcore::tensor_product(factors);
        const Propagator prop(sys, budget);
        for (size_t i = 0; i < n; ++i) {
            const double t = time_grid[i];
            Vector psi = prop.evolve(psi0, t);
            out.unitarity_residual = std::max(out.unitarity_residual, std::abs(psi.norm() - 1.0));
            if (sys.frame == Frame::Lab) {
                // undo the free optical rotation so the quadrature is frame-independent
                const long rest = sys.total_dim() / sys.optical_dim;
                for (int na = 0; na < sys.optical_dim; ++na) {
                    psi.segment(static_cast<long>(na) * rest, rest) *=
                        std::exp(kI * sys.omega0 * t * static_cast<double>(na));
                }
            }
            const Vector a_psi = qcore::apply_annihilation(psi, dims, 0);
            const Complex ea = psi.dot(a_psi);
            const Complex ea2 = psi.dot(qcore::apply_annihilation(a_psi, dims, 0));
            const double nphot = a_psi.squaredNorm();
            const double mean = 2.0 * ea.real();
            out.mean_quadrature[i] = mean;
            out.variance[i] = 2.0 * ea2.real() + 2.0 * nphot + 1.0 - mean * mean;
            out.tail_mass[i] = qcore::total_tail_mass(psi, dims, 2);
            out.tail_flagged[i] = out.tail_mass[i] > tol.tail;
        }
        return out;
    }

    // Linear-optics route: product of per-mode displacement expectations,
    // optical factors evaluated on the truncated optical space.
    const auto psi_a = qcore::coherent_state(optical_alpha, sys.optical_dim, tol.tail);
    const Matrix a_opt = qcore::annihilation(sys.optical_dim);
    const Complex opt_a = qcore::expectation(psi_a, a_opt);
    const Complex opt_a2 = qcore::expectation(psi_a, (a_opt * a_opt).eval());
    const double opt_n = qcore::expectation(psi_a, (a_opt.adjoint() * a_opt).eval()).real();
    for (size_t i = 0; i < n; ++i) {
        const double t = time_grid[i];
        Complex z1(1.0, 0.0), z2(1.0, 0.0);
        double tail = psi_a.discarded_mass;
        bool flagged = psi_a.tail_flagged;
        for (size_t k = 0; k < sys.modes.size(); ++k) {
            const auto ov = traveling_wave_overlaps(sys.modes[k], gw_states[k], t, tol);
            z1 *= ov.z1;
            z2 *= ov.z2;
            tail += ov.tail;
            flagged = flagged || ov.flagged;
            out.unitarity_residual = std::max(out.unitarity_residual, ov.unitarity);
        }
        const Complex ea = opt_a * z1;
        const Complex ea2 = opt_a2 * z2;
        const double mean = 2.0 * ea.real();
        out.mean_quadrature[i] = mean;
        out.variance[i] = 2.0 * ea2.real() + 2.0 * opt_n + 1.0 - mean * mean;
        out.tail_mass[i] = tail;
        out.tail_flagged[i] = flagged;
    }
    return out;
}

}  // namespace gravicav::oracle
