#include "gravicav/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

namespace gravicav::qcore {

namespace {

const Complex kI(0.0, 1.0);

long product_dim(std::span<const int> dims) {
    long p = 1;
    for (int d : dims) p *= check_dim(d);
    return p;
}

std::vector<long> strides_of(std::span<const int> dims) {
    std::vector<long> s(dims.size());
    long acc = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        s[k] = acc;
        acc *= dims[k];
    }
    return s;
}

}  // namespace

void Tolerances::validate() const {
    for (double v : {unitarity, normalization, tail, expm}) {
        if (!(v > 0.0 && v < 1.0)) throw InvalidParameter("tolerances must lie in (0, 1)");
    }
}

int check_dim(int dim) {
    if (dim < 2) throw InvalidDimension("Fock truncation dimension must be >= 2, got " + std::to_string(dim));
    return dim;
}

Matrix annihilation(int dim) {
    check_dim(dim);
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(int dim) { return annihilation(dim).adjoint(); }

Matrix number_operator(int dim) {
    check_dim(dim);
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix identity(int dim) {
    check_dim(dim);
    return Matrix::Identity(dim, dim);
}

StateVector fock_state(int n, int dim) {
    check_dim(dim);
    if (n < 0 || n >= dim) throw InvalidParameter("Fock level outside truncated basis");
    StateVector s;
    s.amplitudes = Vector::Zero(dim);
    s.amplitudes(n) = 1.0;
    return s;
}

double coherent_tail_mass(double alpha_abs, int level) {
    if (alpha_abs == 0.0) return 0.0;
    const double mean = alpha_abs * alpha_abs;
    // 1 - sum_{n<=level} Poisson(mean), each term in log space so that the
    // sum stays well-defined when the mean lies far outside the basis.
    double below = 0.0;
    for (int n = 0; n <= level; ++n) {
        const double lp = -mean + 2.0 * n * std::log(alpha_abs) - std::lgamma(n + 1.0);
        below += std::exp(lp);
    }
    return std::max(0.0, 1.0 - below);
}

StateVector coherent_state(Complex alpha, int dim, double tail_tol) {
    check_dim(dim);
    const double mag = std::abs(alpha);
    const double tail_above_guard = coherent_tail_mass(mag, dim - 3);
    if (tail_above_guard > tail_tol) {
        throw TailOverflow("coherent amplitude |alpha|^2 = " + std::to_string(mag * mag) +
                           " keeps mass " + std::to_string(tail_above_guard) +
                           " above level " + std::to_string(dim - 3));
    }
    StateVector s;
    s.amplitudes = Vector::Zero(dim);
    s.amplitudes(0) = std::exp(-mag * mag / 2.0);
    for (int n = 1; n < dim; ++n) s.amplitudes(n) = s.amplitudes(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double kept = s.amplitudes.squaredNorm();
    s.discarded_mass = std::max(0.0, 1.0 - kept);
    s.amplitudes /= std::sqrt(kept);
    s.tail_flagged = tail_above_guard > tail_tol;
    return s;
}

StateVector squeezed_vacuum(double r, double theta, int dim, double tail_tol) {
    check_dim(dim);
    if (r < 0.0) throw InvalidParameter("squeeze magnitude must be >= 0");
    const double mean = std::sinh(r) * std::sinh(r);
    if (mean > dim / 6.0) {
        throw TailOverflow("squeezed vacuum sinh^2(r) = " + std::to_string(mean) +
                           " exceeds dim/6 = " + std::to_string(dim / 6.0));
    }
    StateVector s;
    s.amplitudes = Vector::Zero(dim);
    s.amplitudes(0) = 1.0 / std::sqrt(std::cosh(r));
    const Complex step = -std::exp(kI * theta) * std::tanh(r);
    for (int m = 1; 2 * m < dim; ++m) {
        s.amplitudes(2 * m) =
            s.amplitudes(2 * m - 2) * step * std::sqrt(static_cast<double>((2 * m - 1) * (2 * m))) / (2.0 * m);
    }
    const double kept = s.amplitudes.squaredNorm();
    s.discarded_mass = std::max(0.0, 1.0 - kept);
    s.amplitudes /= std::sqrt(kept);
    // exact mass of the infinite state in levels >= dim-2
    double top = 0.0;
    const double tanh2 = std::tanh(r) * std::tanh(r);
    double p = 1.0 / std::cosh(r);  // P(0)
    p *= p;
    for (int m = 1; 2 * m <= dim + 40; ++m) {
        p *= tanh2 * static_cast<double>((2 * m - 1) * (2 * m)) / (4.0 * m * m);
        if (2 * m >= dim - 2) top += p;
    }
    top += p * tanh2 / (1.0 - tanh2);  // geometric bound on the remainder
    s.tail_flagged = top > tail_tol;
    return s;
}

Matrix displacement_operator(Complex beta, int dim) {
    check_dim(dim);
    if (std::norm(beta) > dim / 4.0) {
        throw TailOverflow("displacement |beta|^2 = " + std::to_string(std::norm(beta)) +
                           " exceeds dim/4 = " + std::to_string(dim / 4.0));
    }
    const Matrix a = annihilation(dim);
    return matrix_exp(beta * a.adjoint() - std::conj(beta) * a);
}

Matrix squeeze_operator(double r, double theta, int dim) {
    check_dim(dim);
    if (r < 0.0) throw InvalidParameter("squeeze magnitude must be >= 0");
    const double mean = std::sinh(r) * std::sinh(r);
    if (mean > dim / 6.0) {
        throw TailOverflow("squeeze operator sinh^2(r) = " + std::to_string(mean) +
                           " exceeds dim/6 = " + std::to_string(dim / 6.0));
    }
    const Matrix a = annihilation(dim);
    const Matrix a2 = a * a;
    const Complex xi = r * std::exp(kI * theta);
    return matrix_exp(0.5 * (std::conj(xi) * a2 - xi * a2.adjoint()));
}

namespace {

Matrix expm_pade13(const Matrix& m) {
    // Scaling and squaring with the degree-13 Pade approximant.
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const double theta13 = 5.371920351148152;
    double norm1 = 0.0;
    for (int j = 0; j < m.cols(); ++j) norm1 = std::max(norm1, m.col(j).cwiseAbs().sum());
    int s = 0;
    if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    const Matrix a = m / std::pow(2.0, s);
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                          b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                     b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

}  // namespace

Matrix matrix_exp(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix exponential needs a square matrix");
    if (!m.allFinite()) throw ExpmFailure("non-finite entries in matrix exponential input");
    if (m.size() == 0) return m;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    Matrix result;
    if (hermiticity_residual(m) <= 1e-14 * scale) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        if (es.info() != Eigen::Success) throw ExpmFailure("eigendecomposition failed");
        const Vector ph = es.eigenvalues().array().exp().matrix().cast<Complex>();
        result = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    } else if (hermiticity_residual(-kI * m) <= 1e-14 * scale) {
        // anti-hermitian: exp(iK) with K hermitian, exactly unitary
        Eigen::SelfAdjointEigenSolver<Matrix> es((-kI * m).eval());
        if (es.info() != Eigen::Success) throw ExpmFailure("eigendecomposition failed");
        const Vector ph = (kI * es.eigenvalues().cast<Complex>().array()).exp().matrix();
        result = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    } else {
        result = expm_pade13(m);
    }
    if (!result.allFinite()) throw ExpmFailure("matrix exponential did not converge to finite entries");
    return result;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

Matrix embed(const Matrix& op, std::span<const int> dims, int slot) {
    if (slot < 0 || slot >= static_cast<int>(dims.size())) throw InvalidParameter("embed slot out of range");
    if (op.rows() != dims[slot] || op.cols() != dims[slot]) {
        throw DimensionMismatch("operator dimension " + std::to_string(op.rows()) +
                                " does not match mode dimension " + std::to_string(dims[slot]));
    }
    long pre = 1, post = 1;
    for (int k = 0; k < slot; ++k) pre *= check_dim(dims[k]);
    for (int k = slot + 1; k < static_cast<int>(dims.size()); ++k) post *= check_dim(dims[k]);
    return kronecker(kronecker(Matrix::Identity(pre, pre), op), Matrix::Identity(post, post));
}

Matrix embed_pair(const Matrix& op, std::span<const int> dims, int slot_a, int slot_b) {
    const int n = static_cast<int>(dims.size());
    if (slot_a < 0 || slot_b <= slot_a || slot_b >= n) throw InvalidParameter("embed_pair slots out of range");
    const int da = dims[slot_a], db = dims[slot_b];
    if (op.rows() != static_cast<long>(da) * db || op.cols() != op.rows()) {
        throw DimensionMismatch("pair operator must act on the (slot_a, slot_b) product space");
    }
    const long total = product_dim(dims);
    const auto stride = strides_of(dims);
    // flat indices of all modes other than the pair
    std::vector<int> others;
    for (int k = 0; k < n; ++k)
        if (k != slot_a && k != slot_b) others.push_back(k);
    long rest = 1;
    for (int k : others) rest *= dims[k];

    Matrix r = Matrix::Zero(total, total);
    for (long o = 0; o < rest; ++o) {
        long base = 0, rem = o;
        for (int k : others) {
            long block = 1;
            for (int j : others)
                if (j > k) block *= dims[j];
            base += (rem / block) * stride[k];
            rem %= block;
        }
        for (int ia = 0; ia < da; ++ia)
            for (int ib = 0; ib < db; ++ib)
                for (int ja = 0; ja < da; ++ja)
                    for (int jb = 0; jb < db; ++jb) {
                        const Complex v = op(ia * db + ib, ja * db + jb);
                        if (v == Complex(0.0, 0.0)) continue;
                        r(base + ia * stride[slot_a] + ib * stride[slot_b],
                          base + ja * stride[slot_a] + jb * stride[slot_b]) = v;
                    }
    }
    return r;
}

Vector tensor_product(std::span<const Vector> states) {
    if (states.empty()) throw InvalidParameter("tensor product of zero states");
    Vector acc = states[0];
    for (size_t k = 1; k < states.size(); ++k) {
        Vector next(acc.size() * states[k].size());
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            next.segment(i * states[k].size(), states[k].size()) = acc(i) * states[k];
        acc.swap(next);
    }
    return acc;
}

Complex expectation(const Vector& psi, const Matrix& op) {
    if (psi.size() != op.rows() || op.rows() != op.cols()) {
        throw DimensionMismatch("expectation: state dimension " + std::to_string(psi.size()) +
                                " vs operator " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
    }
    return psi.dot(op * psi);
}

Complex expectation(const StateVector& psi, const Matrix& op) { return expectation(psi.amplitudes, op); }

Vector apply_annihilation(const Vector& psi, std::span<const int> dims, int slot) {
    if (slot < 0 || slot >= static_cast<int>(dims.size())) throw InvalidParameter("mode slot out of range");
    const long total = product_dim(dims);
    if (psi.size() != total) throw DimensionMismatch("state size does not match mode dimensions");
    const auto stride = strides_of(dims);
    const int d = dims[slot];
    Vector out = Vector::Zero(total);
    const long s = stride[slot];
    const long outer = total / (static_cast<long>(d) * s);
    for (long hi = 0; hi < outer; ++hi) {
        const long base = hi * d * s;
        for (int n = 1; n < d; ++n) {
            const double w = std::sqrt(static_cast<double>(n));
            for (long lo = 0; lo < s; ++lo) out(base + (n - 1) * s + lo) += w * psi(base + n * s + lo);
        }
    }
    return out;
}

double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double unitarity_residual(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

namespace {

std::vector<long> guarded_indices(std::span<const int> dims, std::span<const int> guards) {
    const auto stride = strides_of(dims);
    std::vector<long> idx{0};
    for (size_t k = 0; k < dims.size(); ++k) {
        const int g = guards.size() == 1 ? guards[0] : guards[k];
        const int keep = dims[k] - g;
        if (keep <= 0) throw InvalidParameter("guard depth removes an entire mode");
        std::vector<long> next;
        next.reserve(idx.size() * keep);
        for (long base : idx)
            for (int n = 0; n < keep; ++n) next.push_back(base + n * stride[k]);
        idx.swap(next);
    }
    return idx;
}

}  // namespace

double guarded_max_abs(const Matrix& m, std::span<const int> dims, std::span<const int> guards) {
    if (m.rows() != product_dim(dims) || m.rows() != m.cols()) {
        throw DimensionMismatch("matrix does not match the listed mode dimensions");
    }
    const auto idx = guarded_indices(dims, guards);
    double mx = 0.0;
    for (long i : idx)
        for (long j : idx) mx = std::max(mx, std::abs(m(i, j)));
    return mx;
}

double guarded_max_abs(const Matrix& m, std::span<const int> dims, int guard_levels) {
    const int g[] = {guard_levels};
    return guarded_max_abs(m, dims, std::span<const int>(g));
}

double mode_tail_mass(const Vector& psi, std::span<const int> dims, int mode, int levels) {
    if (mode < 0 || mode >= static_cast<int>(dims.size())) throw InvalidParameter("mode index out of range");
    const long total = product_dim(dims);
    if (psi.size() != total) throw DimensionMismatch("state size does not match mode dimensions");
    const auto stride = strides_of(dims);
    const int d = dims[mode];
    const long s = stride[mode];
    double mass = 0.0;
    const long outer = total / (static_cast<long>(d) * s);
    for (long hi = 0; hi < outer; ++hi)
        for (int n = std::max(0, d - levels); n < d; ++n)
            for (long lo = 0; lo < s; ++lo) mass += std::norm(psi(hi * d * s + n * s + lo));
    return mass;
}

double total_tail_mass(const Vector& psi, std::span<const int> dims, int levels) {
    double mass = 0.0;
    for (int k = 0; k < static_cast<int>(dims.size()); ++k) mass += mode_tail_mass(psi, dims, k, levels);
    return mass;
}

}  // namespace gravicav::qcore
