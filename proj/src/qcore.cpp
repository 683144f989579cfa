#include "rlqas/qcore.hpp"

#include <algorithm>
#include <cmath>

namespace rlqas {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdReject = 1e-8;

std::size_t require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatchError(std::string(who) + ": matrix is not square");
    }
    return m.rows();
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatchError("matrix product: inner dimensions differ");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t l = 0; l < cols_; ++l) {
            const cplx a = (*this)(i, l);
            if (a == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(l, j);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionMismatchError("matrix sum: shapes differ");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionMismatchError("matrix difference: shapes differ");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx s) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * s;
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t(0.0, 0.0);
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw DimensionMismatchError("max_abs_diff: shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - rhs.data_[i]));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    if (rows_ != cols_) return false;
    const ComplexMatrix p = dagger() * (*this);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(p(i, j) - want) > tol) return false;
        }
    return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

Spectrum hermitian_eig(const ComplexMatrix& m) {
    const std::size_t n = require_square(m, "hermitian_eig");
    if (n > 16) throw DimensionMismatchError("hermitian_eig: dimension above 16");
    if (!m.is_hermitian(kHermTol)) throw NonHermitianError("hermitian_eig: input not Hermitian");

    ComplexMatrix a = m;
    // Symmetrise exactly so rounding in the input cannot bias the sweeps.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    const int max_sweeps = 200;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) < 1e-14 * std::max(1.0, a.frobenius_norm())) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq < 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Phase of the off-diagonal element, then a real Jacobi angle.
                const cplx phase = apq / abs_apq;
                const double theta = (aqq - app) / (2.0 * abs_apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx sp = s * phase;        // G(p,q) entry
                const cplx spc = std::conj(sp);   // -G(q,p) entry sign folded below

                // A <- G^dagger A G applied to rows/columns p and q.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p);
                    const cplx aiq = a(i, q);
                    a(i, p) = c * aip - spc * aiq;
                    a(i, q) = sp * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j);
                    const cplx aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = spc * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p);
                    const cplx viq = v(i, q);
                    v(i, p) = c * vip - spc * viq;
                    v(i, q) = sp * vip + c * viq;
                }
                a(p, q) = cplx(0.0, 0.0);
                a(q, p) = cplx(0.0, 0.0);
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) >= 1e-12 * std::max(1.0, a.frobenius_norm()))
            throw NoConvergenceError("hermitian_eig: 200-sweep cap exceeded");
    }

    // Fix each eigenvector's phase: first component of magnitude > 1e-9 made
    // real positive. Keeps output deterministic and enables the tie rule.
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vij = v(i, j);
            if (std::abs(vij) > 1e-9) {
                const cplx ph = std::conj(vij) / std::abs(vij);
                for (std::size_t r = 0; r < n; ++r) v(r, j) *= ph;
                break;
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto vec_lex_less = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vx = v(i, x);
            const cplx vy = v(i, y);
            if (vx.real() != vy.real()) return vx.real() < vy.real();
            if (vx.imag() != vy.imag()) return vx.imag() < vy.imag();
        }
        return false;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double lx = a(x, x).real();
        const double ly = a(y, y).real();
        if (lx != ly) return lx > ly;
        return vec_lex_less(x, y);
    });

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

PureState::PureState(std::size_t n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    const std::size_t want = std::size_t(1) << n_qubits;
    if (amplitudes_.size() != want)
        throw DimensionMismatchError("PureState: amplitude count != 2^n");
    double norm2 = 0.0;
    for (const cplx& a : amplitudes_) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw StateValidationError("PureState: squared norm deviates from 1");
}

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix mat)
    : n_qubits_(n_qubits), mat_(std::move(mat)) {
    const std::size_t d = std::size_t(1) << n_qubits;
    if (mat_.rows() != d || mat_.cols() != d)
        throw DimensionMismatchError("DensityMatrix: matrix is not 2^n x 2^n");
    if (!mat_.is_hermitian(kHermTol))
        throw StateValidationError("DensityMatrix: not Hermitian within 1e-10");
    if (std::abs(mat_.trace() - cplx(1.0, 0.0)) > kTraceTol)
        throw StateValidationError("DensityMatrix: trace deviates from 1");

    const Spectrum spec = hermitian_eig(mat_);
    const double min_eig = spec.eigenvalues.back();
    if (min_eig < -kPsdReject)
        throw StateValidationError("DensityMatrix: eigenvalue below -1e-8");
    if (min_eig < 0.0) {
        // Clamp the small negative tail and renormalise.
        std::vector<double> lam = spec.eigenvalues;
        double total = 0.0;
        for (double& l : lam) {
            if (l < 0.0) l = 0.0;
            total += l;
        }
        ComplexMatrix rebuilt(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                cplx acc(0.0, 0.0);
                for (std::size_t k = 0; k < d; ++k)
                    acc += spec.eigenvectors(i, k) * (lam[k] / total) *
                           std::conj(spec.eigenvectors(j, k));
                rebuilt(i, j) = acc;
            }
        mat_ = rebuilt;
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    const std::size_t d = psi.dim();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(psi.n_qubits(), std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
    const std::size_t d = std::size_t(1) << n_qubits;
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0 / static_cast<double>(d);
    return DensityMatrix(n_qubits, std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::computational_basis(std::size_t n_qubits, std::size_t index) {
    const std::size_t d = std::size_t(1) << n_qubits;
    if (index >= d) throw BadIndexError("computational_basis: index out of range");
    ComplexMatrix m(d, d);
    m(index, index) = 1.0;
    return DensityMatrix(n_qubits, std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::diagonal(std::size_t n_qubits, const std::vector<double>& probs) {
    const std::size_t d = std::size_t(1) << n_qubits;
    if (probs.size() != d) throw DimensionMismatchError("diagonal: need 2^n probabilities");
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = probs[i];
    return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
    if (u.rows() != rho.dim() || u.cols() != rho.dim())
        throw DimensionMismatchError("apply_unitary: unitary does not match state dimension");
    if (!u.is_unitary(kUnitaryTol)) throw NonUnitaryError("apply_unitary: matrix not unitary");
    return DensityMatrix(rho.n_qubits(), u * rho.mat() * u.dagger(), DensityMatrix::Unchecked{});
}

PureState apply_unitary(const PureState& psi, const ComplexMatrix& u) {
    if (u.rows() != psi.dim() || u.cols() != psi.dim())
        throw DimensionMismatchError("apply_unitary: unitary does not match state dimension");
    if (!u.is_unitary(kUnitaryTol)) throw NonUnitaryError("apply_unitary: matrix not unitary");
    std::vector<cplx> out(psi.dim(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < psi.dim(); ++i)
        for (std::size_t j = 0; j < psi.dim(); ++j) out[i] += u(i, j) * psi[j];
    return PureState(psi.n_qubits(), std::move(out));
}

DensityMatrix dephase(const DensityMatrix& rho) {
    const std::size_t d = rho.dim();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = cplx(rho.mat()(i, i).real(), 0.0);
    return DensityMatrix(rho.n_qubits(), std::move(m), DensityMatrix::Unchecked{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
    const std::size_t n = rho.n_qubits();
    if (keep.empty()) throw BadIndexError("partial_trace: keep set empty");
    std::vector<std::size_t> kept = keep;
    std::sort(kept.begin(), kept.end());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] >= n) throw BadIndexError("partial_trace: qubit index out of range");
        if (i > 0 && kept[i] == kept[i - 1]) throw BadIndexError("partial_trace: duplicate index");
    }

    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q)
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

    // Qubit q occupies bit (n-1-q) of the basis index (qubit 0 = MSB).
    auto bit_of = [n](std::size_t q) { return n - 1 - q; };

    const std::size_t dk = std::size_t(1) << kept.size();
    const std::size_t dt = std::size_t(1) << traced.size();
    ComplexMatrix out(dk, dk);
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = 0; c < dk; ++c) {
            cplx acc(0.0, 0.0);
            for (std::size_t t = 0; t < dt; ++t) {
                std::size_t row = 0, col = 0;
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    const std::size_t bit = (r >> (kept.size() - 1 - i)) & 1;
                    const std::size_t cbit = (c >> (kept.size() - 1 - i)) & 1;
                    row |= bit << bit_of(kept[i]);
                    col |= cbit << bit_of(kept[i]);
                }
                for (std::size_t i = 0; i < traced.size(); ++i) {
                    const std::size_t bit = (t >> (traced.size() - 1 - i)) & 1;
                    row |= bit << bit_of(traced[i]);
                    col |= bit << bit_of(traced[i]);
                }
                acc += rho.mat()(row, col);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(kept.size(), std::move(out), DensityMatrix::Unchecked{});
}

double purity(const DensityMatrix& rho) {
    double s = 0.0;
    for (const cplx& z : rho.mat().data()) s += std::norm(z);
    return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const Spectrum spec = hermitian_eig(rho.mat());
    double s = 0.0;
    for (double l : spec.eigenvalues) {
        if (l > 1e-15) s -= l * std::log2(l);
    }
    return std::max(s, 0.0);
}

double conditional_entropy(const DensityMatrix& rho, std::size_t target) {
    if (rho.n_qubits() != 2) throw DimensionMismatchError("conditional_entropy: need 2 qubits");
    if (target > 1) throw BadIndexError("conditional_entropy: target must be 0 or 1");
    const std::size_t other = 1 - target;
    const DensityMatrix marginal = partial_trace(rho, {other});
    return von_neumann_entropy(rho) - von_neumann_entropy(marginal);
}

double concurrence_mixed(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) throw DimensionMismatchError("concurrence_mixed: need 2 qubits");

    // Spin flip (sigma_y x sigma_y) rho* (sigma_y x sigma_y); the double-y
    // tensor is the anti-diagonal \{-1, 1, 1, -1\} sign pattern.
    ComplexMatrix yy(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const ComplexMatrix rho_tilde = yy * rho.mat().conjugate() * yy;

    // Eigenvalues of rho * rho_tilde equal those of the Hermitian PSD matrix
    // sqrt(rho) rho_tilde sqrt(rho); only the Hermitian solver is needed.
    const Spectrum srho = hermitian_eig(rho.mat());
    ComplexMatrix sqrt_rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t k = 0; k < 4; ++k) {
                const double l = std::max(srho.eigenvalues[k], 0.0);
                acc += srho.eigenvectors(i, k) * std::sqrt(l) *
                       std::conj(srho.eigenvectors(j, k));
            }
            sqrt_rho(i, j) = acc;
        }
    ComplexMatrix m = sqrt_rho * rho_tilde * sqrt_rho;
    // Symmetrise away rounding before the Hermitian solve.
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }

    const Spectrum spec = hermitian_eig(m);
    // Eigenvalues of M sit near machine noise for low-rank states; the square
    // root amplifies that to ~1e-8, so clamp relative to the leading one.
    const double cutoff = std::max(spec.eigenvalues[0], 0.0) * 1e-12;
    double lams[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const double e = spec.eigenvalues[i];
        lams[i] = e > cutoff ? std::sqrt(e) : 0.0;
    }
    const double c = lams[0] - lams[1] - lams[2] - lams[3];
    return std::clamp(c, 0.0, 1.0);
}

double concurrence_pure(const PureState& psi) {
    if (psi.n_qubits() != 2) throw DimensionMismatchError("concurrence_pure: need 2 qubits");
    const DensityMatrix rho = DensityMatrix::from_pure(psi);
    const DensityMatrix rho_a = partial_trace(rho, {0});
    const double val = 2.0 * (1.0 - purity(rho_a));
    return std::sqrt(std::max(val, 0.0));
}

DensityMatrix sample_hs_random_state(std::size_t n_qubits, std::uint64_t seed) {
    if (n_qubits < 1) throw DimensionMismatchError("sample_hs_random_state: need n >= 1");
    SplitMix64 rng = SplitMix64::derive(seed, 0x48535354ull);  // distinct sampler stream
    const std::size_t d = std::size_t(1) << n_qubits;
    ComplexMatrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    ComplexMatrix ggd = g * g.dagger();
    const double tr = ggd.trace().real();
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = ggd(i, j) * (1.0 / tr);
    // Exact Hermitian symmetrisation; GG^dagger is Hermitian up to rounding.
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = cplx(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < d; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    return DensityMatrix(n_qubits, std::move(m), DensityMatrix::Unchecked{});
}

PureState sample_haar_pure(std::size_t n_qubits, std::uint64_t seed) {
    SplitMix64 rng = SplitMix64::derive(seed, 0x48505552ull);
    const std::size_t d = std::size_t(1) << n_qubits;
    std::vector<cplx> amps(d);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        amps[i] = cplx(rng.normal(), rng.normal());
        norm2 += std::norm(amps[i]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& a : amps) a *= inv;
    return PureState(n_qubits, std::move(amps));
}

}  // namespace rlqas
