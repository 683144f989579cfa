#include "rlqas/vqsd.hpp"

#include <algorithm>
#include <cmath>

namespace rlqas {

namespace {

// Diagonal entries of U rho U^dagger without forming the full product:
// d_b = row_b(U) rho row_b(U)^dagger.
void evolved_diagonal(const DensityMatrix& rho, const ComplexMatrix& u, double* out) {
    const std::size_t d = rho.dim();
    for (std::size_t b = 0; b < d; ++b) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            cplx row_i(0.0, 0.0);
            for (std::size_t j = 0; j < d; ++j) row_i += rho.mat()(i, j) * std::conj(u(b, j));
            acc += u(b, i) * row_i;
        }
        out[b] = acc.real();
    }
}

double cost_from_diagonal(const DensityMatrix& rho, const double* diag, std::size_t d) {
    double dephased_purity = 0.0;
    for (std::size_t b = 0; b < d; ++b) dephased_purity += diag[b] * diag[b];
    const double c = purity(rho) - dephased_purity;
    return std::max(c, 0.0);
}

std::string basis_label(std::size_t index, std::size_t n_qubits) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q)
        if (index & (std::size_t(1) << (n_qubits - 1 - q))) s[q] = '1';
    return s;
}

}  // namespace

double cost(const DensityMatrix& rho, const ComplexMatrix& u) {
    if (u.rows() != rho.dim() || u.cols() != rho.dim())
        throw DimensionMismatchError("cost: unitary does not match state dimension");
    const std::size_t d = rho.dim();
    std::vector<double> diag(d);
    evolved_diagonal(rho, u, diag.data());
    return cost_from_diagonal(rho, diag.data(), d);
}

double cost(const DensityMatrix& rho, const Circuit& c) {
    if ((std::size_t(1) << c.n_qubits) != rho.dim())
        throw DimensionMismatchError("cost: circuit does not match state dimension");
    return cost(rho, to_unitary(c));
}

double cost_at(const DensityMatrix& rho, const Circuit& c, const std::vector<double>& params) {
    if (params.size() != c.params.size())
        throw UnboundParamsError("cost_at: parameter count mismatch");
    Circuit tmp = c;
    tmp.params = params;
    return cost(rho, tmp);
}

CostReport nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& start, std::size_t budget) {
    const std::size_t n = start.size();
    CostReport best;
    best.params_opt = start;
    best.evals_used = 0;

    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        ++evals;
        if (v < best.cost || evals == 1) {
            best.cost = v;
            best.params_opt = x;
        }
        return v;
    };

    if (n == 0 || budget <= 1) {
        best.cost = eval(start);
        best.evals_used = evals;
        return best;
    }

    // Adaptive coefficients (scaled with dimension).
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / nd;
    const double gamma = 0.75 - 1.0 / (2.0 * nd);
    const double delta = 1.0 - 1.0 / nd;
    const double spread_tol = 1e-8;
    const double init_step = 0.25;

    std::vector<std::vector<double>> simplex;
    std::vector<double> fval;

    auto build_simplex = [&](const std::vector<double>& x0, double step) {
        simplex.assign(1, x0);
        for (std::size_t i = 0; i < n && evals < budget; ++i) {
            std::vector<double> xi = x0;
            xi[i] += step;
            simplex.push_back(xi);
        }
        fval.clear();
        for (const auto& x : simplex) {
            if (evals >= budget) break;
            fval.push_back(eval(x));
        }
        simplex.resize(fval.size());
    };

    build_simplex(start, init_step);

    int restarts_left = 1;
    while (evals < budget && simplex.size() == n + 1) {
        // Order the simplex by value.
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fval[a] < fval[b]; });
        std::vector<std::vector<double>> sx(simplex.size());
        std::vector<double> sf(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            sx[i] = simplex[idx[i]];
            sf[i] = fval[idx[i]];
        }
        simplex.swap(sx);
        fval.swap(sf);

        if (fval.back() - fval.front() < spread_tol) {
            if (restarts_left == 0) break;
            --restarts_left;
            build_simplex(best.params_opt, init_step * 0.1);
            continue;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t v = 0; v < n; ++v) centroid[i] += simplex[v][i];
            centroid[i] /= nd;
        }

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i)
                x[i] = centroid[i] + coef * (centroid[i] - simplex[n][i]);
            return x;
        };

        const std::vector<double> xr = blend(alpha);
        const double fr = eval(xr);
        if (evals >= budget) break;

        if (fr < fval[0]) {
            const std::vector<double> xe = blend(alpha * beta);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fval[n] = fe;
            } else {
                simplex[n] = xr;
                fval[n] = fr;
            }
        } else if (fr < fval[n - 1]) {
            simplex[n] = xr;
            fval[n] = fr;
        } else {
            const bool outside = fr < fval[n];
            const std::vector<double> xc = blend(outside ? alpha * gamma : -gamma);
            const double fc = eval(xc);
            if (evals >= budget) break;
            if (fc < (outside ? fr : fval[n])) {
                simplex[n] = xc;
                fval[n] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t v = 1; v <= n && evals < budget; ++v) {
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[v][i] = simplex[0][i] + delta * (simplex[v][i] - simplex[0][i]);
                    fval[v] = eval(simplex[v]);
                }
            }
        }
    }

    best.evals_used = evals;
    return best;
}

CostReport optimize_params(const DensityMatrix& rho, const Circuit& c,
                           const std::vector<double>& warm_start, std::size_t budget) {
    if (warm_start.size() != c.params.size())
        throw UnboundParamsError("optimize_params: warm start length mismatch");
    if (budget < 1) budget = 1;
    auto f = [&](const std::vector<double>& params) { return cost_at(rho, c, params); };
    return nelder_mead(f, warm_start, budget);
}

EigenReadout eigen_readout(const DensityMatrix& rho, const ComplexMatrix& u) {
    const std::size_t d = rho.dim();
    std::vector<double> diag(d);
    evolved_diagonal(rho, u, diag.data());

    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (diag[a] != diag[b]) return diag[a] > diag[b];
        return a < b;  // bitstring lexicographic order equals index order
    });

    const ComplexMatrix udag = u.dagger();
    EigenReadout out;
    for (std::size_t r = 0; r < d; ++r) {
        const std::size_t b = order[r];
        out.inferred_eigenvalues.push_back(diag[b]);
        out.bitstrings.push_back(basis_label(b, rho.n_qubits()));
        std::vector<cplx> amps(d);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            amps[i] = udag(i, b);
            norm2 += std::norm(amps[i]);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (cplx& a : amps) a *= inv;
        out.inferred_eigenvectors.emplace_back(rho.n_qubits(), std::move(amps));
    }
    return out;
}

EigenReadout eigen_readout(const DensityMatrix& rho, const Circuit& c) {
    return eigen_readout(rho, to_unitary(c));
}

}  // namespace rlqas
