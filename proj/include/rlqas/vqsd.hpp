#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlqas/ansatz.hpp"
#include "rlqas/qcore.hpp"

namespace rlqas {

struct CostReport {
    double cost = 0.0;
    std::vector<double> params_opt;
    std::size_t evals_used = 0;
};

struct EigenReadout {
    std::vector<double> inferred_eigenvalues;  // descending
    std::vector<std::string> bitstrings;       // matching basis labels
    std::vector<PureState> inferred_eigenvectors;
};

// Diagonalisation cost: Tr(rho^2) - Tr(Z(U rho U^dagger)^2) with Z the full
// dephasing channel. Zero exactly when U rho U^dagger is diagonal.
double cost(const DensityMatrix& rho, const ComplexMatrix& u);
double cost(const DensityMatrix& rho, const Circuit& c);
double cost_at(const DensityMatrix& rho, const Circuit& c, const std::vector<double>& params);

// Gradient-free parameter training: adaptive Nelder-Mead, restarted once from
// the best vertex on stagnation. Returns the best point seen, never worse
// than the warm start; evals_used <= budget.
CostReport optimize_params(const DensityMatrix& rho, const Circuit& c,
                           const std::vector<double>& warm_start, std::size_t budget);

// General scalar minimiser used by optimize_params; exposed for reuse.
CostReport nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& start, std::size_t budget);

// Diagonal of U rho U^dagger sorted descending (ties by bitstring order),
// with the matching basis labels and U^dagger |b> eigenvector estimates.
EigenReadout eigen_readout(const DensityMatrix& rho, const ComplexMatrix& u);
EigenReadout eigen_readout(const DensityMatrix& rho, const Circuit& c);

}  // namespace rlqas
