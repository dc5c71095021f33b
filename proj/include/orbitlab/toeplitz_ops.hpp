#pragma once

#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"
#include "orbitlab/symbols.hpp"

namespace orbitlab {

enum class Flavor { analytic, coanalytic };

/// N x N compression of T_g (lower triangular) or T_g* (upper triangular).
struct ToeplitzTruncation {
    SymbolSeries symbol;
    std::size_t dim;
    Flavor flavor;
    bool exact;

    Eigen::MatrixXcd dense() const;
    /// Upper-triangular form; only for the coanalytic flavor.
    UpperToeplitz upper() const;
    ComplexVector apply(const ComplexVector& x) const;
};

ToeplitzTruncation build(const SymbolSeries& g, std::size_t N, Flavor flavor);

/// rows x cols block of the matrix of T_g, entries g^(j-k).
Eigen::MatrixXcd lower_block(const SymbolSeries& g, std::size_t rows, std::size_t cols);
/// P_N T_g* T_g P_N, exact for polynomial g.
Eigen::MatrixXcd star_left(const SymbolSeries& g, std::size_t N);
/// P_N T_g T_g* P_N, exact for every g.
Eigen::MatrixXcd star_right(const SymbolSeries& g, std::size_t N);

struct KernelEigen {
    cplx eigenvalue;
    double residual;
    double bound;  // a priori bound: truncated kernel, symbol tail, rounding
};

/// T_g* k_w = conj(g(w)) k_w with k_w = sum conj(w)^n e_n.
KernelEigen kernel_eigencheck(const SymbolSeries& g, cplx w, std::size_t N);

/// Boundary grid size that resolves |g|^2 for every symbol in the lists.
std::size_t modulus_grid(const std::vector<SymbolSeries>& symbols);

struct PositivityReport {
    double min_eig;
    double tol;
    double H_min;        // boundary-grid minimum of H
    bool H_nonnegative;  // H >= -1e-6 on the grid
    bool holds;          // H >= 0 implies min_eig >= -tol
    std::string verdict; // pass, fail or evidence
};

/// S = sum T_h* T_h - sum T_g* T_g against H = sum |h|^2 - sum |g|^2.
PositivityReport positivity_equiv(const std::vector<SymbolSeries>& h_list, const std::vector<SymbolSeries>& g_list,
                                  std::size_t N, double tol = -1.0);

struct DominanceReport {
    double min_eig_star_right;  // T_g T_g* - sum T_h T_h*
    double min_eig_star_left;   // T_g* T_g - sum T_h* T_h
    double tol;
    bool dominated;      // min_eig_star_right >= -tol
    bool orderings_agree;
    double g_interior_min;
};

DominanceReport dominance_check(const std::vector<SymbolSeries>& h_list, const SymbolSeries& g, std::size_t N,
                                double tol = -1.0);

struct Tridiag {
    cplx a, b, c;  // symbol a/z + b + c z
};

/// (N+1) x N block of the matrix of T_g for g = a/z + b + cz.
Eigen::MatrixXcd tridiag_block(const Tridiag& t, std::size_t rows, std::size_t cols);

struct HyponormalReport {
    double min_eig;
    double tol;
    Eigen::MatrixXcd commutator;  // compression of T*T - TT*
    double deviation;             // distance to the predicted form, when one is known
};

HyponormalReport hyponormality_check(const SymbolSeries& g, std::size_t N);
HyponormalReport hyponormality_check(const Tridiag& t, std::size_t N);

struct TridiagEigenPair {
    cplx a, b, c, z, lambda;
    ComplexVector coeffs;
    double residual;
    double residual_literal;  // residual for the candidate a/z + b + cz
    bool degenerate;
};

/// N = 0 picks N so that both geometric tails are below 1e-14.
TridiagEigenPair tridiag_eigen(const Tridiag& t, cplx z, std::size_t N = 0);

enum class HcVerdict { hypercyclic, not_hypercyclic, boundary_marginal };
const char* to_string(HcVerdict v);

struct HcReport {
    HcVerdict verdict;
    double min_modulus;  // over the sampled region (disk for T_g*, circle for tridiagonal)
    double max_modulus;
    std::string reason;
};

HcReport hypercyclicity_classify(const SymbolSeries& g);
HcReport hypercyclicity_classify(const Tridiag& t);

}  // namespace orbitlab
