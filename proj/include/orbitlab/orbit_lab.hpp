#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"
#include "orbitlab/shifts.hpp"
#include "orbitlab/symbols.hpp"
#include "orbitlab/toeplitz_ops.hpp"

namespace orbitlab {

/// Linear operator acting on ComplexVector windows.
class Operator {
public:
    virtual ~Operator() = default;
    virtual ComplexVector apply(const ComplexVector& x) const = 0;
    /// Truncation size; 0 for bilateral (window-based) operators.
    virtual std::size_t dim() const = 0;
    virtual Eigen::MatrixXcd dense() const;
    virtual std::string label() const = 0;
    /// Bound on the error committed by one application to x.
    virtual double step_error(const ComplexVector&) const { return 0.0; }
    virtual double norm_bound() const = 0;
    /// Norm used for orbit profiles.
    virtual double norm(const ComplexVector& x) const { return lp_norm(x, 2.0); }
};

using OperatorPtr = std::shared_ptr<const Operator>;

OperatorPtr dense_operator(Eigen::MatrixXcd m, std::string label = "dense");
OperatorPtr scaled_identity(cplx s, std::size_t dim);
OperatorPtr toeplitz_operator(const ToeplitzTruncation& t);
OperatorPtr shift_operator(const WeightSequence& w);

struct OrbitProfile {
    std::vector<double> norms;  // n = 0..H
    std::string operator_label, vector_label;
    double spill_bound = 0.0;
    int precision_bits = 53;

    std::size_t horizon() const { return norms.empty() ? 0 : norms.size() - 1; }
    std::string to_csv() const;
};

OrbitProfile iterate_orbit(const Operator& T, const ComplexVector& x, std::size_t H, std::string vector_label = "x");
/// Orbit vectors T^n x for n = 0..H.
std::vector<ComplexVector> orbit_vectors(const Operator& T, const ComplexVector& x, std::size_t H);

/// Multiprecision orbit of T_g* on the first N coordinates for a polynomial symbol.
/// bits = 0 chooses enough precision to absorb the growth of rounding errors over H steps.
OrbitProfile iterate_orbit_mp(const SymbolSeries& g, const ComplexVector& x, std::size_t H, unsigned bits = 0);
/// Same, starting from the reproducing kernel k_w (entries conj(w)^n, n < N) built in multiprecision.
OrbitProfile iterate_kernel_orbit_mp(const SymbolSeries& g, cplx w, std::size_t N, std::size_t H, unsigned bits = 0);

struct GrowthReport {
    bool premise_holds = false;
    double premise_min_eig = 0;
    double commutator_norm = 0;
    double tol = 0;
    double s2x_norm = 0;
    std::vector<double> lhs;  // ||T^n x||^2
    std::vector<std::size_t> violations;
    std::string verdict;  // pass, fail or evidence (premise failed, bound not asserted)
};

/// ||T^n x||^2 >= n(n-1)/2 ||S^2 x||^2 under TS = ST and T*T >= S*S + I.
GrowthReport growth_bound(const Operator& T, const Operator& S, const ComplexVector& x, std::size_t H);

struct TailModel {
    enum class Kind { none, expansion, quadratic } kind = Kind::none;
    double value = 0;  // expansion: rho > 1 with ||Tx|| >= rho ||x||; quadratic: ||S^2 x|| > 0
};

struct SummabilityReport {
    std::vector<double> partial_sums;
    double tail_bound = 0;  // finite only when certified
    double total_bound = 0;
    std::string verdict;    // summable (certified), summable (evidence), divergent (evidence)
    double fitted_term_slope = 0;
};

SummabilityReport summability_certificate(const OrbitProfile& profile, double c, TailModel model = {});

struct BallWitness {
    ComplexVector y;
    double margin = 0;
    bool success = false;
    double reciprocal_sum = 0;
};

/// Heuristic search for ||y|| <= 1 with min_n |<x_n, y>| as large as possible.
BallWitness ball_witness_search(const std::vector<ComplexVector>& xs, std::uint64_t seed = 0, int restarts = 10,
                                int iterations = 500);

struct SuperpolyK {
    double k;
    std::vector<double> ratio;  // n^{-k} ||T^n x||, index n (entry 0 unused)
    std::size_t argmin;
    bool tail_monotone;
    std::vector<std::size_t> dips;        // n > argmin with ratio(n) < ratio(n-1)
    std::vector<std::size_t> probe_dips;  // probes where ratio is a running minimum
};

struct SuperpolyReport {
    std::vector<SuperpolyK> per_k;
    std::string label = "evidence";
};

SuperpolyReport superpoly_profile(const OrbitProfile& profile, const std::vector<double>& k_list,
                                  const std::vector<std::size_t>& probes = {});

/// Coefficients a_0..a_{m_max} of (1-z)^k (1+c-cz)^{-n}.
std::vector<double> taylor_coefficients(int k, double c, std::size_t n, std::size_t m_max);
/// a_m by trapezoid quadrature on the contour 2e^{it} - 1.
double taylor_coefficient_contour(int k, double c, std::size_t n, std::size_t m, std::size_t points = 1u << 16);

struct TaylorRow {
    std::size_t n;
    double N;
    double tail_bound;
    std::optional<double> crosscheck_error;
};

struct TaylorNormTable {
    int k;
    double c;
    std::vector<TaylorRow> rows;  // n = 1..n_max
    double A;                     // sup_n N(n) n^{(k-1)/2}
    double fitted_slope;          // log-log slope of N over the last two dyadic decades
};

TaylorNormTable taylor_norms(int k, double c, std::size_t n_max);

/// Least-squares slope of log y against log n over n in [lo, hi].
double loglog_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi);

struct ResolventDecay {
    std::vector<double> values;  // ||(I-S)^k T^{-n}||, index n = 1..n_max (entry 0 unused)
    double power_bound;          // sup_{m <= n_max} ||S^m||
    double A;
    std::vector<double> series_bound;  // power_bound * N(n)
    bool bound_holds;
    double fitted_exponent;
};

ResolventDecay resolvent_decay(const Operator& S, double c, int k, std::size_t n_max);

struct CocoReport {
    double residual;
    double premise_min_eig;
    double tol;
    double s_norm;
};

CocoReport coco_identity(const Operator& S, double c);

}  // namespace orbitlab
