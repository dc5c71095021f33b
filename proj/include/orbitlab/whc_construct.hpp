#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/orbit_lab.hpp"
#include "orbitlab/shifts.hpp"
#include "orbitlab/symbols.hpp"

namespace orbitlab {

using IndexFn = std::function<double(std::size_t)>;

/// Interleaving map phi: {1..H} -> {1, 2, ...}; assignments[j-1] = phi(j).
struct PhiMap {
    std::vector<int> assignments;
    std::vector<std::size_t> blocks;  // r_1, r_2, ... (the last one may run past the horizon)
    std::size_t completed_blocks = 0;
    /// (1/d_m) sum_{j <= k_{n,m}} c_phi(j) for n = 1..completed_blocks: at the horizon and at each completed block end.
    std::vector<double> ratio_at_horizon;
    std::vector<std::vector<double>> ratio_at_block_end;  // [n-1][s-1] for blocks s >= n

    std::size_t horizon() const { return assignments.size(); }
    int operator()(std::size_t j) const { return assignments.at(j - 1); }
    std::size_t count(int k) const;

    /// phi(j) = ((j-1) mod K) + 1.
    static PhiMap cyclic(int K, std::size_t H);
};

/// Block construction of the interleaving map from positive c and d with n/d_n -> 0.
PhiMap phi_map(const IndexFn& c, const IndexFn& d, std::size_t H);

using InnerFn = std::function<cplx(const ComplexVector&, const ComplexVector&)>;

struct GramReport {
    std::vector<double> inv_sq_partial;  // partial sums of ||a_n||^-2
    double r = 0;                        // sum_{m<n} |<v_m, v_n>|^2 with v = a/||a||
    double d = 1;                        // 1 + sqrt(2r): sound bound on the Gram operator norm
    double d_stated = 1;                 // 1 + sqrt(r/2), which the largest eigenvalue can exceed
    double gram_max_eig = 0;             // largest eigenvalue of the Gram matrix of the v_n
    double score = 0;                    // min_n max_y |<a_n, y>|
    Tri sum_divergent = Tri::undetermined;
    Tri r_bounded = Tri::undetermined;
    bool hypotheses_hold = false;
};

/// inner = nullptr selects the plain l2 pairing.
GramReport gram_check(const std::vector<ComplexVector>& a, const std::vector<ComplexVector>& battery,
                      const InnerFn& inner = nullptr);

/// Weighted-shift instance: T = T_w, u_{k,n} = T^n u_{k,0}, inner product of the weighted space G.
struct WHCInstance {
    WeightSequence w;
    RSequence r;
    std::vector<ComplexVector> targets;  // u_{k,0}, k = 1..K
    std::vector<std::size_t> admissible;  // A; empty means every positive integer
    double op_norm;                       // sup |w_n| = ||T||

    WHCInstance(WeightSequence w, std::vector<ComplexVector> targets, std::vector<std::size_t> admissible = {});

    /// K targets with random rational entries on indices -2..2.
    static WHCInstance chan_sanders(int K, long W, std::uint64_t seed);

    int K() const { return static_cast<int>(targets.size()); }
    /// u_{k,n} for any integer n; throws NumericalFailure when the support leaves the window.
    ComplexVector u(int k, long n) const;
    cplx inner(const ComplexVector& x, const ComplexVector& y) const { return g_inner(r, x, y); }
    double c(int k) const;  // sup_n ||u_{k,n}||_0
    double xnorm(const ComplexVector& x) const { return lp_norm(x, w.p); }
};

struct ThetaSchedule {
    std::vector<long> theta;  // theta(1..J), theta(1) = 0
    bool e5 = false, e6 = false, e7 = false;
    double e5_worst = 0;  // max over j of (largest e5 inner product) * 2^j
    double e6_worst = 0;  // same ratio against c c 4^-j
    double e7_worst = 0;  // max over j of ||u_{phi(j),-theta(j)}|| / (||T||^-theta(j-1) 2^-j)
};

ThetaSchedule build_theta(const WHCInstance& inst, const PhiMap& phi, std::size_t J);
/// Re-evaluates (e5), (e6), (e7) on a given schedule.
ThetaSchedule verify_theta(const WHCInstance& inst, const PhiMap& phi, const std::vector<long>& theta);

struct StageDecomposition {
    std::size_t r;
    ComplexVector orbit_point;  // T^theta(r) u by direct application
    ComplexVector a, b;
    double b_norm;
    double b_bound;  // 2^-r
    double mismatch;
};

struct ConstructionTrace {
    ComplexVector u;
    std::vector<long> theta;
    std::vector<int> phi;  // phi(1..J)
    std::vector<StageDecomposition> stages;
    bool b_bounds_hold = true;
    std::vector<GramReport> gram;  // per target, family {a_r : r in A_k, a_r != 0}
};

ConstructionTrace assemble_and_decompose(const WHCInstance& inst, const ThetaSchedule& schedule, const PhiMap& phi,
                                         const std::vector<ComplexVector>& battery = {});

/// count unit functionals with random complex entries on indices lo..hi.
std::vector<ComplexVector> functional_battery(int count, long lo, long hi, std::uint64_t seed);

struct VisitError {
    int target;
    double err;  // infinity when no stage visits the target
    std::optional<std::size_t> stage;
};

/// err_k = min over stages r with phi(r) = k of max_y |<T^theta(r) u - u_{k,0}, y>|.
std::vector<VisitError> weak_visit_report(const WHCInstance& inst, const ConstructionTrace& trace,
                                          const std::vector<ComplexVector>& battery);

using RateFn = std::function<double(double)>;

struct SlowStage {
    double arc;             // half-width of I_n
    double phi_l2;          // ||phi_n||_{L^2}
    double functional_norm; // ||Phi_{phi_n}||
    double ls_residual;     // ||Phi_{phi_n} - Phi_{phi_{n-1}}||
    double ls_target;       // 5^{1-n} q(k_{n-1}) 2^{-k_{n-1}}
    std::size_t k;
    double arc_sup_g;       // sup over I_n of |g| on the boundary grid
    double arc_target;      // 2^{1/k_n}
};

struct SlowDip {
    std::size_t k;
    double norm;    // ||(T_g*)^k f||
    double spill;   // truncation allowance
    double q;
    bool verified;  // norm + spill < q(k)
};

struct SlowGrowthTrace {
    std::vector<SlowStage> stages;
    SymbolSeries g;
    ComplexVector f;
    OrbitProfile orbit;
    std::vector<SlowDip> dips;
    double g_sup;               // sup |g| on the boundary grid
    double resolution_diagnostic;  // max relative gap to ||P_N rep(g^k phi_S)|| over the dips
    bool all_verified = false;
};

/// window = boundary grid size G; the truncated Hardy space keeps G/4 coefficients.
SlowGrowthTrace slow_growth_search(const RateFn& q, std::size_t stages, std::size_t window = 1u << 12);

}  // namespace orbitlab
