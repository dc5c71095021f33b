#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"

namespace orbitlab {

enum class Tri { no, yes, undetermined };
const char* to_string(Tri t);

/// Bounded analytic symbol: Taylor coefficients g^(0..M) plus a bound on the discarded tail.
struct SymbolSeries {
    std::vector<cplx> taylor;
    double tail_bound = 0.0;
    std::string label;

    SymbolSeries() = default;
    SymbolSeries(std::vector<cplx> coeffs, double tail, std::string lbl);
    static SymbolSeries polynomial(std::vector<cplx> coeffs, std::string lbl = "poly");
    static SymbolSeries constant(cplx c);

    std::size_t degree() const { return taylor.size() - 1; }
    cplx eval(cplx z) const;  // Horner on the retained coefficients
    double coeff_l1() const;
    double sup_bound() const { return coeff_l1() + tail_bound; }
    bool is_polynomial() const { return tail_bound == 0.0; }
};

/// Boundary values of a real function q on the grid t_k = 2 pi (k + phase)/G.
struct LogModulus {
    std::vector<double> samples;
    double upper_bound;
    double phase = 0.0;  // 0 or 0.5 (half-shifted grid)

    LogModulus(std::vector<double> s, double upper, double phase = 0.0);
    std::size_t gridsize() const { return samples.size(); }
    double angle(std::size_t k) const;
};

LogModulus load_log_modulus_csv(const std::string& path);

/// g(r e^{i t_k}) on G equispaced angles; coefficients are folded mod G so the values are exact.
std::vector<cplx> eval_on_circle(const std::vector<cplx>& taylor, double r, std::size_t G);

std::vector<cplx> boundary_eval(const SymbolSeries& g, std::size_t gridsize);

/// Outer function with log|h| = q on the circle and h(0) > 0.
/// Without M the truncation is the smallest one whose tail is below 1e-12 (capped at G/2 - 1).
SymbolSeries outer_from_log_modulus(const LogModulus& q, std::optional<std::size_t> M = std::nullopt);

struct RefinedIntegral {
    std::vector<double> estimates;  // midpoint sums on successive dyadic grids
    bool divergent = false;
    double value = 0.0;  // last estimate, or -infinity when divergent
};

/// Midpoint rule for (1/2pi) int_0^{2pi} f on G, 2G, ... grids.
/// Divergence: the refinement differences fail to shrink (ratio >= 0.75) twice in a row, or f is not finite.
RefinedIntegral refine_integral(const std::function<double(double)>& f, std::size_t G0, int levels = 4);

struct ClassReport {
    double interior_min_modulus = 0;
    double boundary_min_modulus = 0;
    double boundary_max_modulus = 0;
    double unit_level_measure_estimate = 0;
    double log_gap_integral = 0;  // -infinity when divergent
    bool log_gap_finite = false;
    std::vector<double> log_gap_estimates;
    Tri in_E = Tri::undetermined;
    Tri in_E0 = Tri::undetermined;
    Tri in_E1 = Tri::undetermined;
    std::vector<double> radii;
    std::size_t angles = 0;
    std::size_t boundary_grid = 0;
};

ClassReport class_check(const SymbolSeries& g);

/// Outer h with |h| = |g| - 1 on the circle.
SymbolSeries cap_function(const SymbolSeries& g);

/// log p for a smooth p with p(1) = 1, p > 1 elsewhere, sup_{|t| <= arcs[n]} p <= targets[n], sup p <= 2.
LogModulus smooth_bump_modulus(const std::vector<double>& arcs, const std::vector<double>& targets,
                               std::size_t gridsize = 1u << 14);

}  // namespace orbitlab
