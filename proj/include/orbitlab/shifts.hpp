#pragma once

#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"
#include "orbitlab/symbols.hpp"

namespace orbitlab {

/// Positive weights w_n for n in [-W, W]; T e_n = w_n e_{n-1}.
struct WeightSequence {
    std::vector<double> w;
    long W = 0;
    double p = 2.0;
    std::string label;

    WeightSequence(std::vector<double> weights, double p = 2.0, std::string label = "csv");
    double at(long n) const { return w[static_cast<std::size_t>(n + W)]; }

    /// w_n = 1 for n <= 0, 2 for n > 0.
    static WeightSequence chan_sanders(long W = 4096, double p = 2.0);
    static WeightSequence constant(double v, long W = 4096, double p = 2.0);
    static WeightSequence from_csv(const std::string& path, double p = 2.0);
};

/// r_0 = 1, r_n = (w_1...w_n)^{-1} for n > 0, r_n = w_{n+1}...w_0 for n < 0.
struct RSequence {
    long W = 0;
    std::vector<double> r;      // direct products (may under/overflow far out)
    std::vector<double> log_r;  // always representable
    double at(long n) const { return r[static_cast<std::size_t>(n + W)]; }
    double log_at(long n) const { return log_r[static_cast<std::size_t>(n + W)]; }
};

RSequence r_sequence(const WeightSequence& w);

struct BwsVerdict {
    Tri r_bounded = Tri::undetermined;
    Tri forward_liminf_zero = Tri::undetermined;    // liminf r_n = 0 as n -> +inf
    Tri backward_liminf_positive = Tri::undetermined;  // liminf r_{-n} > 0
    Tri whc_candidate = Tri::undetermined;
    Tri norm_hypercyclic = Tri::undetermined;
    double log_r_max = 0;
    double outer_min_forward = 0;   // min of r_n over the outer quarter n in [3W/4, W]
    double outer_min_backward = 0;  // min of r_{-n} over the same range
    std::string evidence = "finite-horizon evidence (outer quarter of the window)";
};

BwsVerdict classify_bws(const WeightSequence& w);

/// (T x)_n = w_{n+1} x_{n+1}; support moves one step left.
ComplexVector shift_apply(const WeightSequence& w, const ComplexVector& x);
/// Elements 0..steps of the backward orbit, x_0 = x and T x_{k+1} = x_k.
std::vector<ComplexVector> shift_backward(const WeightSequence& w, const ComplexVector& x, int steps);
/// T^{-1}, one step right.
ComplexVector shift_inverse(const WeightSequence& w, const ComplexVector& x);

/// <x, y>_G = sum x_n conj(y_n) / r_n^2.
cplx g_inner(const RSequence& r, const ComplexVector& x, const ComplexVector& y);
double g_norm(const RSequence& r, const ComplexVector& x);

}  // namespace orbitlab
