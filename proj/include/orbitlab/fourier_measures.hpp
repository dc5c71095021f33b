#pragma once

#include <string>
#include <vector>

#include "orbitlab/num_core.hpp"

namespace orbitlab {

/// Point mass at e^{i t}.
struct Atom {
    double position;  // angle t
    cplx mass;
};

/// mass times normalized arc length on {e^{it} : |t - center| <= halfwidth}.
struct ArcPart {
    double halfwidth;
    double center = 0.0;
    double mass = 1.0;
};

/// Absolutely continuous part f dλ with f sampled on t_k = 2 pi k / G.
struct DensityPart {
    std::vector<cplx> samples;
    std::vector<cplx> coeffs;  // hat f(n) for n = 0..G-1 (mod G), filled by make_density
};

DensityPart make_density(std::vector<cplx> samples);
DensityPart load_density_csv(const std::string& path);

/// Self-similar measure on [0, 1] pushed to the circle by x -> e^{2 pi i x}:
/// nu = sum_j weights_j nu o S_j^{-1} with S_j(x) = ratio x + offsets_j.
struct SelfSimilarPart {
    double ratio;
    std::vector<double> offsets;
    std::vector<double> weights;
    int depth;  // maximal number of product factors
    double mass = 1.0;

    /// Middle-type Cantor measure: offsets 0 and 1 - ratio, weights 1/2.
    static SelfSimilarPart cantor(double ratio, int depth);
};

struct CircleMeasure {
    std::vector<Atom> atoms;
    std::vector<ArcPart> arcs;
    double lebesgue = 0.0;
    std::vector<DensityPart> densities;
    std::vector<SelfSimilarPart> singular;
    std::string label;

    bool has_atoms() const { return !atoms.empty(); }

    static CircleMeasure delta(double position = 0.0, cplx mass = 1.0);
    static CircleMeasure arc(double halfwidth, double center = 0.0);
    static CircleMeasure normalized_lebesgue();
};

/// a mu + b nu, component lists concatenated.
CircleMeasure combine(cplx a, const CircleMeasure& mu, cplx b, const CircleMeasure& nu);

/// "atom:pos,mass;pos,mass" | "arc:hw[@center]" | "lebesgue" | "cantor:ratio,depth" | "density:path", joined by '+'.
CircleMeasure parse_measure(const std::string& spec);

/// hat mu(n) = integral of z^n d mu.
cplx fourier_coeff(const CircleMeasure& mu, long n);

/// means[n] = (n+1)^{-1} sum_{k<=n} |hat mu(k)|^2, n = 0..N.
std::vector<double> cesaro_profile(const CircleMeasure& mu, std::size_t N);

/// d[n] = #{1 <= k <= n : |hat mu(k)| >= eps} / n for n = 1..N; d[0] = 0.
std::vector<double> density_zero_profile(const CircleMeasure& mu, double eps, std::size_t N);

struct NullSubsequence {
    std::vector<std::size_t> indices;  // m_1 < ... < m_L
    std::vector<double> max_coeff;     // max_{j <= min(k, J)} |hat mu_j(m_k)|
    std::vector<std::size_t> flagged;  // measures with declared atoms
};

/// Greedy m_k = first index beyond m_{k-1} with |hat mu_j(m_k)| < 1/k for every j <= k.
NullSubsequence select_null_subsequence(const std::vector<CircleMeasure>& measures, std::size_t L, std::size_t N);

}  // namespace orbitlab
