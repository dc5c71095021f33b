#include "orbitlab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "orbitlab/fft.hpp"

namespace orbitlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

const char* to_string(Tri t) {
    switch (t) {
        case Tri::no: return "no";
        case Tri::yes: return "yes";
        default: return "undetermined";
    }
}

SymbolSeries::SymbolSeries(std::vector<cplx> coeffs, double tail, std::string lbl)
    : taylor(std::move(coeffs)), tail_bound(tail), label(std::move(lbl)) {
    if (taylor.empty()) throw InvalidInput("SymbolSeries: no coefficients");
    if (!std::isfinite(tail_bound) || tail_bound < 0) throw InvalidInput("SymbolSeries: tail bound must be finite and >= 0");
    for (auto& c : taylor)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidInput("SymbolSeries: non-finite coefficient");
}

SymbolSeries SymbolSeries::polynomial(std::vector<cplx> coeffs, std::string lbl) {
    return SymbolSeries(std::move(coeffs), 0.0, std::move(lbl));
}

SymbolSeries SymbolSeries::constant(cplx c) {
    std::ostringstream os;
    os << "const " << c;
    return SymbolSeries({c}, 0.0, os.str());
}

cplx SymbolSeries::eval(cplx z) const {
    cplx s = 0.0;
    for (auto it = taylor.rbegin(); it != taylor.rend(); ++it) s = s * z + *it;
    return s;
}

double SymbolSeries::coeff_l1() const {
    double s = 0;
    for (auto& c : taylor) s += std::abs(c);
    return s;
}

LogModulus::LogModulus(std::vector<double> s, double upper, double ph)
    : samples(std::move(s)), upper_bound(upper), phase(ph) {
    if (!fft::is_pow2(samples.size())) throw InvalidInput("LogModulus: grid size must be a power of two");
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (std::isnan(samples[k]) || samples[k] == std::numeric_limits<double>::infinity()) {
            std::ostringstream os;
            os << "LogModulus: sample " << k << " is not bounded above";
            throw InvalidInput(os.str());
        }
        if (samples[k] > upper_bound + 1e-12 * std::max(1.0, std::abs(upper_bound))) {
            std::ostringstream os;
            os << "LogModulus: sample " << k << " = " << samples[k] << " exceeds the upper bound " << upper_bound;
            throw InvalidInput(os.str());
        }
    }
}

double LogModulus::angle(std::size_t k) const {
    return two_pi * (static_cast<double>(k) + phase) / static_cast<double>(samples.size());
}

LogModulus load_log_modulus_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open log-modulus file " + path);
    std::vector<double> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double x;
        if (!(ls >> x)) {
            if (v.empty() && lineno == 1) continue;  // header row
            throw InvalidInput(path + ": line " + std::to_string(lineno) + " is not a real number");
        }
        v.push_back(x);
    }
    double ub = -std::numeric_limits<double>::infinity();
    for (double x : v) ub = std::max(ub, x);
    return LogModulus(std::move(v), ub);
}

std::vector<cplx> eval_on_circle(const std::vector<cplx>& taylor, double r, std::size_t G) {
    std::vector<cplx> a(G);
    double rm = 1.0;
    for (std::size_t m = 0; m < taylor.size(); ++m) {
        a[m % G] += taylor[m] * rm;
        rm *= r;
    }
    return fft::backward(std::move(a));
}

std::vector<cplx> boundary_eval(const SymbolSeries& g, std::size_t gridsize) {
    if (!fft::is_pow2(gridsize)) throw InvalidInput("boundary_eval: grid size must be a power of two");
    if (gridsize < 2 * g.taylor.size()) {
        std::ostringstream os;
        os << "boundary_eval: grid size " << gridsize << " aliases a degree-" << g.degree() << " series (need >= "
           << 2 * g.taylor.size() << ")";
        throw InvalidInput(os.str());
    }
    return eval_on_circle(g.taylor, 1.0, gridsize);
}

namespace {

// Coefficients h^(0..G-1) of exp(q + i Hq) sampled on t_k = 2 pi (k + phase)/G.
// Entries beyond G/2 carry aliasing residue and should be tiny.
std::vector<cplx> outer_coefficients(const std::vector<double>& q, double phase) {
    const std::size_t G = q.size();
    const double d = two_pi * phase / static_cast<double>(G);
    std::vector<cplx> qc(q.begin(), q.end());
    auto qh = fft::forward(std::move(qc));
    std::vector<cplx> A(G);
    const double invG = 1.0 / static_cast<double>(G);
    for (std::size_t m = 0; m <= G / 2; ++m) {
        const cplx twist = std::polar(1.0, -static_cast<double>(m) * d);
        cplx c = qh[m] * invG * twist;
        if (m == 0) c = c.real();
        else if (m < G / 2) c *= 2.0;
        A[m] = c * std::conj(twist);
    }
    auto Q = fft::backward(std::move(A));
    for (auto& v : Q) v = std::exp(v);
    auto hh = fft::forward(std::move(Q));
    for (std::size_t m = 0; m < G; ++m) {
        const double freq = m <= G / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(G);
        hh[m] *= invG * std::polar(1.0, -freq * d);
    }
    return hh;
}

}  // namespace

SymbolSeries outer_from_log_modulus(const LogModulus& q, std::optional<std::size_t> M) {
    const std::size_t G = q.gridsize();
    if (G < 4) throw InvalidInput("outer_from_log_modulus: grid too small");
    if (M && *M + 1 > G / 2) throw InvalidInput("outer_from_log_modulus: truncation exceeds half the grid");
    auto hh = outer_coefficients(q.samples, q.phase);

    // refinement check against the half grid
    std::vector<double> sub(G / 2);
    for (std::size_t k = 0; k < G / 2; ++k) sub[k] = q.samples[2 * k];
    auto hs = outer_coefficients(sub, q.phase / 2.0);
    double diff = 0, l1 = 0;
    for (std::size_t m = 0; m < G / 4; ++m) {
        diff += std::abs(hh[m] - hs[m]);
        l1 += std::abs(hh[m]);
    }
    if (!(diff <= 1e-4 * l1)) {
        std::ostringstream os;
        os << "outer_from_log_modulus: quadrature not converged under grid refinement (relative change " << diff / l1
           << ")";
        throw NumericalFailure(os.str());
    }

    // fix the branch: h(0) > 0
    const cplx ph = hh[0] / std::abs(hh[0]);
    for (auto& v : hh) v /= ph;

    double alias = 0;
    for (std::size_t m = G / 2; m < G; ++m) alias += std::abs(hh[m]);
    std::size_t cut = G / 2 - 1;
    if (M) {
        cut = *M;
    } else {
        double tail = 0;
        while (cut > 0 && tail + std::abs(hh[cut]) <= 1e-12) tail += std::abs(hh[cut--]);
    }
    double tail = alias;
    for (std::size_t m = cut + 1; m < G / 2; ++m) tail += std::abs(hh[m]);
    std::vector<cplx> coeffs(hh.begin(), hh.begin() + static_cast<long>(cut) + 1);
    return SymbolSeries(std::move(coeffs), tail, "outer");
}

namespace {

// Divergence: refinement differences fail to shrink (ratio >= 0.75) twice in a row, or a non-finite estimate.
void judge(RefinedIntegral& out) {
    out.divergent = out.estimates.empty() || !std::isfinite(out.estimates.back());
    if (!out.divergent) {
        const auto& e = out.estimates;
        int stalls = 0, worst = 0;
        for (std::size_t i = 2; i < e.size(); ++i) {
            const double d1 = std::abs(e[i - 1] - e[i - 2]), d2 = std::abs(e[i] - e[i - 1]);
            const bool noise = d2 <= 1e-12 * std::max(1.0, std::abs(e[i]));
            stalls = (!noise && d2 >= 0.75 * d1) ? stalls + 1 : 0;
            worst = std::max(worst, stalls);
        }
        out.divergent = worst >= 2;
    }
    out.value = out.divergent ? -std::numeric_limits<double>::infinity() : out.estimates.back();
}

}  // namespace

RefinedIntegral refine_integral(const std::function<double(double)>& f, std::size_t G0, int levels) {
    RefinedIntegral out;
    std::size_t G = G0;
    for (int l = 0; l < levels; ++l, G *= 2) {
        double s = 0;
        for (std::size_t k = 0; k < G; ++k) s += f(two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(G));
        out.estimates.push_back(s / static_cast<double>(G));
        if (!std::isfinite(out.estimates.back())) break;
    }
    judge(out);
    return out;
}

ClassReport class_check(const SymbolSeries& g) {
    ClassReport r;
    const std::size_t angles = 1u << 12, bgrid = 1u << 14;
    const double tol = 1e-9;
    r.angles = angles;
    r.boundary_grid = bgrid;
    r.radii.push_back(0.0);
    for (int j = 1; j <= 14; ++j) r.radii.push_back(1.0 - std::ldexp(1.0, -j));
    r.interior_min_modulus = std::numeric_limits<double>::infinity();
    for (double rad : r.radii) {
        auto v = eval_on_circle(g.taylor, rad, angles);
        for (auto& z : v) r.interior_min_modulus = std::min(r.interior_min_modulus, std::abs(z));
    }
    r.interior_min_modulus -= g.tail_bound;

    auto b = eval_on_circle(g.taylor, 1.0, bgrid);
    r.boundary_min_modulus = std::numeric_limits<double>::infinity();
    r.boundary_max_modulus = 0;
    std::size_t unit = 0;
    std::vector<std::size_t> near;
    for (std::size_t k = 0; k < bgrid; ++k) {
        const double a = std::abs(b[k]);
        r.boundary_min_modulus = std::min(r.boundary_min_modulus, a);
        r.boundary_max_modulus = std::max(r.boundary_max_modulus, a);
        if (a <= 1.0 + tol + g.tail_bound) ++unit;
        if (std::abs(a - 1.0) <= 1e-6 + g.tail_bound) near.push_back(k);
    }
    r.unit_level_measure_estimate = static_cast<double>(unit) / static_cast<double>(bgrid);

    const std::vector<cplx> coeffs = g.taylor;
    auto gap = [&coeffs](double t) {
        const cplx z = std::polar(1.0, t);
        cplx s = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * z + *it;
        const double a = std::abs(s) - 1.0;
        return a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    };
    // Horner per sample is fine for short series; long ones go through the FFT grid instead.
    RefinedIntegral ri;
    if (coeffs.size() <= 64) {
        ri = refine_integral(gap, angles, 4);
    } else {
        std::size_t G = angles;
        for (int l = 0; l < 4; ++l, G *= 2) {
            const std::size_t n = std::max<std::size_t>(2 * G, fft::next_pow2(coeffs.size()));
            auto v = eval_on_circle(coeffs, 1.0, n);
            const std::size_t step = n / (2 * G);  // odd multiples of step are the midpoints
            double s = 0;
            for (std::size_t k = 0; k < G; ++k) {
                const double a = std::abs(v[(2 * k + 1) * step]) - 1.0;
                s += a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
            }
            ri.estimates.push_back(s / static_cast<double>(G));
            if (!std::isfinite(ri.estimates.back())) break;
        }
        judge(ri);
    }
    r.log_gap_estimates = ri.estimates;
    r.log_gap_finite = !ri.divergent;
    r.log_gap_integral = ri.value;

    if (r.interior_min_modulus < 1.0 - 1e-6 || r.unit_level_measure_estimate >= 1e-2) r.in_E = Tri::no;
    else if (r.interior_min_modulus >= 1.0 - tol && r.unit_level_measure_estimate < 1e-3) r.in_E = Tri::yes;
    else r.in_E = Tri::undetermined;

    if (r.in_E != Tri::yes) {
        r.in_E0 = r.in_E1 = r.in_E;
        return r;
    }
    // |g| = 1 only at z = 1
    const double cluster = 1e-2;
    bool at_one = false, elsewhere = false;
    for (auto k : near) {
        double t = two_pi * static_cast<double>(k) / static_cast<double>(bgrid);
        if (t > std::numbers::pi) t -= two_pi;
        if (std::abs(t) <= cluster) at_one = true;
        else elsewhere = true;
    }
    r.in_E0 = (at_one && !elsewhere) ? Tri::yes : Tri::no;
    // the boundary values of modulus one must share a single argument
    if (near.empty()) {
        r.in_E1 = Tri::no;
    } else {
        const cplx ref = b[near.front()] / std::abs(b[near.front()]);
        double spread = 0;
        for (auto k : near) spread = std::max(spread, std::abs(std::arg(b[k] / ref)));
        r.in_E1 = spread <= cluster ? Tri::yes : Tri::no;
    }
    return r;
}

SymbolSeries cap_function(const SymbolSeries& g) {
    auto rep = class_check(g);
    if (rep.unit_level_measure_estimate >= 1e-3) {
        std::ostringstream os;
        os << "cap_function: |g| <= 1 on an estimated fraction " << rep.unit_level_measure_estimate << " of the circle";
        throw HypothesisViolation(os.str());
    }
    if (!rep.log_gap_finite) throw HypothesisViolation("cap_function: log(|g|-1) is not integrable on the circle");

    // half-shifted grid keeps isolated zeros of |g|-1 off the sample points
    const std::size_t G = 1u << 14;
    std::vector<double> q(G);
    const std::size_t n = std::max<std::size_t>(2 * G, fft::next_pow2(2 * g.taylor.size()));
    auto v = eval_on_circle(g.taylor, 1.0, n);
    const std::size_t step = n / (2 * G);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < G; ++k) {
        const double a = std::abs(v[(2 * k + 1) * step]) - 1.0;
        q[k] = a > 0 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
        if (a > 0) lo = std::min(lo, q[k]);
    }
    for (auto& x : q)
        if (std::isnan(x)) x = lo;
    double ub = -std::numeric_limits<double>::infinity();
    for (double x : q) ub = std::max(ub, x);
    auto h = outer_from_log_modulus(LogModulus(std::move(q), ub, 0.5), G / 4);
    h.label = "cap(" + g.label + ")";
    while (h.taylor.size() > 1 && std::abs(h.taylor.back()) <= 1e-15) {
        h.tail_bound += std::abs(h.taylor.back());
        h.taylor.pop_back();
    }

    const std::size_t E = std::max<std::size_t>(G, fft::next_pow2(2 * std::max(h.taylor.size(), g.taylor.size())));
    auto hv = eval_on_circle(h.taylor, 1.0, E), gv = eval_on_circle(g.taylor, 1.0, E);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < E; ++k) excess = std::max(excess, std::abs(hv[k]) - (std::abs(gv[k]) - 1.0));
    if (excess > 1e-6) {
        std::ostringstream os;
        os << "cap_function: |h| exceeds |g|-1 by " << excess << " on the evaluation grid";
        throw NumericalFailure(os.str());
    }
    return h;
}

LogModulus smooth_bump_modulus(const std::vector<double>& arcs, const std::vector<double>& targets,
                               std::size_t gridsize) {
    if (arcs.size() != targets.size() || arcs.empty())
        throw InvalidInput("smooth_bump_modulus: need one target per arc");
    if (!fft::is_pow2(gridsize)) throw InvalidInput("smooth_bump_modulus: grid size must be a power of two");
    for (std::size_t n = 0; n < arcs.size(); ++n) {
        if (!(arcs[n] > 0 && arcs[n] < std::numbers::pi)) throw InvalidInput("smooth_bump_modulus: arc half-width out of range");
        if (n > 0 && arcs[n] > arcs[n - 1]) throw InvalidInput("smooth_bump_modulus: arcs must be nested");
        if (!(targets[n] > 1.0)) {
            std::ostringstream os;
            os << "smooth_bump_modulus: infeasible target " << targets[n] << " on arc " << n + 1;
            throw InvalidInput(os.str());
        }
    }
    const std::size_t S = arcs.size();
    auto bump = [](double h, double t) {
        // exp(-1/s) with s = cos h - cos t, normalized to peak 1 at t = pi
        const double s = std::cos(h) - std::cos(t);
        return s > 0 ? std::exp(-1.0 / s + 1.0 / (std::cos(h) + 1.0)) : 0.0;
    };
    auto sup_on_arc = [&](std::size_t k, double w) {
        // bump_k is even and increasing in |t|
        return bump(arcs[k], w);
    };
    std::vector<double> slack(S);
    for (std::size_t n = 0; n < S; ++n) slack[n] = targets[n] - 1.0;
    const double share = 1.0 / static_cast<double>(S + 1);
    std::vector<double> a(S);
    for (std::size_t k = 0; k < S; ++k) {
        a[k] = 1.0 / static_cast<double>(S + 2);
        for (std::size_t n = 0; n < k; ++n) {
            const double s = sup_on_arc(k, arcs[n]);
            if (s > 0) a[k] = std::min(a[k], share * slack[n] / s);
        }
    }
    double a_inf = 0.5 / static_cast<double>(S + 2);
    for (std::size_t n = 0; n < S; ++n) a_inf = std::min(a_inf, share * slack[n] / (1.0 - std::cos(arcs[n])));

    std::vector<double> p(gridsize);
    for (std::size_t j = 0; j < gridsize; ++j) {
        const double t = two_pi * static_cast<double>(j) / static_cast<double>(gridsize);
        double v = 1.0 + a_inf * (1.0 - std::cos(t));
        for (std::size_t k = 0; k < S; ++k) v += a[k] * bump(arcs[k], t);
        p[j] = v;
    }
    // grid verification of every constraint
    if (p[0] != 1.0) throw NumericalFailure("smooth_bump_modulus: p(1) != 1");
    for (std::size_t j = 0; j < gridsize; ++j) {
        double t = two_pi * static_cast<double>(j) / static_cast<double>(gridsize);
        if (t > std::numbers::pi) t -= two_pi;
        if (p[j] > 2.0 || (j > 0 && !(p[j] > 1.0))) throw NumericalFailure("smooth_bump_modulus: global constraint failed");
        for (std::size_t n = 0; n < S; ++n)
            if (std::abs(t) <= arcs[n] && p[j] > targets[n]) {
                std::ostringstream os;
                os << "smooth_bump_modulus: arc " << n + 1 << " constraint failed";
                throw NumericalFailure(os.str());
            }
    }
    std::vector<double> lp(gridsize);
    for (std::size_t j = 0; j < gridsize; ++j) lp[j] = std::log(p[j]);
    return LogModulus(std::move(lp), std::log(2.0));
}

}  // namespace orbitlab
