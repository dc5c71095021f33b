#include "orbitlab/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orbitlab {

WeightSequence::WeightSequence(std::vector<double> weights, double pp, std::string lbl)
    : w(std::move(weights)), p(pp), label(std::move(lbl)) {
    if (w.size() < 3 || w.size() % 2 == 0) throw InvalidInput("WeightSequence: need 2W+1 weights with W >= 1");
    if (!(p >= 1.0)) throw InvalidInput("WeightSequence: p must be >= 1");
    W = static_cast<long>(w.size() / 2);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0) || !std::isfinite(w[i])) {
            std::ostringstream os;
            os << "WeightSequence: weight at index " << static_cast<long>(i) - W << " is not a positive finite number";
            throw InvalidInput(os.str());
        }
}

WeightSequence WeightSequence::chan_sanders(long W, double p) {
    std::vector<double> w(static_cast<std::size_t>(2 * W + 1));
    for (long n = -W; n <= W; ++n) w[static_cast<std::size_t>(n + W)] = n <= 0 ? 1.0 : 2.0;
    return WeightSequence(std::move(w), p, "chan-sanders");
}

WeightSequence WeightSequence::constant(double v, long W, double p) {
    std::ostringstream os;
    os << "const " << v;
    return WeightSequence(std::vector<double>(static_cast<std::size_t>(2 * W + 1), v), p, os.str());
}

WeightSequence WeightSequence::from_csv(const std::string& path, double p) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open weight file " + path);
    std::vector<double> w;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double x;
        if (!(ls >> x)) {
            if (w.empty() && lineno == 1) continue;  // header row
            throw InvalidInput(path + ": line " + std::to_string(lineno) + " is not a number");
        }
        w.push_back(x);
    }
    return WeightSequence(std::move(w), p, path);
}

RSequence r_sequence(const WeightSequence& w) {
    RSequence r;
    r.W = w.W;
    const auto n = static_cast<std::size_t>(2 * w.W + 1);
    r.r.assign(n, 1.0);
    r.log_r.assign(n, 0.0);
    auto idx = [&](long k) { return static_cast<std::size_t>(k + w.W); };
    for (long k = 1; k <= w.W; ++k) {
        r.r[idx(k)] = r.r[idx(k - 1)] / w.at(k);
        r.log_r[idx(k)] = r.log_r[idx(k - 1)] - std::log(w.at(k));
    }
    for (long k = -1; k >= -w.W; --k) {
        r.r[idx(k)] = r.r[idx(k + 1)] * w.at(k + 1);
        r.log_r[idx(k)] = r.log_r[idx(k + 1)] + std::log(w.at(k + 1));
    }
    return r;
}

BwsVerdict classify_bws(const WeightSequence& w) {
    BwsVerdict v;
    const auto r = r_sequence(w);
    const long W = w.W, q = std::max<long>(1, (3 * W) / 4);
    double inner_max = -std::numeric_limits<double>::infinity(), outer_max = inner_max;
    v.log_r_max = inner_max;
    for (long n = -W; n <= W; ++n) {
        const double l = r.log_at(n);
        v.log_r_max = std::max(v.log_r_max, l);
        if (std::abs(n) >= q) outer_max = std::max(outer_max, l);
        else inner_max = std::max(inner_max, l);
    }
    double fmin = std::numeric_limits<double>::infinity(), bmin = fmin;
    for (long n = q; n <= W; ++n) {
        fmin = std::min(fmin, r.log_at(n));
        bmin = std::min(bmin, r.log_at(-n));
    }
    v.outer_min_forward = std::exp(fmin);
    v.outer_min_backward = std::exp(bmin);
    const double tiny = std::log(1e-6);
    // bounded: no growth toward the window edges
    v.r_bounded = outer_max <= inner_max + 1e-9 ? Tri::yes : Tri::no;
    v.forward_liminf_zero = fmin < tiny ? Tri::yes : (fmin > std::log(0.5) ? Tri::no : Tri::undetermined);
    v.backward_liminf_positive = bmin > tiny ? Tri::yes : Tri::no;
    if (w.p < 2.0) {
        v.whc_candidate = Tri::undetermined;
        v.evidence += "; weak hypercyclicity criterion needs p >= 2";
    } else if (v.r_bounded == Tri::yes && v.forward_liminf_zero == Tri::yes) {
        v.whc_candidate = Tri::yes;
    } else if (v.r_bounded == Tri::no || v.forward_liminf_zero == Tri::no) {
        v.whc_candidate = Tri::no;
    }
    v.norm_hypercyclic = v.backward_liminf_positive == Tri::yes ? Tri::no : Tri::undetermined;
    return v;
}

ComplexVector shift_apply(const WeightSequence& w, const ComplexVector& x) {
    if (x.first() - 1 < -w.W || x.last() > w.W) {
        std::ostringstream os;
        os << "shift_apply: support [" << x.first() << ", " << x.last() << "] would leave the window [-" << w.W << ", "
           << w.W << "]";
        throw NumericalFailure(os.str());
    }
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = w.at(x.first() + static_cast<long>(i)) * x[i];
    return ComplexVector(std::move(out), x.first() - 1, x.spill());
}

ComplexVector shift_inverse(const WeightSequence& w, const ComplexVector& x) {
    if (x.last() + 1 > w.W || x.first() < -w.W) {
        std::ostringstream os;
        os << "shift_backward: support [" << x.first() << ", " << x.last() << "] would leave the window [-" << w.W
           << ", " << w.W << "]";
        throw NumericalFailure(os.str());
    }
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / w.at(x.first() + 1 + static_cast<long>(i));
    return ComplexVector(std::move(out), x.first() + 1, x.spill());
}

std::vector<ComplexVector> shift_backward(const WeightSequence& w, const ComplexVector& x, int steps) {
    if (steps < 0) throw InvalidInput("shift_backward: negative step count");
    std::vector<ComplexVector> orbit{x};
    orbit.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k < steps; ++k) orbit.push_back(shift_inverse(w, orbit.back()));
    return orbit;
}

namespace {

cplx over_r(const RSequence& r, cplx v, long n) {
    if (v == cplx(0)) return 0.0;
    return std::polar(std::exp(std::log(std::abs(v)) - r.log_at(n)), std::arg(v));
}

}  // namespace

cplx g_inner(const RSequence& r, const ComplexVector& x, const ComplexVector& y) {
    const long lo = std::max(x.first(), y.first()), hi = std::min(x.last(), y.last());
    if (lo < -r.W || hi > r.W) throw InvalidInput("g_inner: support outside the r-sequence window");
    cplx s = 0.0;
    for (long n = lo; n <= hi; ++n) s += over_r(r, x.at_index(n), n) * std::conj(over_r(r, y.at_index(n), n));
    return s;
}

double g_norm(const RSequence& r, const ComplexVector& x) {
    if (x.first() < -r.W || x.last() > r.W) throw InvalidInput("g_norm: support outside the r-sequence window");
    std::vector<cplx> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = over_r(r, x[i], x.first() + static_cast<long>(i));
    return lp_norm(v, 2.0);
}

}  // namespace orbitlab
