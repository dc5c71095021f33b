#include <mpfr.h>

#include <cmath>
#include <sstream>

#include "orbitlab/orbit_lab.hpp"

namespace orbitlab {

namespace {

class MpArray {
public:
    MpArray(std::size_t n, mpfr_prec_t bits) : v_(n) {
        for (auto& x : v_) mpfr_init2(&x, bits), mpfr_set_zero(&x, 1);
    }
    ~MpArray() {
        for (auto& x : v_) mpfr_clear(&x);
    }
    MpArray(const MpArray&) = delete;
    MpArray& operator=(const MpArray&) = delete;
    mpfr_ptr operator[](std::size_t i) { return &v_[i]; }
    std::size_t size() const { return v_.size(); }

private:
    std::vector<__mpfr_struct> v_;
};

unsigned auto_bits(double growth_ratio, std::size_t H) {
    const double per_step = std::log2(std::max(1.0, growth_ratio)) + 0.1;
    return static_cast<unsigned>(64 + std::ceil(per_step * static_cast<double>(H)));
}

/// Orbit of the upper triangular Toeplitz matrix with entries conj(g_d) acting on (re, im).
OrbitProfile run(const SymbolSeries& g, MpArray& re, MpArray& im, std::size_t H, mpfr_prec_t bits) {
    const std::size_t N = re.size();
    const std::size_t D = std::min(g.taylor.size(), N);
    MpArray cr(D, bits), ci(D, bits);
    for (std::size_t d = 0; d < D; ++d) {
        mpfr_set_d(cr[d], g.taylor[d].real(), MPFR_RNDN);
        mpfr_set_d(ci[d], -g.taylor[d].imag(), MPFR_RNDN);
    }
    MpArray tmp(4, bits);
    mpfr_ptr ar = tmp[0], ai = tmp[1], t = tmp[2], acc = tmp[3];
    OrbitProfile p;
    p.precision_bits = static_cast<int>(bits);
    auto norm = [&]() {
        mpfr_set_zero(acc, 1);
        for (std::size_t j = 0; j < N; ++j) {
            mpfr_sqr(t, re[j], MPFR_RNDN);
            mpfr_add(acc, acc, t, MPFR_RNDN);
            mpfr_sqr(t, im[j], MPFR_RNDN);
            mpfr_add(acc, acc, t, MPFR_RNDN);
        }
        mpfr_sqrt(acc, acc, MPFR_RNDN);
        return mpfr_get_d(acc, MPFR_RNDN);
    };
    p.norms.push_back(norm());
    for (std::size_t n = 1; n <= H; ++n) {
        // ascending j only reads entries >= j, so the update can run in place
        for (std::size_t j = 0; j < N; ++j) {
            mpfr_set_zero(ar, 1);
            mpfr_set_zero(ai, 1);
            for (std::size_t d = 0; d < D && j + d < N; ++d) {
                mpfr_mul(t, cr[d], re[j + d], MPFR_RNDN);
                mpfr_add(ar, ar, t, MPFR_RNDN);
                mpfr_mul(t, cr[d], im[j + d], MPFR_RNDN);
                mpfr_add(ai, ai, t, MPFR_RNDN);
                if (!mpfr_zero_p(ci[d])) {
                    mpfr_mul(t, ci[d], im[j + d], MPFR_RNDN);
                    mpfr_sub(ar, ar, t, MPFR_RNDN);
                    mpfr_mul(t, ci[d], re[j + d], MPFR_RNDN);
                    mpfr_add(ai, ai, t, MPFR_RNDN);
                }
            }
            mpfr_set(re[j], ar, MPFR_RNDN);
            mpfr_set(im[j], ai, MPFR_RNDN);
        }
        const double v = norm();
        if (!std::isfinite(v)) throw NumericalFailure("iterate_orbit_mp: norm overflow at n = " + std::to_string(n));
        p.norms.push_back(v);
    }
    return p;
}

void require_polynomial(const SymbolSeries& g) {
    if (!g.is_polynomial()) throw InvalidInput("iterate_orbit_mp: symbol must be a polynomial");
}

}  // namespace

OrbitProfile iterate_orbit_mp(const SymbolSeries& g, const ComplexVector& x, std::size_t H, unsigned bits) {
    require_polynomial(g);
    if (x.offset() != 0) throw InvalidInput("iterate_orbit_mp: vector must start at index 0");
    if (bits == 0) bits = auto_bits(g.sup_bound(), H);
    const std::size_t N = x.size();
    MpArray re(N, bits), im(N, bits);
    for (std::size_t j = 0; j < N; ++j) {
        mpfr_set_d(re[j], x[j].real(), MPFR_RNDN);
        mpfr_set_d(im[j], x[j].imag(), MPFR_RNDN);
    }
    auto p = run(g, re, im, H, bits);
    p.operator_label = "T*_" + g.label + " (N=" + std::to_string(N) + ", multiprecision)";
    p.vector_label = "x";
    return p;
}

OrbitProfile iterate_kernel_orbit_mp(const SymbolSeries& g, cplx w, std::size_t N, std::size_t H, unsigned bits) {
    require_polynomial(g);
    if (!(std::abs(w) < 1)) throw InvalidInput("iterate_kernel_orbit_mp: |w| must be < 1");
    if (N < 2) throw InvalidInput("iterate_kernel_orbit_mp: N must be at least 2");
    const double gw = std::abs(g.eval(w));
    if (!(gw > 0)) throw InvalidInput("iterate_kernel_orbit_mp: g(w) = 0");
    if (bits == 0) bits = auto_bits(g.sup_bound() / gw, H);
    MpArray re(N, bits), im(N, bits), tmp(3, bits);
    mpfr_ptr wr = tmp[0], wi = tmp[1], t = tmp[2];
    mpfr_set_d(wr, w.real(), MPFR_RNDN);
    mpfr_set_d(wi, -w.imag(), MPFR_RNDN);
    mpfr_set_ui(re[0], 1, MPFR_RNDN);
    for (std::size_t j = 1; j < N; ++j) {
        // (re + i im)(wr + i wi)
        mpfr_mul(re[j], re[j - 1], wr, MPFR_RNDN);
        mpfr_mul(t, im[j - 1], wi, MPFR_RNDN);
        mpfr_sub(re[j], re[j], t, MPFR_RNDN);
        mpfr_mul(im[j], re[j - 1], wi, MPFR_RNDN);
        mpfr_mul(t, im[j - 1], wr, MPFR_RNDN);
        mpfr_add(im[j], im[j], t, MPFR_RNDN);
    }
    auto p = run(g, re, im, H, bits);
    std::ostringstream os;
    os << "k_w, w = " << w.real() << (w.imag() < 0 ? "" : "+") << w.imag() << "i";
    p.operator_label = "T*_" + g.label + " (N=" + std::to_string(N) + ", multiprecision)";
    p.vector_label = os.str();
    return p;
}

}  // namespace orbitlab
