#include "orbitlab/toeplitz_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orbitlab/fft.hpp"

namespace orbitlab {

ToeplitzTruncation build(const SymbolSeries& g, std::size_t N, Flavor flavor) {
    if (N < 2) throw InvalidInput("build: truncation size must be at least 2");
    const bool exact = g.is_polynomial() && g.taylor.size() <= N;
    return ToeplitzTruncation{g, N, flavor, exact};
}

Eigen::MatrixXcd lower_block(const SymbolSeries& g, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < cols; ++k)
        for (std::size_t d = 0; d < g.taylor.size() && k + d < rows; ++d)
            m(static_cast<Eigen::Index>(k + d), static_cast<Eigen::Index>(k)) = g.taylor[d];
    return m;
}

Eigen::MatrixXcd ToeplitzTruncation::dense() const {
    Eigen::MatrixXcd l = lower_block(symbol, dim, dim);
    if (flavor == Flavor::analytic) return l;
    return l.adjoint();
}

UpperToeplitz ToeplitzTruncation::upper() const {
    if (flavor != Flavor::coanalytic) throw InvalidInput("ToeplitzTruncation: analytic truncation is not upper triangular");
    std::vector<cplx> c(symbol.taylor.size());
    for (std::size_t d = 0; d < c.size(); ++d) c[d] = std::conj(symbol.taylor[d]);
    return UpperToeplitz(std::move(c), dim);
}

ComplexVector ToeplitzTruncation::apply(const ComplexVector& x) const {
    if (x.size() != dim) throw InvalidInput("ToeplitzTruncation::apply: dimension mismatch");
    if (flavor == Flavor::coanalytic) return toeplitz_apply(upper(), x);
    // lower triangular: y_j = sum_{d <= j} g_d x_{j-d}
    std::vector<cplx> y(dim);
    if (dim >= fft_threshold) {
        std::vector<cplx> c(symbol.taylor.begin(), symbol.taylor.begin() + static_cast<long>(std::min(dim, symbol.taylor.size())));
        auto conv = fft::convolve(c, x.entries());
        std::copy(conv.begin(), conv.begin() + static_cast<long>(dim), y.begin());
    } else {
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t d = 0; d <= j && d < symbol.taylor.size(); ++d) y[j] += symbol.taylor[d] * x[j - d];
    }
    return ComplexVector(std::move(y), x.offset());
}

Eigen::MatrixXcd star_left(const SymbolSeries& g, std::size_t N) {
    Eigen::MatrixXcd b = lower_block(g, N + g.taylor.size() - 1, N);
    return b.adjoint() * b;
}

Eigen::MatrixXcd star_right(const SymbolSeries& g, std::size_t N) {
    Eigen::MatrixXcd l = lower_block(g, N, N);
    return l * l.adjoint();
}

KernelEigen kernel_eigencheck(const SymbolSeries& g, cplx w, std::size_t N) {
    if (!(std::abs(w) < 1.0)) throw InvalidInput("kernel_eigencheck: |w| must be < 1");
    auto t = build(g, N, Flavor::coanalytic);
    std::vector<cplx> k(N);
    cplx p = 1.0;
    for (std::size_t n = 0; n < N; ++n, p *= std::conj(w)) k[n] = p;
    ComplexVector kv(k);
    const cplx lambda = std::conj(g.eval(w));
    auto tk = t.apply(kv);
    double num = 0;
    for (std::size_t n = 0; n < N; ++n) num += std::norm(tk[n] - lambda * k[n]);
    const double r = std::abs(w);
    // plus a rounding allowance
    const double bound = (g.tail_bound + std::pow(r, static_cast<double>(N)) / (1.0 - r) + 1e-14) * g.sup_bound();
    return {lambda, std::sqrt(num) / lp_norm(kv), bound};
}

std::size_t modulus_grid(const std::vector<SymbolSeries>& symbols) {
    std::size_t deg = 0;
    for (auto& s : symbols) deg = std::max(deg, s.taylor.size());
    return std::max<std::size_t>(4096, fft::next_pow2(4 * deg));
}

namespace {

double term_scale(const std::vector<Eigen::MatrixXcd>& terms) {
    double s = 0;
    for (auto& t : terms) s = std::max(s, max_abs(t));
    return s;
}

double interior_min_modulus(const SymbolSeries& g) {
    const std::size_t G = std::max<std::size_t>(1024, fft::next_pow2(2 * g.taylor.size()));
    double mn = std::numeric_limits<double>::infinity();
    for (double r : {0.0, 0.5, 0.9, 0.99, 0.999, 0.9999, 1.0}) {
        auto v = eval_on_circle(g.taylor, r, G);
        for (auto& z : v) mn = std::min(mn, std::abs(z));
    }
    return mn - g.tail_bound;
}

}  // namespace

PositivityReport positivity_equiv(const std::vector<SymbolSeries>& h_list, const std::vector<SymbolSeries>& g_list,
                                  std::size_t N, double tol) {
    if (N < 1) throw InvalidInput("positivity_equiv: N must be positive");
    std::vector<Eigen::MatrixXcd> terms;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    for (auto& h : h_list) {
        terms.push_back(star_left(h, N));
        s += terms.back();
    }
    for (auto& g : g_list) {
        terms.push_back(star_left(g, N));
        s -= terms.back();
    }
    PositivityReport rep{};
    rep.tol = tol >= 0 ? tol : 1e-8 * std::max(1.0, term_scale(terms));
    rep.min_eig = min_eigenvalue(DenseHermitian(s, 1e-10 * std::max(1.0, term_scale(terms))));

    std::vector<SymbolSeries> all = h_list;
    all.insert(all.end(), g_list.begin(), g_list.end());
    const std::size_t G = modulus_grid(all);
    std::vector<double> H(G, 0.0);
    double scale = 1.0;
    for (auto& h : h_list) {
        auto v = eval_on_circle(h.taylor, 1.0, G);
        for (std::size_t k = 0; k < G; ++k) H[k] += std::norm(v[k]);
        scale = std::max(scale, h.sup_bound() * h.sup_bound());
    }
    for (auto& g : g_list) {
        auto v = eval_on_circle(g.taylor, 1.0, G);
        for (std::size_t k = 0; k < G; ++k) H[k] -= std::norm(v[k]);
        scale = std::max(scale, g.sup_bound() * g.sup_bound());
    }
    rep.H_min = *std::min_element(H.begin(), H.end());
    rep.H_nonnegative = rep.H_min >= -1e-6 * scale;
    rep.holds = !rep.H_nonnegative || rep.min_eig >= -rep.tol;
    rep.verdict = rep.H_nonnegative ? (rep.min_eig >= -rep.tol ? "pass" : "fail") : "evidence";
    return rep;
}

DominanceReport dominance_check(const std::vector<SymbolSeries>& h_list, const SymbolSeries& g, std::size_t N,
                                double tol) {
    DominanceReport rep{};
    rep.g_interior_min = interior_min_modulus(g);
    if (!(rep.g_interior_min > 1e-6)) {
        std::ostringstream os;
        os << "dominance_check: g is not invertible (min |g| on the disk grid = " << rep.g_interior_min << ")";
        throw HypothesisViolation(os.str());
    }
    std::vector<Eigen::MatrixXcd> terms{star_right(g, N), star_left(g, N)};
    Eigen::MatrixXcd right = terms[0], left = terms[1];
    for (auto& h : h_list) {
        terms.push_back(star_right(h, N));
        right -= terms.back();
        terms.push_back(star_left(h, N));
        left -= terms.back();
    }
    const double scale = std::max(1.0, term_scale(terms));
    rep.tol = tol >= 0 ? tol : 1e-8 * scale;
    rep.min_eig_star_right = min_eigenvalue(DenseHermitian(right, 1e-10 * scale));
    rep.min_eig_star_left = min_eigenvalue(DenseHermitian(left, 1e-10 * scale));
    rep.dominated = rep.min_eig_star_right >= -rep.tol;
    rep.orderings_agree = rep.dominated == (rep.min_eig_star_left >= -rep.tol);
    return rep;
}

Eigen::MatrixXcd tridiag_block(const Tridiag& t, std::size_t rows, std::size_t cols) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < cols; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        if (k >= 1 && k - 1 < rows) m(kk - 1, kk) = t.a;
        if (k < rows) m(kk, kk) = t.b;
        if (k + 1 < rows) m(kk + 1, kk) = t.c;
    }
    return m;
}

HyponormalReport hyponormality_check(const SymbolSeries& g, std::size_t N) {
    HyponormalReport rep;
    const Eigen::MatrixXcd l = star_left(g, N), r = star_right(g, N);
    rep.commutator = l - r;
    const double scale = std::max({1.0, max_abs(l), max_abs(r)});
    rep.tol = 1e-8 * scale;
    rep.min_eig = min_eigenvalue(DenseHermitian(rep.commutator, 1e-10 * scale));
    // g = c0 + c1 z gives |c1|^2 e0 e0*
    rep.deviation = std::numeric_limits<double>::quiet_NaN();
    bool linear = g.is_polynomial();
    for (std::size_t d = 2; d < g.taylor.size(); ++d) linear = linear && g.taylor[d] == cplx(0);
    if (linear) {
        Eigen::MatrixXcd pred = Eigen::MatrixXcd::Zero(rep.commutator.rows(), rep.commutator.cols());
        if (g.taylor.size() > 1) pred(0, 0) = std::norm(g.taylor[1]);
        rep.deviation = max_abs(rep.commutator - pred);
    }
    return rep;
}

HyponormalReport hyponormality_check(const Tridiag& t, std::size_t N) {
    if (N < 2) throw InvalidInput("hyponormality_check: N must be at least 2");
    HyponormalReport rep;
    const Eigen::MatrixXcd A = tridiag_block(t, N + 1, N);
    const Eigen::MatrixXcd B = tridiag_block(Tridiag{std::conj(t.c), std::conj(t.b), std::conj(t.a)}, N + 1, N);
    const Eigen::MatrixXcd l = A.adjoint() * A, r = B.adjoint() * B;
    rep.commutator = l - r;
    const double scale = std::max({1.0, max_abs(l), max_abs(r)});
    rep.tol = 1e-8 * scale;
    rep.min_eig = min_eigenvalue(DenseHermitian(rep.commutator, 1e-10 * scale));
    Eigen::MatrixXcd pred = Eigen::MatrixXcd::Zero(rep.commutator.rows(), rep.commutator.cols());
    pred(0, 0) = std::norm(t.c) - std::norm(t.a);
    rep.deviation = max_abs(rep.commutator - pred);
    return rep;
}

TridiagEigenPair tridiag_eigen(const Tridiag& t, cplx z, std::size_t N) {
    if (t.a == cplx(0)) throw InvalidInput("tridiag_eigen: a must be non-zero");
    const cplx ca = t.c / t.a;
    const double rz = std::abs(z);
    if (!(std::abs(ca) < rz && rz < 1.0)) {
        std::ostringstream os;
        os << "tridiag_eigen: z = " << z << " is outside the annulus |c/a| < |z| < 1";
        throw InvalidInput(os.str());
    }
    const cplx w = ca / z;
    const bool degenerate = std::abs(z * z - ca) <= 1e-14 * std::max(1.0, std::abs(ca));
    if (N == 0) {
        const double lz = std::log(rz);
        double n = std::log(1e-14) / lz;
        if (std::abs(w) > 0) n = std::max(n, std::log(1e-14) / std::log(std::abs(w)));
        std::size_t M = static_cast<std::size_t>(std::ceil(n)) + 2;
        if (degenerate)
            while (static_cast<double>(M + 1) * std::pow(rz, static_cast<double>(M)) >= 1e-14) M += 8;
        N = std::max<std::size_t>(M, 8);
    }
    std::vector<cplx> f(N + 1);
    cplx zp = z, wp = w;  // z^{n+1}, w^{n+1}
    cplx zn = 1.0;        // z^n
    for (std::size_t n = 0; n <= N; ++n) {
        f[n] = degenerate ? static_cast<double>(n + 1) * zn : zp - wp;
        zp *= z;
        wp *= w;
        zn *= z;
    }
    const cplx lambda = t.b + t.a * z + t.c / z;
    const cplx literal = t.a / z + t.b + t.c * z;
    double r1 = 0, r2 = 0, nf = 0;
    for (std::size_t n = 0; n < N; ++n) {
        // truncated matrix: the entry f_N is outside the window
        const cplx up = n + 1 < N ? f[n + 1] : cplx(0);
        const cplx down = n >= 1 ? f[n - 1] : cplx(0);
        const cplx tf = t.a * up + t.b * f[n] + t.c * down;
        r1 += std::norm(tf - lambda * f[n]);
        r2 += std::norm(tf - literal * f[n]);
        nf += std::norm(f[n]);
    }
    f.resize(N);
    TridiagEigenPair out{t.a, t.b, t.c, z, lambda, ComplexVector(std::move(f)), std::sqrt(r1 / nf), std::sqrt(r2 / nf),
                         degenerate};
    return out;
}

const char* to_string(HcVerdict v) {
    switch (v) {
        case HcVerdict::hypercyclic: return "hypercyclic";
        case HcVerdict::not_hypercyclic: return "not hypercyclic";
        default: return "boundary-marginal";
    }
}

HcReport hypercyclicity_classify(const SymbolSeries& g) {
    HcReport rep{HcVerdict::not_hypercyclic, 0, 0, ""};
    bool constant = true;
    for (std::size_t d = 1; d < g.taylor.size(); ++d) constant = constant && std::abs(g.taylor[d]) == 0.0;
    const std::size_t G = std::max<std::size_t>(4096, fft::next_pow2(2 * g.taylor.size()));
    rep.min_modulus = std::numeric_limits<double>::infinity();
    rep.max_modulus = 0;
    auto scan = [&](double r) {
        auto v = eval_on_circle(g.taylor, r, G);
        for (auto& z : v) {
            rep.min_modulus = std::min(rep.min_modulus, std::abs(z));
            rep.max_modulus = std::max(rep.max_modulus, std::abs(z));
        }
    };
    scan(0.0);
    for (int j = 1; j <= 14; ++j) scan(1.0 - std::ldexp(1.0, -j));
    const double m = 1e-9 + g.tail_bound;
    if (constant && g.tail_bound == 0.0) {
        rep.reason = "constant symbol";
    } else if (rep.min_modulus < 1.0 - m && rep.max_modulus > 1.0 + m) {
        rep.verdict = HcVerdict::hypercyclic;
        rep.reason = "g(D) meets the unit circle";
    } else if (rep.min_modulus > 1.0 + m || rep.max_modulus < 1.0 - m) {
        rep.reason = rep.min_modulus > 1.0 ? "|g| > 1 on the disk" : "|g| < 1 on the disk";
    } else {
        rep.verdict = HcVerdict::boundary_marginal;
        rep.reason = "sampled |g| range touches 1 within tolerance";
    }
    return rep;
}

HcReport hypercyclicity_classify(const Tridiag& t) {
    HcReport rep{HcVerdict::not_hypercyclic, 0, 0, ""};
    const std::size_t G = 1u << 12;
    rep.min_modulus = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < G; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(G));
        const double a = std::abs(t.a / z + t.b + t.c * z);
        rep.min_modulus = std::min(rep.min_modulus, a);
        rep.max_modulus = std::max(rep.max_modulus, a);
    }
    const double m = 1e-9;
    if (!(std::abs(t.a) > std::abs(t.c))) {
        rep.reason = "|a| <= |c|";
    } else if (rep.min_modulus < 1.0 - m && rep.max_modulus > 1.0 + m) {
        rep.verdict = HcVerdict::hypercyclic;
        rep.reason = "|a| > |c| and min |g| < 1 < max |g| on the circle";
    } else if (rep.min_modulus > 1.0 + m || rep.max_modulus < 1.0 - m) {
        rep.reason = "|g| stays on one side of 1 on the circle";
    } else {
        rep.verdict = HcVerdict::boundary_marginal;
        rep.reason = "|g| range on the circle touches 1 within tolerance";
    }
    return rep;
}

}  // namespace orbitlab
