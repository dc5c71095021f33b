#include "orbitlab/orbit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace orbitlab {

Eigen::MatrixXcd Operator::dense() const {
    throw InvalidInput("operator '" + label() + "' has no dense form");
}

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    const double s = max_abs(m);
    if (s == 0) return 0.0;
    const Eigen::MatrixXcd b = m / s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.adjoint() * b, Eigen::EigenvaluesOnly);
    return s * std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

class DenseOp final : public Operator {
public:
    DenseOp(Eigen::MatrixXcd m, std::string label) : m_(std::move(m)), label_(std::move(label)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0) throw InvalidInput("dense_operator: matrix must be square and non-empty");
        if (!m_.allFinite()) throw InvalidInput("dense_operator: non-finite entry");
        norm_ = m_.rows() <= 512 ? spectral_norm(m_) : m_.norm();
    }
    ComplexVector apply(const ComplexVector& x) const override {
        if (x.size() != dim()) throw InvalidInput("dense_operator: dimension mismatch");
        return ComplexVector::from_eigen(m_ * x.to_eigen(), x.offset());
    }
    std::size_t dim() const override { return static_cast<std::size_t>(m_.rows()); }
    Eigen::MatrixXcd dense() const override { return m_; }
    std::string label() const override { return label_; }
    double norm_bound() const override { return norm_; }

private:
    Eigen::MatrixXcd m_;
    std::string label_;
    double norm_;
};

class ScaledIdentity final : public Operator {
public:
    ScaledIdentity(cplx s, std::size_t n) : s_(s), n_(n) {}
    ComplexVector apply(const ComplexVector& x) const override {
        if (n_ != 0 && x.size() != n_) throw InvalidInput("scaled_identity: dimension mismatch");
        std::vector<cplx> y(x.entries());
        for (auto& v : y) v *= s_;
        return ComplexVector(std::move(y), x.offset());
    }
    std::size_t dim() const override { return n_; }
    Eigen::MatrixXcd dense() const override {
        return s_ * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    }
    std::string label() const override {
        std::ostringstream os;
        os << "scaled identity " << s_.real();
        if (s_.imag() != 0) os << (s_.imag() > 0 ? "+" : "") << s_.imag() << "i";
        return os.str();
    }
    double norm_bound() const override { return std::abs(s_); }

private:
    cplx s_;
    std::size_t n_;
};

class ToeplitzOp final : public Operator {
public:
    explicit ToeplitzOp(ToeplitzTruncation t) : t_(std::move(t)) {}
    ComplexVector apply(const ComplexVector& x) const override { return t_.apply(x); }
    std::size_t dim() const override { return t_.dim; }
    Eigen::MatrixXcd dense() const override { return t_.dense(); }
    std::string label() const override {
        return std::string(t_.flavor == Flavor::coanalytic ? "T*_" : "T_") + t_.symbol.label + " (N=" +
               std::to_string(t_.dim) + ")";
    }
    double step_error(const ComplexVector& x) const override {
        double e = t_.symbol.tail_bound * lp_norm(x);
        if (t_.flavor == Flavor::analytic) {
            // mass pushed past the last retained coordinate
            const auto& g = t_.symbol.taylor;
            double out = 0;
            for (std::size_t j = t_.dim; j < t_.dim + g.size() - 1; ++j) {
                cplx s = 0;
                for (std::size_t d = j - t_.dim + 1; d < g.size(); ++d) s += g[d] * x[j - d];
                out += std::norm(s);
            }
            e += std::sqrt(out);
        }
        return e;
    }
    double norm_bound() const override { return t_.symbol.sup_bound(); }

private:
    ToeplitzTruncation t_;
};

class ShiftOp final : public Operator {
public:
    explicit ShiftOp(WeightSequence w) : w_(std::move(w)) {
        norm_ = *std::max_element(w_.w.begin(), w_.w.end());
    }
    ComplexVector apply(const ComplexVector& x) const override { return shift_apply(w_, x); }
    std::size_t dim() const override { return 0; }
    std::string label() const override { return "weighted shift " + w_.label; }
    double norm_bound() const override { return norm_; }
    double norm(const ComplexVector& x) const override { return lp_norm(x, w_.p); }

private:
    WeightSequence w_;
    double norm_;
};

void check_compatible(const Operator& T, const ComplexVector& x) {
    if (T.dim() != 0 && x.size() != T.dim()) {
        std::ostringstream os;
        os << "iterate_orbit: vector of size " << x.size() << " does not match operator dimension " << T.dim();
        throw InvalidInput(os.str());
    }
}

}  // namespace

OperatorPtr dense_operator(Eigen::MatrixXcd m, std::string label) {
    return std::make_shared<DenseOp>(std::move(m), std::move(label));
}
OperatorPtr scaled_identity(cplx s, std::size_t dim) { return std::make_shared<ScaledIdentity>(s, dim); }
OperatorPtr toeplitz_operator(const ToeplitzTruncation& t) { return std::make_shared<ToeplitzOp>(t); }
OperatorPtr shift_operator(const WeightSequence& w) { return std::make_shared<ShiftOp>(w); }

std::string OrbitProfile::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,norm,spill_bound\n";
    for (std::size_t n = 0; n < norms.size(); ++n) os << n << ',' << norms[n] << ',' << spill_bound << '\n';
    return os.str();
}

OrbitProfile iterate_orbit(const Operator& T, const ComplexVector& x, std::size_t H, std::string vector_label) {
    check_compatible(T, x);
    OrbitProfile p;
    p.operator_label = T.label();
    p.vector_label = std::move(vector_label);
    p.norms.reserve(H + 1);
    ComplexVector cur = x;
    double spill = x.spill();
    p.norms.push_back(T.norm(cur));
    for (std::size_t n = 1; n <= H; ++n) {
        const double e = T.step_error(cur);
        try {
            cur = T.apply(cur);
        } catch (const InvalidInput&) {
            throw NumericalFailure("iterate_orbit: overflow at n = " + std::to_string(n));
        }
        spill = T.norm_bound() * spill + e;
        const double v = T.norm(cur);
        if (!std::isfinite(v)) {
            throw NumericalFailure("iterate_orbit: norm overflow at n = " + std::to_string(n));
        }
        p.norms.push_back(v);
    }
    p.spill_bound = spill;
    return p;
}

std::vector<ComplexVector> orbit_vectors(const Operator& T, const ComplexVector& x, std::size_t H) {
    check_compatible(T, x);
    std::vector<ComplexVector> out{x};
    out.reserve(H + 1);
    for (std::size_t n = 1; n <= H; ++n) {
        try {
            out.push_back(T.apply(out.back()));
        } catch (const InvalidInput&) {
            throw NumericalFailure("orbit_vectors: overflow at n = " + std::to_string(n));
        }
        if (!std::isfinite(T.norm(out.back())))
            throw NumericalFailure("orbit_vectors: norm overflow at n = " + std::to_string(n));
    }
    return out;
}

GrowthReport growth_bound(const Operator& T, const Operator& S, const ComplexVector& x, std::size_t H) {
    check_compatible(T, x);
    check_compatible(S, x);
    const Eigen::MatrixXcd t = T.dense(), s = S.dense();
    if (t.rows() != s.rows()) throw InvalidInput("growth_bound: T and S have different dimensions");
    GrowthReport r;
    const Eigen::MatrixXcd tt = t.adjoint() * t, ss = s.adjoint() * s;
    const Eigen::MatrixXcd prem = tt - ss - Eigen::MatrixXcd::Identity(t.rows(), t.cols());
    r.tol = 1e-8 * std::max({1.0, max_abs(tt), max_abs(ss)});
    r.premise_min_eig = min_eigenvalue(DenseHermitian(prem, r.tol));
    r.commutator_norm = max_abs(t * s - s * t);
    r.premise_holds = r.premise_min_eig >= -r.tol && r.commutator_norm <= r.tol;

    r.s2x_norm = lp_norm(S.apply(S.apply(x)));
    const double s2 = r.s2x_norm * r.s2x_norm;
    ComplexVector cur = x;
    r.lhs.push_back(std::pow(lp_norm(cur), 2));
    for (std::size_t n = 1; n <= H; ++n) {
        cur = T.apply(cur);
        const double l = std::pow(lp_norm(cur), 2);
        if (!std::isfinite(l)) throw NumericalFailure("growth_bound: norm overflow at n = " + std::to_string(n));
        r.lhs.push_back(l);
        const double nn = static_cast<double>(n);
        const double rhs = nn * (nn - 1) / 2 * s2;
        if (l < rhs - 1e-9 * std::max(l, rhs)) r.violations.push_back(n);
    }
    if (!r.premise_holds)
        r.verdict = "evidence";
    else
        r.verdict = r.violations.empty() ? "pass" : "fail";
    return r;
}

double loglog_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t n = std::max<std::size_t>(lo, 1); n <= hi && n < y.size(); ++n) {
        if (!(y[n] > 0) || !std::isfinite(y[n])) return std::numeric_limits<double>::quiet_NaN();
        const double lx = std::log(static_cast<double>(n)), ly = std::log(y[n]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++cnt;
    }
    if (cnt < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = static_cast<double>(cnt);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SummabilityReport summability_certificate(const OrbitProfile& profile, double c, TailModel model) {
    if (!(c > 0)) throw InvalidInput("summability_certificate: exponent must be positive");
    if (profile.norms.empty()) throw InvalidInput("summability_certificate: empty profile");
    SummabilityReport r;
    std::vector<double> terms(profile.norms.size());
    double acc = 0;
    for (std::size_t n = 0; n < profile.norms.size(); ++n) {
        const double v = profile.norms[n];
        if (!(v > 0)) throw InvalidInput("summability_certificate: zero norm at n = " + std::to_string(n));
        terms[n] = std::pow(v, -c);
        acc += terms[n];
        r.partial_sums.push_back(acc);
    }
    const std::size_t H = profile.horizon();
    const double inf = std::numeric_limits<double>::infinity();
    r.tail_bound = inf;
    if (model.kind == TailModel::Kind::expansion && model.value > 1) {
        const double q = std::pow(model.value, -c);
        r.tail_bound = terms[H] * q / (1 - q);
    } else if (model.kind == TailModel::Kind::quadratic && model.value > 0 && c > 1 && H >= 2) {
        // sum_{n>H} (n(n-1)/2)^{-c/2} s^{-c}
        const double h = static_cast<double>(H);
        const double s = std::pow(model.value, -c);
        if (c == 2)
            r.tail_bound = 2.0 / h * s;
        else
            r.tail_bound = std::pow(2.0, c / 2) * s * (std::pow(h, -c) + std::pow(h, 1 - c) / (c - 1));
    }
    r.fitted_term_slope = H >= 4 ? loglog_slope(terms, H / 2, H) : std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(r.tail_bound)) {
        r.total_bound = acc + r.tail_bound;
        r.verdict = "summable (certified)";
    } else {
        r.total_bound = inf;
        const bool decaying = std::isfinite(r.fitted_term_slope) ? r.fitted_term_slope < -1.1 : false;
        r.verdict = decaying ? "summable (evidence)" : "divergent (evidence)";
    }
    return r;
}

BallWitness ball_witness_search(const std::vector<ComplexVector>& xs, std::uint64_t seed, int restarts,
                                int iterations) {
    if (xs.empty()) throw InvalidInput("ball_witness_search: no vectors");
    long lo = xs[0].first(), hi = xs[0].last();
    for (const auto& x : xs) lo = std::min(lo, x.first()), hi = std::max(hi, x.last());
    const auto dim = static_cast<Eigen::Index>(hi - lo + 1);
    std::vector<Eigen::VectorXcd> v;
    std::vector<double> sq;
    BallWitness out;
    for (const auto& x : xs) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        for (std::size_t i = 0; i < x.size(); ++i) e(x.first() - lo + static_cast<long>(i)) = x[i];
        const double n2 = e.squaredNorm();
        if (!(n2 > 0)) throw HypothesisViolation("ball_witness_search: zero vector in the list");
        out.reciprocal_sum += 1.0 / n2;
        v.push_back(std::move(e));
        sq.push_back(n2);
    }
    if (out.reciprocal_sum > 1 + 1e-12) {
        std::ostringstream os;
        os << "ball_witness_search: sum of ||x_n||^-2 is " << out.reciprocal_sum << " > 1";
        throw HypothesisViolation(os.str());
    }
    auto margin = [&](const Eigen::VectorXcd& y) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& e : v) m = std::min(m, std::abs(e.dot(y)));
        return m;
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd best = Eigen::VectorXcd::Zero(dim);
    double best_m = -1;
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXcd y(dim);
        for (Eigen::Index i = 0; i < dim; ++i) y(i) = cplx(nd(rng), nd(rng));
        y.normalize();
        for (int it = 0; it < iterations; ++it) {
            for (std::size_t n = 0; n < v.size(); ++n) {
                const cplx a = v[n].dot(y);
                const double aa = std::abs(a);
                if (aa >= 1) continue;
                const cplx u = aa > 0 ? a / aa : cplx(1.0);
                y += ((u - a) / sq[n]) * v[n];
            }
            const double ny = y.norm();
            if (ny > 1) y /= ny;
            const double m = margin(y);
            if (m > best_m) best_m = m, best = y;
            if (m >= 1) break;
        }
    }
    if (best.norm() > 0) best.normalize();
    out.margin = margin(best);
    out.success = out.margin >= 1 - 1e-6;
    out.y = ComplexVector::from_eigen(best, lo);
    return out;
}

SuperpolyReport superpoly_profile(const OrbitProfile& profile, const std::vector<double>& k_list,
                                  const std::vector<std::size_t>& probes) {
    const std::size_t H = profile.horizon();
    if (H < 10) throw InvalidInput("superpoly_profile: horizon must be at least 10");
    SuperpolyReport rep;
    for (double k : k_list) {
        SuperpolyK s{k, std::vector<double>(H + 1, 0.0), 1, true, {}, {}};
        for (std::size_t n = 1; n <= H; ++n) {
            // log form keeps huge norms finite
            s.ratio[n] = std::exp(std::log(profile.norms[n]) - k * std::log(static_cast<double>(n)));
            if (s.ratio[n] < s.ratio[s.argmin]) s.argmin = n;
        }
        for (std::size_t n = s.argmin + 1; n <= H; ++n)
            if (s.ratio[n] < s.ratio[n - 1] * (1 - 1e-12)) s.dips.push_back(n);
        s.tail_monotone = s.dips.empty();
        for (std::size_t p : probes) {
            if (p < 1 || p > H) continue;
            bool running_min = true;
            for (std::size_t m = 1; m < p && running_min; ++m) running_min = s.ratio[p] <= s.ratio[m] * (1 + 1e-12);
            if (running_min) s.probe_dips.push_back(p);
        }
        rep.per_k.push_back(std::move(s));
    }
    return rep;
}

namespace {

/// beta_m = C(n+m-1, m) rho^m (1+c)^{-n}, generated for m = 0..M where M is chosen by the tail rule.
struct Expansion {
    std::vector<double> a;
    double N;
    double tail;
};

Expansion expand(int k, double c, std::size_t n, std::size_t m_min = 0) {
    const double rho = c / (1 + c);
    const double nd = static_cast<double>(n);
    auto ratio = [&](std::size_t i) { return (nd + static_cast<double>(i)) / static_cast<double>(i + 1) * rho; };
    std::vector<double> beta;
    const double log_b0 = -nd * std::log1p(c);
    if (log_b0 > -600) {
        beta.push_back(std::pow(1 + c, -nd));
    } else {
        // start at the mode and walk down so nothing relevant underflows
        const double mstar_d = std::max(0.0, std::ceil((nd * rho - 1) / (1 - rho)));
        const auto mstar = static_cast<std::size_t>(mstar_d);
        const double lb = std::lgamma(nd + mstar_d) - std::lgamma(mstar_d + 1) - std::lgamma(nd) +
                          mstar_d * std::log(rho) + log_b0;
        beta.assign(mstar + 1, 0.0);
        beta[mstar] = std::exp(lb);
        for (std::size_t m = mstar; m > 0; --m) beta[m - 1] = beta[m] / ratio(m - 1);
    }
    std::vector<double> binom(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) binom[static_cast<std::size_t>(j)] = (j % 2 ? -1.0 : 1.0) * std::round(std::exp(
        std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0)));
    const double two_k = std::ldexp(1.0, k);
    Expansion e{{}, 0.0, 0.0};
    long double acc = 0;
    for (std::size_t m = 0;; ++m) {
        while (beta.size() <= m) beta.push_back(beta.back() * ratio(beta.size() - 1));
        double am = 0;
        for (std::size_t j = 0; j <= static_cast<std::size_t>(k) && j <= m; ++j) am += binom[j] * beta[m - j];
        e.a.push_back(am);
        acc += std::fabs(am);
        if (m + 1 >= static_cast<std::size_t>(k) && m >= m_min) {
            const std::size_t L = m + 1 - static_cast<std::size_t>(k);
            while (beta.size() <= L) beta.push_back(beta.back() * ratio(beta.size() - 1));
            const double r = ratio(L);
            if (r < 1) {
                const double tail = two_k * beta[L] / (1 - r);
                if (tail < 1e-15 * static_cast<double>(acc)) {
                    e.tail = tail;
                    break;
                }
            }
        }
    }
    e.N = static_cast<double>(acc);
    return e;
}

}  // namespace

std::vector<double> taylor_coefficients(int k, double c, std::size_t n, std::size_t m_max) {
    if (k < 0 || !(c > 0) || n < 1) throw InvalidInput("taylor_coefficients: need k >= 0, c > 0, n >= 1");
    auto e = expand(k, c, n, m_max);
    e.a.resize(m_max + 1);
    return e.a;
}

namespace {

std::vector<double> contour_many(int k, double c, std::size_t n, const std::vector<std::size_t>& ms, std::size_t points) {
    const double nd = static_cast<double>(n);
    std::vector<cplx> sum(ms.size());
    for (std::size_t j = 0; j < points; ++j) {
        if (k > 0 && j == 0) continue;  // (1-z)^k vanishes at z = 1
        const double t = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
        const cplx e = std::polar(1.0, t);
        const cplx logz = std::log(2.0 * e - 1.0);
        const cplx base = static_cast<double>(k) * std::log(2.0 - 2.0 * e) - nd * std::log(1.0 + 2 * c - 2 * c * e) +
                          std::log(2.0 * e);
        for (std::size_t i = 0; i < ms.size(); ++i)
            sum[i] += std::exp(base - static_cast<double>(ms[i] + 1) * logz);
    }
    std::vector<double> out(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) out[i] = sum[i].real() / static_cast<double>(points);
    return out;
}

}  // namespace

double taylor_coefficient_contour(int k, double c, std::size_t n, std::size_t m, std::size_t points) {
    return contour_many(k, c, n, {m}, points)[0];
}

TaylorNormTable taylor_norms(int k, double c, std::size_t n_max) {
    if (k < 0 || !(c > 0) || n_max < 1) throw InvalidInput("taylor_norms: need k >= 0, c > 0, n_max >= 1");
    TaylorNormTable t{k, c, {}, 0.0, 0.0};
    // ten log-spaced spot rows
    std::vector<std::size_t> spots;
    for (int j = 0; j < 10; ++j) {
        const auto s = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n_max), j / 9.0)));
        if (spots.empty() || s != spots.back()) spots.push_back(s);
    }
    std::vector<double> Ns(n_max + 1, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto e = expand(k, c, n);
        TaylorRow row{n, e.N, e.tail, std::nullopt};
        if (std::find(spots.begin(), spots.end(), n) != spots.end()) {
            const std::size_t M = e.a.size() - 1;
            std::vector<std::size_t> ms;
            for (std::size_t m : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
                                  static_cast<std::size_t>(k) + 1, n / 2, n, n + 1, 2 * n, 3 * n})
                if (m <= M) ms.push_back(m);
            auto q = contour_many(k, c, n, ms, 1u << 16);
            double err = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) err = std::max(err, std::fabs(e.a[ms[i]] - q[i]));
            row.crosscheck_error = err;
        }
        Ns[n] = e.N;
        t.A = std::max(t.A, e.N * std::pow(static_cast<double>(n), (k - 1) / 2.0));
        t.rows.push_back(row);
    }
    t.fitted_slope = n_max >= 4 ? loglog_slope(Ns, n_max / 4, n_max) : loglog_slope(Ns, 1, n_max);
    return t;
}

ResolventDecay resolvent_decay(const Operator& S, double c, int k, std::size_t n_max) {
    if (!(c > 0) || k < 0 || n_max < 1) throw InvalidInput("resolvent_decay: need c > 0, k >= 0, n_max >= 1");
    const Eigen::MatrixXcd s = S.dense();
    const auto d = s.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    ResolventDecay r;
    r.power_bound = 1.0;
    Eigen::MatrixXcd p = I;
    for (std::size_t m = 1; m <= n_max; ++m) {
        p = p * s;
        r.power_bound = std::max(r.power_bound, spectral_norm(p));
        if (!(r.power_bound < 1e8))
            throw HypothesisViolation("resolvent_decay: powers of S are not bounded at m = " + std::to_string(m));
    }
    const Eigen::MatrixXcd t = (1 + c) * I - c * s;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
    if (!(lu.rcond() > 1e-14)) throw NumericalFailure("resolvent_decay: T is numerically singular");
    Eigen::MatrixXcd x = I;
    for (int j = 0; j < k; ++j) x = x * (I - s);
    auto table = taylor_norms(k, c, n_max);
    r.A = table.A;
    r.values.assign(n_max + 1, 0.0);
    r.series_bound.assign(n_max + 1, 0.0);
    r.bound_holds = true;
    for (std::size_t n = 1; n <= n_max; ++n) {
        x = lu.solve(x);
        r.values[n] = spectral_norm(x);
        r.series_bound[n] = r.power_bound * table.rows[n - 1].N;
        const double rate = r.power_bound * r.A * std::pow(static_cast<double>(n), (1 - k) / 2.0);
        const double slack = 1e-9;
        if (r.values[n] > r.series_bound[n] * (1 + slack) + 1e-12 || r.values[n] > rate * (1 + slack) + 1e-12)
            r.bound_holds = false;
    }
    r.fitted_exponent = loglog_slope(r.values, n_max >= 4 ? n_max / 4 : 1, n_max);
    return r;
}

CocoReport coco_identity(const Operator& S, double c) {
    if (!(c > 0)) throw InvalidInput("coco_identity: c must be positive");
    const Eigen::MatrixXcd s = S.dense();
    const auto d = s.rows();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    CocoReport r;
    r.s_norm = spectral_norm(s);
    r.tol = global_tol();
    if (r.s_norm > 1 + r.tol) {
        std::ostringstream os;
        os << "coco_identity: ||S|| = " << r.s_norm << " exceeds 1";
        throw HypothesisViolation(os.str());
    }
    const Eigen::MatrixXcd t = (c + 1) * I + c * s;
    const Eigen::MatrixXcd R = std::sqrt(c * (c + 1)) * (I + s);
    const Eigen::MatrixXcd gap = c * (I - s.adjoint() * s);
    r.residual = max_abs((t.adjoint() * t - R.adjoint() * R - I) - gap);
    r.premise_min_eig = min_eigenvalue(DenseHermitian(gap, r.tol * std::max(1.0, c)));
    return r;
}

}  // namespace orbitlab
