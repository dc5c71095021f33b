#include "orbitlab/num_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "orbitlab/fft.hpp"

namespace orbitlab {

namespace {
thread_local double tol_override = 0.0;
}

ToleranceOverride::ToleranceOverride(double tol) : saved_(tol_override) {
    if (!(tol > 0) || !std::isfinite(tol)) throw InvalidInput("tolerance override must be positive");
    tol_override = tol;
}

ToleranceOverride::~ToleranceOverride() { tol_override = saved_; }

double global_tol() {
    if (tol_override > 0) return tol_override;
    static const double tol = [] {
        if (const char* s = std::getenv("ORBITLAB_TOL")) {
            char* end = nullptr;
            double v = std::strtod(s, &end);
            if (end != s && std::isfinite(v) && v > 0) return v;
        }
        return 1e-10;
    }();
    return tol;
}

ComplexVector::ComplexVector(std::vector<cplx> entries, long offset, double spill)
    : v_(std::move(entries)), offset_(offset), spill_(spill) {
    if (v_.empty()) throw InvalidInput("ComplexVector: empty window");
    for (std::size_t i = 0; i < v_.size(); ++i)
        if (!std::isfinite(v_[i].real()) || !std::isfinite(v_[i].imag())) {
            std::ostringstream os;
            os << "ComplexVector: non-finite entry at index " << offset + static_cast<long>(i);
            throw InvalidInput(os.str());
        }
}

ComplexVector ComplexVector::zeros(std::size_t n, long offset) {
    return ComplexVector(std::vector<cplx>(n), offset);
}

ComplexVector ComplexVector::basis(std::size_t n, std::size_t j, long offset) {
    std::vector<cplx> e(n);
    e.at(j) = 1.0;
    return ComplexVector(std::move(e), offset);
}

cplx ComplexVector::at_index(long n) const {
    if (n < first() || n > last()) return 0.0;
    return v_[static_cast<std::size_t>(n - offset_)];
}

Eigen::VectorXcd ComplexVector::to_eigen() const {
    return Eigen::Map<const Eigen::VectorXcd>(v_.data(), static_cast<Eigen::Index>(v_.size()));
}

ComplexVector ComplexVector::from_eigen(const Eigen::VectorXcd& v, long offset) {
    return ComplexVector(std::vector<cplx>(v.data(), v.data() + v.size()), offset);
}

UpperToeplitz::UpperToeplitz(std::vector<cplx> c, std::size_t n) : coeffs(std::move(c)), dim(n) {
    if (dim == 0) throw InvalidInput("UpperToeplitz: zero dimension");
    if (coeffs.empty()) coeffs.push_back(0.0);
    if (coeffs.size() > dim) coeffs.resize(dim);
}

Eigen::MatrixXcd UpperToeplitz::dense() const {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (std::size_t d = 0; d < coeffs.size() && j + static_cast<Eigen::Index>(d) < n; ++d)
            m(j, j + static_cast<Eigen::Index>(d)) = coeffs[d];
    return m;
}

double max_abs(const Eigen::MatrixXcd& a) {
    double m = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
    return m;
}

DenseHermitian::DenseHermitian(Eigen::MatrixXcd m, double t) : a(std::move(m)), tol(t) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("DenseHermitian: matrix must be square and non-empty");
    if (tol < 0) tol = global_tol() * max_abs(a);
}

namespace {

void check_dims(const UpperToeplitz& t, const ComplexVector& x) {
    if (x.size() != t.dim) {
        std::ostringstream os;
        os << "toeplitz_apply: dimension mismatch (matrix " << t.dim << ", vector " << x.size() << ")";
        throw InvalidInput(os.str());
    }
}

}  // namespace

ComplexVector toeplitz_apply_direct(const UpperToeplitz& t, const ComplexVector& x) {
    check_dims(t, x);
    const std::size_t n = t.dim, m = t.coeffs.size();
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0;
        const std::size_t top = std::min(m, n - j);
        for (std::size_t d = 0; d < top; ++d) s += t.coeffs[d] * x[j + d];
        out[j] = s;
    }
    return ComplexVector(std::move(out), x.offset(), x.spill());
}

ComplexVector toeplitz_apply_fft(const UpperToeplitz& t, const ComplexVector& x) {
    check_dims(t, x);
    const std::size_t n = t.dim;
    // y_j = sum_d c_d x_{j+d}; with r_i = x_{n-1-i} this is (c * r)_{n-1-j}.
    std::vector<cplx> r(x.entries().rbegin(), x.entries().rend());
    auto conv = fft::convolve(t.coeffs, r);
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = conv[n - 1 - j];
    return ComplexVector(std::move(out), x.offset(), x.spill());
}

ComplexVector toeplitz_apply(const UpperToeplitz& t, const ComplexVector& x) {
    return t.dim >= fft_threshold ? toeplitz_apply_fft(t, x) : toeplitz_apply_direct(t, x);
}

namespace {

double dense_min_eig(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("min_eigenvalue: dense eigensolver failed");
    return es.eigenvalues()(0);
}

// Restarted Lanczos with full reorthogonalization, targeting the smallest eigenvalue.
double lanczos_min_eig(const Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    const Eigen::Index m = std::min<Eigen::Index>(n, 160);
    const double scale = std::max(h.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) += cplx(std::sin(1.0 + i), std::cos(0.5 * i)) * 0.1;
    v.normalize();
    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 60; ++restart) {
        Eigen::MatrixXcd q(n, m);
        Eigen::VectorXd alpha(m), beta(m);
        q.col(0) = v;
        Eigen::Index steps = m;
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::VectorXcd w = h * q.col(j);
            alpha(j) = q.col(j).dot(w).real();
            for (int pass = 0; pass < 2; ++pass)
                w -= q.leftCols(j + 1) * (q.leftCols(j + 1).adjoint() * w);
            const double b = w.norm();
            if (j + 1 == m) break;
            if (b < 1e-14 * scale) {
                steps = j + 1;
                break;
            }
            beta(j) = b;
            q.col(j + 1) = w / b;
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
        for (Eigen::Index j = 0; j < steps; ++j) {
            tri(j, j) = alpha(j);
            if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        const double theta = es.eigenvalues()(0);
        v = q.leftCols(steps) * es.eigenvectors().col(0).cast<cplx>();
        v.normalize();
        const double resid = (h * v - theta * v).norm();
        best = theta;
        if (resid <= 1e-11 * scale || steps < m) return best;
    }
    throw NumericalFailure("min_eigenvalue: Lanczos did not converge");
}

}  // namespace

double min_eigenvalue(const DenseHermitian& A) {
    const auto& a = A.a;
    const double asym = max_abs(a - a.adjoint());
    if (asym > A.tol) {
        std::ostringstream os;
        os << "min_eigenvalue: matrix not Hermitian (max|A-A*| = " << asym << " > " << A.tol << ")";
        throw InvalidInput(os.str());
    }
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    for (Eigen::Index i = 0; i < h.size(); ++i)
        if (!std::isfinite(h.data()[i].real()) || !std::isfinite(h.data()[i].imag()))
            throw InvalidInput("min_eigenvalue: non-finite entry");
    return h.rows() <= 1024 ? dense_min_eig(h) : lanczos_min_eig(h);
}

double lp_norm(const std::vector<cplx>& x, double p) {
    if (!(p >= 1.0)) throw InvalidInput("norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0;
        for (auto& v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 2.0) {
        // scaled sum of squares guards against overflow
        double scale = 0;
        for (auto& v : x) scale = std::max(scale, std::abs(v));
        if (scale == 0) return 0;
        double s = 0;
        for (auto& v : x) s += std::norm(v / scale);
        return scale * std::sqrt(s);
    }
    double scale = 0;
    for (auto& v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0) return 0;
    double s = 0;
    for (auto& v : x) s += std::pow(std::abs(v) / scale, p);
    return scale * std::pow(s, 1.0 / p);
}

double lp_norm(const ComplexVector& x, double p) { return lp_norm(x.entries(), p); }

cplx inner(const ComplexVector& x, const ComplexVector& y) {
    const long lo = std::max(x.first(), y.first()), hi = std::min(x.last(), y.last());
    cplx s = 0.0;
    for (long n = lo; n <= hi; ++n) s += x.at_index(n) * std::conj(y.at_index(n));
    return s;
}

NormInner norms_and_inner(const ComplexVector& x, const ComplexVector& y, double p) {
    if (!(p >= 1.0)) throw InvalidInput("norms_and_inner: p must be >= 1");
    if (x.offset() != y.offset() || x.size() != y.size())
        throw InvalidInput("norms_and_inner: windows are not aligned");
    return {lp_norm(x, p), inner(x, y)};
}

ComplexVector axpy(cplx a, const ComplexVector& x, const ComplexVector& y) {
    const long lo = std::min(x.first(), y.first()), hi = std::max(x.last(), y.last());
    std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
    for (long n = lo; n <= hi; ++n) out[static_cast<std::size_t>(n - lo)] = a * x.at_index(n) + y.at_index(n);
    return ComplexVector(std::move(out), lo, std::abs(a) * x.spill() + y.spill());
}

double max_abs_diff(const ComplexVector& x, const ComplexVector& y) {
    const long lo = std::min(x.first(), y.first()), hi = std::max(x.last(), y.last());
    double m = 0;
    for (long n = lo; n <= hi; ++n) m = std::max(m, std::abs(x.at_index(n) - y.at_index(n)));
    return m;
}

}  // namespace orbitlab
