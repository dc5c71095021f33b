#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "orbitlab/error.hpp"

namespace orbitlab {

using cplx = std::complex<double>;

/// Global tolerance, 1e-10 unless ORBITLAB_TOL is set or a ToleranceOverride is active on this thread.
double global_tol();

class ToleranceOverride {
public:
    explicit ToleranceOverride(double tol);
    ~ToleranceOverride();
    ToleranceOverride(const ToleranceOverride&) = delete;
    ToleranceOverride& operator=(const ToleranceOverride&) = delete;

private:
    double saved_;
};

/// Finite window of a (possibly bilateral) sequence; entries[i] sits at index offset + i.
/// spill bounds the norm of mass that fell outside the window.
class ComplexVector {
public:
    ComplexVector() = default;
    explicit ComplexVector(std::vector<cplx> entries, long offset = 0, double spill = 0.0);

    static ComplexVector zeros(std::size_t n, long offset = 0);
    static ComplexVector basis(std::size_t n, std::size_t j, long offset = 0);

    std::size_t size() const { return v_.size(); }
    long offset() const { return offset_; }
    long first() const { return offset_; }
    long last() const { return offset_ + static_cast<long>(v_.size()) - 1; }
    double spill() const { return spill_; }
    void add_spill(double s) { spill_ += s; }

    const std::vector<cplx>& entries() const { return v_; }
    std::vector<cplx>& entries() { return v_; }
    cplx& operator[](std::size_t i) { return v_[i]; }
    const cplx& operator[](std::size_t i) const { return v_[i]; }

    /// Value at sequence index n; zero outside the window.
    cplx at_index(long n) const;

    Eigen::VectorXcd to_eigen() const;
    static ComplexVector from_eigen(const Eigen::VectorXcd& v, long offset = 0);

private:
    std::vector<cplx> v_;
    long offset_ = 0;
    double spill_ = 0.0;
};

/// N x N upper triangular Toeplitz matrix with entry (j,k) = c_{k-j}.
struct UpperToeplitz {
    UpperToeplitz(std::vector<cplx> coeffs, std::size_t dim);
    std::vector<cplx> coeffs;
    std::size_t dim;
    Eigen::MatrixXcd dense() const;
};

/// Hermitian matrix together with the tolerance used to accept it.
struct DenseHermitian {
    explicit DenseHermitian(Eigen::MatrixXcd a, double tol = -1.0);
    Eigen::MatrixXcd a;
    double tol;  // negative means 1e-10 * max|a_ij| (scaled by ORBITLAB_TOL)
};

inline constexpr std::size_t fft_threshold = 512;

ComplexVector toeplitz_apply(const UpperToeplitz& t, const ComplexVector& x);
ComplexVector toeplitz_apply_direct(const UpperToeplitz& t, const ComplexVector& x);
ComplexVector toeplitz_apply_fft(const UpperToeplitz& t, const ComplexVector& x);

double min_eigenvalue(const DenseHermitian& a);

struct NormInner {
    double norm;
    cplx inner;
};

/// p = infinity selects the sup norm.
NormInner norms_and_inner(const ComplexVector& x, const ComplexVector& y, double p);
double lp_norm(const ComplexVector& x, double p = 2.0);
double lp_norm(const std::vector<cplx>& x, double p = 2.0);
/// Sum of x_n conj(y_n) over the common support; windows may differ.
cplx inner(const ComplexVector& x, const ComplexVector& y);

ComplexVector axpy(cplx a, const ComplexVector& x, const ComplexVector& y);  // a x + y on the union window
double max_abs_diff(const ComplexVector& x, const ComplexVector& y);

double max_abs(const Eigen::MatrixXcd& a);

}  // namespace orbitlab
