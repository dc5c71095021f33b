#include "orbitlab/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace orbitlab::fft {

namespace {

// FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<cplx> run(std::vector<cplx> x, int sign) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return x;
    std::vector<cplx> out(x.size());
    auto* in = reinterpret_cast<fftw_complex*>(x.data());
    auto* o = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        p = fftw_plan_dft_1d(n, in, o, sign, FFTW_ESTIMATE);
    }
    fftw_execute(p);
    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        fftw_destroy_plan(p);
    }
    return out;
}

}  // namespace

std::vector<cplx> forward(std::vector<cplx> x) { return run(std::move(x), FFTW_FORWARD); }
std::vector<cplx> backward(std::vector<cplx> x) { return run(std::move(x), FFTW_BACKWARD); }

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t len = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(len);
    std::vector<cplx> fa(n), fb(n);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fa = forward(std::move(fa));
    fb = forward(std::move(fb));
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fa = backward(std::move(fa));
    fa.resize(len);
    const double s = 1.0 / static_cast<double>(n);
    for (auto& v : fa) v *= s;
    return fa;
}

}  // namespace orbitlab::fft
