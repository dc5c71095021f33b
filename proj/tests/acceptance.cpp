// Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "orbitlab/cli.hpp"
#include "orbitlab/fourier_measures.hpp"
#include "orbitlab/orbit_lab.hpp"
#include "orbitlab/toeplitz_ops.hpp"
#include "orbitlab/whc_construct.hpp"

using namespace orbitlab;

namespace {

struct Verdict {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.ok = false;
        v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit > 0 && secs > time_limit) {
        v.ok = false;
        v.detail << " [runtime " << secs << " s over " << time_limit << " s]";
    }
    if (!v.ok) ++failures;
    std::printf("criterion %2d %s: %s (%.2f s)%s\n", id, v.ok ? "PASS" : "FAIL", title.c_str(), secs,
                v.detail.str().c_str());
    std::fflush(stdout);
}

ComplexVector gaussian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(nd(rng), nd(rng));
    return ComplexVector(std::move(v));
}

SymbolSeries random_poly(std::mt19937_64& rng, std::size_t deg, double scale) {
    std::normal_distribution<double> nd;
    std::vector<cplx> c(deg + 1);
    for (auto& v : c) v = scale * cplx(nd(rng), nd(rng));
    return SymbolSeries::polynomial(c, "random");
}

double circle_extreme(const SymbolSeries& g, bool take_max) {
    double m = take_max ? 0.0 : 1e300;
    for (const auto& z : eval_on_circle(g.taylor, 1.0, 4096))
        m = take_max ? std::max(m, std::abs(z)) : std::min(m, std::abs(z));
    return m;
}

const SymbolSeries half_plane = SymbolSeries::polynomial({1.5, 0.5}, "(3+z)/2");

}  // namespace

int main() {
    criterion(1, "Taylor norms of (1-z)^2 (2-z)^-n", 30, [](Verdict& v) {
        const auto a = taylor_coefficients(2, 1.0, 1, 60);
        bool exact = a[0] == 0.5 && a[1] == -0.75;
        for (int m = 2; m <= 60; ++m) exact = exact && a[static_cast<std::size_t>(m)] == std::ldexp(1.0, -(m + 1));
        v.require(exact, "a_0 = 1/2, a_1 = -3/4, a_m = 2^-(m+1)");
        const auto t = taylor_norms(2, 1.0, 4096);
        v.require(t.rows.front().N == 1.5, "N(1) = 3/2");
        int spots = 0;
        double worst = 0;
        for (const auto& r : t.rows)
            if (r.crosscheck_error) ++spots, worst = std::max(worst, *r.crosscheck_error);
        v.require(spots >= 10 && worst <= 1e-8, "series vs contour on 10 rows");
        // direct sup of N(n) n^{1/2}
        double sup = 0;
        for (const auto& r : t.rows) sup = std::max(sup, r.N * std::sqrt(static_cast<double>(r.n)));
        v.require(std::isfinite(t.A) && std::abs(t.A - sup) <= 1e-12 * sup, "A = sup N(n) n^(1/2) finite");
        v.require(t.fitted_slope >= -1.1 && t.fitted_slope <= -0.45, "fitted slope in [-1.1, -0.45]");
        v.detail << " N(1)=" << t.rows.front().N << " crosscheck=" << worst << " A=" << t.A << " slope=" << t.fitted_slope;
    });

    criterion(2, "growth bound for g = (3+z)/2 and h = cap(g)", 20, [](Verdict& v) {
        const std::size_t N = 256, H = 200;
        const auto T = toeplitz_operator(build(half_plane, N, Flavor::coanalytic));
        const auto S = toeplitz_operator(build(cap_function(half_plane), N, Flavor::coanalytic));
        std::mt19937_64 rng(2);
        double worst_premise = 1e300;
        std::size_t violations = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const auto r = growth_bound(*T, *S, gaussian(rng, N), H);
            v.require(r.premise_holds, "premise on vector " + std::to_string(trial));
            worst_premise = std::min(worst_premise, r.premise_min_eig);
            violations += r.violations.size();
        }
        v.require(worst_premise >= -1e-8, "premise min eig >= -1e-8");
        v.require(violations == 0, "zero violations");
        v.detail << " premise_min_eig=" << worst_premise << " violations=" << violations;
    });

    criterion(3, "Cesaro means and density of large coefficients", 0, [](Verdict& v) {
        const auto arc = CircleMeasure::arc(std::numbers::pi / 2);
        const auto ces = cesaro_profile(arc, 999);
        // mean of (sin x / x)^2 at x = k pi/2, k = 0..999
        double oracle = 1.0;
        for (int k = 1; k <= 999; ++k) {
            const double x = k * std::numbers::pi / 2;
            oracle += std::pow(std::sin(x) / x, 2);
        }
        oracle /= 1000;
        v.require(std::abs(ces[999] - 1.5e-3) <= 2e-4, "arc mean at n = 999 within 1.5e-3 +- 2e-4");
        v.require(std::abs(ces[999] - oracle) <= 1e-12, "arc mean matches closed-form coefficients");
        const auto delta = cesaro_profile(CircleMeasure::delta(0.3), 2000);
        bool ones = true;
        for (double m : delta) ones = ones && m == 1.0;
        v.require(ones, "delta mean identically 1");
        const auto dens = density_zero_profile(arc, 0.5, 10000);
        v.require(dens.back() == 1e-4, "density profile ends at 1e-4");
        v.detail << " arc_mean=" << ces[999] << " oracle=" << oracle << " density=" << dens.back();
    });

    criterion(4, "tridiagonal eigenpairs and hypercyclicity for (1, 0, 0.25)", 0, [](Verdict& v) {
        const Tridiag t{1.0, 0.0, 0.25};
        const auto gen = tridiag_eigen(t, 0.6, 2000);
        const auto deg = tridiag_eigen(t, 0.5, 2000);
        v.require(!gen.degenerate && gen.residual <= 1e-10, "generic branch residual");
        v.require(deg.degenerate && deg.residual <= 1e-10, "degenerate branch residual");
        // eigenvalue b + a z + c/z
        v.require(std::abs(gen.lambda - (0.6 + 0.25 / 0.6)) <= 1e-15, "generic eigenvalue");
        v.require(std::abs(deg.lambda - 1.0) <= 1e-15, "degenerate eigenvalue");
        const auto hc = hypercyclicity_classify(t);
        v.require(hc.verdict == HcVerdict::hypercyclic, "classifier says hypercyclic");
        v.require(std::abs(hc.min_modulus - 0.75) <= 1e-9 && std::abs(hc.max_modulus - 1.25) <= 1e-9,
                  "|g| range [0.75, 1.25]");
        v.require(gen.residual_literal > 1e-2 && deg.residual_literal > 1e-2, "literal candidate residual > 1e-2");
        v.detail << " residuals=" << gen.residual << "," << deg.residual << " literal=" << gen.residual_literal << ","
                 << deg.residual_literal << " range=[" << hc.min_modulus << "," << hc.max_modulus << "]";
    });

    criterion(5, "positivity and dominance on random symbol families", 0, [](Verdict& v) {
        const std::size_t N = 256;
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> count(1, 3), deg(1, 4);
        int nonneg = 0, checked = 0;
        for (int trial = 0; trial < 50; ++trial) {
            // invertible g: constant term dominates the rest
            auto g = random_poly(rng, static_cast<std::size_t>(deg(rng)), 1.0);
            double rest = 0;
            for (std::size_t d = 1; d < g.taylor.size(); ++d) rest += std::abs(g.taylor[d]);
            g.taylor[0] = (rest + 0.5) * std::polar(1.0, std::arg(g.taylor[0]));
            std::vector<SymbolSeries> hs;
            const int m = count(rng);
            double hmax = 0;
            for (int i = 0; i < m; ++i) {
                hs.push_back(random_poly(rng, static_cast<std::size_t>(deg(rng)), 1.0));
                hmax += std::pow(circle_extreme(hs.back(), true), 2);
            }
            // even trials: scale so that sum |h|^2 <= |g|^2 / 2 on the circle
            if (trial % 2 == 0) {
                const double s = circle_extreme(g, false) / std::sqrt(2 * hmax);
                for (auto& h : hs)
                    for (auto& c : h.taylor) c *= s;
            }
            const auto pos = positivity_equiv({g}, hs, N);
            const auto dom = dominance_check(hs, g, N);
            if (pos.H_nonnegative) {
                ++nonneg;
                v.require(pos.min_eig >= -pos.tol, "positivity direction, trial " + std::to_string(trial));
                v.require(dom.dominated, "dominance direction, trial " + std::to_string(trial));
            }
            v.require(pos.verdict != "fail", "positivity verdict, trial " + std::to_string(trial));
            v.require(dom.orderings_agree, "orderings agree, trial " + std::to_string(trial));
            ++checked;
        }
        v.require(nonneg >= 25, "at least 25 families with H >= 0");
        const auto thm = dominance_check({cap_function(half_plane), SymbolSeries::constant(1.0)}, half_plane, N);
        v.require(thm.dominated && thm.min_eig_star_right >= -1e-8, "T_h T_h* + I <= T_g T_g*");
        const auto scalar = dominance_check({SymbolSeries::constant(2.0)}, SymbolSeries::constant(1.0), N);
        v.require(std::abs(scalar.min_eig_star_right + 3.0) <= 1e-9, "scalar violation min eig = -3");
        v.detail << " families=" << checked << " with_H_nonneg=" << nonneg << " cap_instance_min_eig="
                 << thm.min_eig_star_right << " scalar_min_eig=" << scalar.min_eig_star_right;
    });

    criterion(6, "contraction identity and resolvent decay", 0, [](Verdict& v) {
        std::mt19937_64 rng(6);
        std::normal_distribution<double> nd;
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXcd m(32, 32);
            for (Eigen::Index i = 0; i < 32; ++i)
                for (Eigen::Index j = 0; j < 32; ++j) m(i, j) = cplx(nd(rng), nd(rng));
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
            m /= svd.singularValues()(0) * 1.0001;
            const auto S = dense_operator(m);
            for (double c : {0.5, 1.0, 2.0}) worst = std::max(worst, coco_identity(*S, c).residual);
        }
        v.require(worst <= 1e-12, "identity residual <= 1e-12");
        Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(64, 64);
        for (int i = 0; i + 1 < 64; ++i) shift(i, i + 1) = 1.0;
        const auto r = resolvent_decay(*dense_operator(shift), 1.0, 3, 256);
        v.require(r.fitted_exponent <= -0.9, "fitted exponent <= -0.9");
        v.require(r.bound_holds, "bound with A from the Taylor norms");
        v.detail << " max_residual=" << worst << " fitted_exponent=" << r.fitted_exponent;
    });

    criterion(7, "weak-hypercyclicity construction end to end", 60, [](Verdict& v) {
        const auto inst = WHCInstance::chan_sanders(4, 4096, 0);
        const auto phi = PhiMap::cyclic(4, 8);
        const auto sched = build_theta(inst, phi, 8);
        v.require(sched.theta.size() == 8, "schedule of 8 stages");
        v.require(sched.e5 && sched.e6 && sched.e7, "(e5), (e6), (e7)");
        const auto battery = functional_battery(5, -2, 2, 1);
        const auto tr = assemble_and_decompose(inst, sched, phi, battery);
        v.require(tr.b_bounds_hold, "||b_r|| <= 2^-r");
        for (const auto& s : tr.stages) v.require(s.b_norm <= s.b_bound, "stage " + std::to_string(s.r));
        double worst = 0;
        for (const auto& e : weak_visit_report(inst, tr, battery)) worst = std::max(worst, e.err);
        v.require(worst < 0.1, "weak-visit errors < 0.1");
        v.detail << " theta=";
        for (long t : sched.theta) v.detail << t << (t == sched.theta.back() ? "" : ",");
        v.detail << " max_err=" << worst;
    });

    criterion(8, "slow-orbit construction with q = 1 + log(1+x)", 0, [](Verdict& v) {
        const RateFn q = [](double x) { return 1.0 + std::log1p(x); };
        const auto tr = slow_growth_search(q, 3, 1u << 12);
        v.require(tr.dips.size() == 3, "three dips");
        std::vector<std::size_t> probes;
        for (const auto& d : tr.dips) {
            v.require(d.verified && d.norm + d.spill < q(static_cast<double>(d.k)), "dip at k = " + std::to_string(d.k));
            probes.push_back(d.k);
        }
        v.require(tr.all_verified, "all dips verified");
        const auto sp = superpoly_profile(tr.orbit, {1, 2, 3}, probes);
        for (const auto& pk : sp.per_k) v.require(pk.probe_dips.size() == 3, "superpoly flags all three dips");
        v.detail << " k=";
        for (const auto& d : tr.dips) v.detail << d.k << "(" << d.norm << "<" << d.q << ") ";
    });

    criterion(9, "super-polynomial orbit of the kernel at -0.9", 0, [](Verdict& v) {
        const std::size_t N = 4096, H = 500;
        const auto p = iterate_kernel_orbit_mp(half_plane, -0.9, N, H);
        const double k0 = std::sqrt((1 - std::pow(0.81, static_cast<double>(N))) / (1 - 0.81));
        double worst = 0;
        for (std::size_t n = 0; n <= H; ++n)
            worst = std::max(worst, std::abs(p.norms[n] / (std::pow(1.05, static_cast<double>(n)) * k0) - 1));
        v.require(worst <= 1e-6, "norms = 1.05^n ||f|| within 1e-6");
        const auto sp = superpoly_profile(p, {3.0});
        const auto& r = sp.per_k.front();
        v.require(r.argmin >= 58 && r.argmin <= 65, "minimum of n^-3 norm in [58, 65]");
        bool increasing = true;
        for (std::size_t n = r.argmin + 1; n <= H; ++n) increasing = increasing && r.ratio[n] > r.ratio[n - 1];
        v.require(increasing && r.tail_monotone, "increasing after the minimum");
        v.detail << " max_rel_err=" << worst << " argmin=" << r.argmin << " bits=" << p.precision_bits;
    });

    criterion(10, "FFT kernel correctness and report determinism", 0, [](Verdict& v) {
        std::mt19937_64 rng(10);
        std::uniform_int_distribution<std::size_t> dim(1, 2048);
        double worst = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = dim(rng), m = 1 + rng() % n;
            const auto c = gaussian(rng, m);
            const UpperToeplitz t(c.entries(), n);
            const auto x = gaussian(rng, n);
            const auto a = toeplitz_apply_direct(t, x), b = toeplitz_apply_fft(t, x);
            const Eigen::VectorXcd ref = t.dense() * x.to_eigen();
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max({worst, std::abs(a[j] - b[j]), std::abs(b[j] - ref(static_cast<Eigen::Index>(j)))});
        }
        v.require(worst <= 1e-12, "FFT vs direct <= 1e-12");

        using cli::JobSpec;
        auto job = [](std::string cmd, cli::json params, std::uint64_t seed) {
            JobSpec j;
            j.name = j.command = std::move(cmd);
            j.params = std::move(params);
            j.seed = seed;
            return j;
        };
        const std::vector<JobSpec> jobs{
            job("coco", {{"count", 5}}, 42),
            job("orbit", {{"symbol", "builtin:cs-halfplane"}, {"x", "random:16"}, {"horizon", 40},
                          {"check", cli::json::array({"ball", "growth:cap", "superpoly:1,2"})}},
                42),
            job("whc-visit", {{"stages", 6}}, 42),
            job("fourier-select", {{"measures", cli::json::array({"lebesgue", "cantor:0.3333333333,10"})}, {"L", 5},
                                   {"n", 20000}},
                42),
        };
        const std::string first = cli::render(cli::merge_reports(cli::run_jobs(jobs, 1, true)));
        const std::string second = cli::render(cli::merge_reports(cli::run_jobs(jobs, 4, true)));
        v.require(first == second, "identical seeds give byte-identical reports");
        auto reseeded = jobs;
        reseeded[0].seed = 43;
        const std::string third = cli::render(cli::merge_reports(cli::run_jobs(reseeded, 1, true)));
        v.require(third != first, "a different seed changes the report");
        v.detail << " fft_max_diff=" << worst << " report_bytes=" << first.size();
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
