#include "orbitlab/whc_construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "orbitlab/error.hpp"
#include "orbitlab/fft.hpp"
#include "orbitlab/toeplitz_ops.hpp"

namespace orbitlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt(const std::string& head, double v) {
    std::ostringstream os;
    os << head << v;
    return os.str();
}

}  // namespace

std::size_t PhiMap::count(int k) const {
    return static_cast<std::size_t>(std::count(assignments.begin(), assignments.end(), k));
}

PhiMap PhiMap::cyclic(int K, std::size_t H) {
    if (K < 1 || H < 1) throw InvalidInput("PhiMap::cyclic: K and H must be positive");
    PhiMap m;
    m.assignments.resize(H);
    for (std::size_t j = 0; j < H; ++j) m.assignments[j] = static_cast<int>(j % static_cast<std::size_t>(K)) + 1;
    return m;
}

PhiMap phi_map(const IndexFn& c, const IndexFn& d, std::size_t H) {
    if (H < 2) throw InvalidInput("phi_map: horizon too short to complete two blocks");
    // n/d_n must decrease toward 0 over the horizon
    const double first = 1.0 / d(1);
    double prev = first;
    for (std::size_t n = 1; n <= H; ++n) {
        const double dn = d(n), cn = c(n);
        if (!(dn > 0) || !std::isfinite(dn)) throw InvalidInput("phi_map: d must be positive");
        if (!(cn > 0) || !std::isfinite(cn)) throw InvalidInput("phi_map: c must be positive");
        const double v = static_cast<double>(n) / dn;
        if (v > prev * (1.0 + 1e-12)) throw HypothesisViolation("phi_map: n/d_n is not non-increasing");
        prev = v;
    }
    if (prev > 0.5 * first) throw HypothesisViolation("phi_map: n/d_n does not decay toward 0 over the horizon");

    auto w = [&](double r) { return d(static_cast<std::size_t>(r)) / r; };
    // smallest r with w_r >= need; w is non-decreasing by the check above (trusted past H)
    auto smallest_r = [&](double need) -> double {
        for (std::size_t r = 1; r <= H; ++r)
            if (w(static_cast<double>(r)) >= need) return static_cast<double>(r);
        double lo = static_cast<double>(H), hi = lo;
        while (w(hi) < need) {
            lo = hi;
            hi *= 2;
            if (hi > 1e15) throw NumericalFailure("phi_map: block size exceeds 1e15");
        }
        while (hi - lo > 1) {
            const double mid = std::floor((lo + hi) / 2);
            (w(mid) >= need ? hi : lo) = mid;
        }
        return hi;
    };

    PhiMap m;
    double r_prev = 1, v = 0, total = 0;
    for (std::size_t s = 1; total < static_cast<double>(H); ++s) {
        v = std::max(v, c(s));
        const double sd = static_cast<double>(s);
        const double r = std::max(sd * r_prev, smallest_r(sd * sd * v));
        m.blocks.push_back(static_cast<std::size_t>(r));
        total += r;
        if (total <= static_cast<double>(H)) m.completed_blocks = s;
        r_prev = r;
    }
    if (m.completed_blocks < 2) throw InvalidInput("phi_map: horizon too short to complete two blocks");

    m.assignments.reserve(H);
    for (std::size_t s = 1; s <= m.blocks.size() && m.assignments.size() < H; ++s)
        for (std::size_t i = 0; i < m.blocks[s - 1] && m.assignments.size() < H; ++i)
            m.assignments.push_back(static_cast<int>(i % s) + 1);

    // ratio (1/d_m) sum_{j <= k_{n,m}} c_phi(j) at the last visit of n
    const std::size_t S = m.completed_blocks;
    std::vector<double> cval(m.blocks.size() + 1);
    for (std::size_t k = 1; k < cval.size(); ++k) cval[k] = c(k);
    m.ratio_at_horizon.assign(S, 0.0);
    m.ratio_at_block_end.assign(S, {});
    std::vector<std::size_t> visits(S + 1, 0);
    std::vector<double> last_ratio(S + 1, 0.0);
    double csum = 0;
    std::size_t j = 0;
    for (std::size_t s = 1; s <= m.blocks.size() && j < H; ++s) {
        for (std::size_t i = 0; i < m.blocks[s - 1] && j < H; ++i, ++j) {
            const auto k = static_cast<std::size_t>(m.assignments[j]);
            csum += cval[k];
            if (k <= S) {
                ++visits[k];
                last_ratio[k] = csum / d(visits[k]);
            }
        }
        if (s <= S)
            for (std::size_t n = 1; n <= s; ++n) m.ratio_at_block_end[n - 1].push_back(last_ratio[n]);
    }
    for (std::size_t n = 1; n <= S; ++n) m.ratio_at_horizon[n - 1] = last_ratio[n];
    return m;
}

GramReport gram_check(const std::vector<ComplexVector>& a, const std::vector<ComplexVector>& battery,
                      const InnerFn& inner_fn) {
    const InnerFn ip = inner_fn ? inner_fn : InnerFn([](const ComplexVector& x, const ComplexVector& y) { return inner(x, y); });
    const std::size_t M = a.size();
    if (M == 0) throw InvalidInput("gram_check: empty family");
    GramReport rep;
    std::vector<double> nrm(M);
    double acc = 0;
    for (std::size_t i = 0; i < M; ++i) {
        nrm[i] = std::sqrt(std::max(0.0, ip(a[i], a[i]).real()));
        if (!(nrm[i] > 0)) throw InvalidInput("gram_check: zero vector at position " + std::to_string(i + 1));
        acc += 1.0 / (nrm[i] * nrm[i]);
        rep.inv_sq_partial.push_back(acc);
    }
    Eigen::MatrixXcd gm(M, M);
    const std::size_t half = M / 2;
    double r_half = 0;
    for (std::size_t i = 0; i < M; ++i) {
        gm(i, i) = 1.0;
        for (std::size_t j = i + 1; j < M; ++j) {
            const cplx v = ip(a[i], a[j]) / (nrm[i] * nrm[j]);
            gm(i, j) = v;
            gm(j, i) = std::conj(v);
            rep.r += std::norm(v);
            if (j < half) r_half += std::norm(v);
        }
    }
    rep.d = 1.0 + std::sqrt(2.0 * rep.r);
    rep.d_stated = 1.0 + std::sqrt(rep.r / 2.0);
    rep.gram_max_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(gm, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();

    if (!battery.empty()) {
        rep.score = std::numeric_limits<double>::infinity();
        for (const auto& x : a) {
            double m = 0;
            for (const auto& y : battery) m = std::max(m, std::abs(inner(x, y)));
            rep.score = std::min(rep.score, m);
        }
    }

    if (M >= 4) {
        const double s_half = rep.inv_sq_partial[half - 1], inc = acc - s_half;
        rep.sum_divergent = inc >= 0.5 * s_half ? Tri::yes : inc < 0.01 * s_half ? Tri::no : Tri::undetermined;
        const double r_inc = rep.r - r_half;
        rep.r_bounded = r_inc <= 1e-12 + 0.01 * r_half ? Tri::yes
                        : r_inc >= 0.5 * r_half     ? Tri::no
                                                     : Tri::undetermined;
    }
    rep.hypotheses_hold = rep.sum_divergent == Tri::yes && rep.r_bounded == Tri::yes;
    return rep;
}

WHCInstance::WHCInstance(WeightSequence w_, std::vector<ComplexVector> targets_, std::vector<std::size_t> admissible_)
    : w(std::move(w_)), r(r_sequence(w)), targets(std::move(targets_)), admissible(std::move(admissible_)) {
    if (targets.empty()) throw InvalidInput("WHCInstance: no targets");
    for (const auto& t : targets) {
        if (t.size() == 0 || lp_norm(t, w.p) == 0) throw InvalidInput("WHCInstance: zero target");
        if (t.first() < -w.W || t.last() > w.W) throw InvalidInput("WHCInstance: target outside the window");
    }
    std::sort(admissible.begin(), admissible.end());
    admissible.erase(std::unique(admissible.begin(), admissible.end()), admissible.end());
    op_norm = *std::max_element(w.w.begin(), w.w.end());
}

WHCInstance WHCInstance::chan_sanders(int K, long W, std::uint64_t seed) {
    if (K < 1) throw InvalidInput("chan_sanders: K must be positive");
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> num(-8, 8), den(1, 8);
    std::vector<ComplexVector> t;
    for (int k = 0; k < K; ++k) {
        std::vector<cplx> e(5);
        do {
            for (auto& v : e) v = static_cast<double>(num(gen)) / den(gen);
        } while (std::all_of(e.begin(), e.end(), [](cplx v) { return v == cplx(0); }));
        t.emplace_back(std::move(e), -2);
    }
    return WHCInstance(WeightSequence::chan_sanders(W), std::move(t));
}

ComplexVector WHCInstance::u(int k, long n) const {
    if (k < 1 || k > K()) throw InvalidInput("WHCInstance::u: target index out of range");
    const auto& x = targets[static_cast<std::size_t>(k - 1)];
    const long lo = x.first() - n, hi = x.last() - n;
    if (lo < -w.W || hi > w.W) {
        std::ostringstream os;
        os << "window overflow: u_{" << k << "," << n << "} leaves [-" << w.W << ", " << w.W << "]";
        throw NumericalFailure(os.str());
    }
    // T^n e_m = (r_{m-n}/r_m) e_{m-n}
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long m = x.first() + static_cast<long>(i);
        const double a = r.at(m - n), b = r.at(m);
        const bool direct = std::isnormal(a) && std::isnormal(b) && std::isfinite(a / b) && a / b != 0;
        const double f = direct ? a / b : std::exp(r.log_at(m - n) - r.log_at(m));
        out[i] = x[i] * f;
    }
    return ComplexVector(std::move(out), lo);
}

double WHCInstance::c(int k) const {
    return std::sqrt(std::max(0.0, inner(u(k, 0), u(k, 0)).real()));
}

namespace {

struct StageChecks {
    double e5 = 0, e6 = 0, e7 = 0;  // ratios to the bounds; < 1 means the inequality holds
};

// Worst ratios for stage j (1-based) given theta(1..j-1) and a candidate theta(j).
StageChecks stage_checks(const WHCInstance& inst, const PhiMap& phi, const std::vector<long>& theta, std::size_t j,
                         long cand, bool stop_early) {
    StageChecks out;
    const double jd = static_cast<double>(j);
    const int pj = phi(j);
    if (j >= 2) {
        // (e7) in logs
        const double nrm = inst.xnorm(inst.u(pj, -cand));
        const double log_bound = -static_cast<double>(theta[j - 2]) * std::log(inst.op_norm) - jd * std::log(2.0);
        out.e7 = nrm == 0 ? 0.0 : std::exp(std::log(nrm) - log_bound);
        if (stop_early && out.e7 >= 1) return out;
    }
    const double b5 = std::ldexp(1.0, -static_cast<int>(j));
    std::vector<ComplexVector> right;
    for (std::size_t t = 1; t < j; ++t) right.push_back(inst.u(phi(t), cand - theta[t - 1]));
    for (std::size_t s = 1; s < j; ++s)
        for (std::size_t r = 1; r < j; ++r) {
            const ComplexVector left = inst.u(phi(s), theta[r - 1] - theta[s - 1]);
            for (std::size_t t = 1; t < j; ++t) {
                out.e5 = std::max(out.e5, std::abs(inst.inner(left, right[t - 1])) / b5);
                if (stop_early && out.e5 >= 1) return out;
            }
        }
    const double cj = inst.c(pj);
    const double b6 = std::ldexp(1.0, -2 * static_cast<int>(j));
    for (std::size_t s = 1; s < j; ++s) {
        const double bound = inst.c(phi(s)) * cj * b6;
        for (long r = cand + 1; r <= cand + 4; ++r) {
            const double v = std::abs(inst.inner(inst.u(phi(s), r - theta[s - 1]), inst.u(pj, r - cand)));
            out.e6 = std::max(out.e6, v / bound);
            if (stop_early && out.e6 >= 1) return out;
        }
    }
    return out;
}

void check_phi(const WHCInstance& inst, const PhiMap& phi, std::size_t J) {
    if (J < 1) throw InvalidInput("build_theta: need at least one stage");
    if (phi.horizon() < J) throw InvalidInput("build_theta: phi map shorter than the stage count");
    for (std::size_t j = 1; j <= J; ++j)
        if (phi(j) < 1 || phi(j) > inst.K())
            throw InvalidInput("build_theta: phi(" + std::to_string(j) + ") exceeds the number of targets");
}

}  // namespace

ThetaSchedule verify_theta(const WHCInstance& inst, const PhiMap& phi, const std::vector<long>& theta) {
    check_phi(inst, phi, theta.size());
    ThetaSchedule s;
    s.theta = theta;
    for (std::size_t j = 1; j <= theta.size(); ++j) {
        if (j >= 2 && theta[j - 1] <= theta[j - 2]) throw InvalidInput("verify_theta: theta must be strictly increasing");
        const StageChecks c = stage_checks(inst, phi, theta, j, theta[j - 1], false);
        s.e5_worst = std::max(s.e5_worst, c.e5);
        s.e6_worst = std::max(s.e6_worst, c.e6);
        s.e7_worst = std::max(s.e7_worst, c.e7);
    }
    s.e5 = s.e5_worst < 1;
    s.e6 = s.e6_worst < 1;
    s.e7 = s.e7_worst < 1;
    return s;
}

ThetaSchedule build_theta(const WHCInstance& inst, const PhiMap& phi, std::size_t J) {
    check_phi(inst, phi, J);
    if (!(inst.op_norm > 1)) throw HypothesisViolation("build_theta: (e7) needs ||T|| > 1");
    std::vector<long> theta{0};
    if (!inst.admissible.empty() && inst.admissible.front() != 0)
        theta[0] = static_cast<long>(inst.admissible.front());
    for (std::size_t j = 2; j <= J; ++j) {
        long cand = theta.back();
        auto it = std::upper_bound(inst.admissible.begin(), inst.admissible.end(), static_cast<std::size_t>(theta.back()));
        for (;;) {
            if (inst.admissible.empty()) {
                ++cand;
            } else {
                if (it == inst.admissible.end())
                    throw HypothesisViolation("build_theta: admissible set exhausted at stage " + std::to_string(j));
                cand = static_cast<long>(*it++);
            }
            const StageChecks c = stage_checks(inst, phi, theta, j, cand, true);
            if (c.e5 < 1 && c.e6 < 1 && c.e7 < 1) break;
        }
        theta.push_back(cand);
    }
    ThetaSchedule s = verify_theta(inst, phi, theta);
    if (!(s.e5 && s.e6 && s.e7)) throw NumericalFailure("build_theta: re-assertion of the schedule failed");
    return s;
}

ConstructionTrace assemble_and_decompose(const WHCInstance& inst, const ThetaSchedule& schedule, const PhiMap& phi,
                                         const std::vector<ComplexVector>& battery) {
    const std::size_t J = schedule.theta.size();
    check_phi(inst, phi, J);
    ConstructionTrace tr;
    tr.theta = schedule.theta;
    for (std::size_t j = 1; j <= J; ++j) tr.phi.push_back(phi(j));
    const auto th = [&](std::size_t j) { return schedule.theta[j - 1]; };

    tr.u = inst.u(phi(1), -th(1));
    for (std::size_t j = 2; j <= J; ++j) tr.u = axpy(1.0, inst.u(phi(j), -th(j)), tr.u);

    ComplexVector cur = tr.u;
    long applied = 0;
    for (std::size_t r = 1; r <= J; ++r) {
        for (; applied < th(r); ++applied) cur = shift_apply(inst.w, cur);
        StageDecomposition sd;
        sd.r = r;
        sd.orbit_point = cur;
        sd.a = ComplexVector::zeros(1);
        sd.b = ComplexVector::zeros(1);
        for (std::size_t j = 1; j < r; ++j) sd.a = axpy(1.0, inst.u(phi(j), th(r) - th(j)), sd.a);
        for (std::size_t j = r + 1; j <= J; ++j) sd.b = axpy(1.0, inst.u(phi(j), th(r) - th(j)), sd.b);
        const ComplexVector sum = axpy(1.0, inst.u(phi(r), 0), axpy(1.0, sd.a, sd.b));
        double scale = 1.0;
        for (const auto& v : cur.entries()) scale = std::max(scale, std::abs(v));
        sd.mismatch = max_abs_diff(cur, sum) / scale;
        if (sd.mismatch > 1e-10)
            throw NumericalFailure(fmt("assemble_and_decompose: decomposition mismatch " , sd.mismatch) +
                                   " at stage " + std::to_string(r));
        sd.b_norm = inst.xnorm(sd.b);
        sd.b_bound = std::ldexp(1.0, -static_cast<int>(r));
        if (sd.b_norm > sd.b_bound) tr.b_bounds_hold = false;
        tr.stages.push_back(std::move(sd));
    }

    const InnerFn gip = [&inst](const ComplexVector& x, const ComplexVector& y) { return inst.inner(x, y); };
    tr.gram.resize(static_cast<std::size_t>(inst.K()));
    for (int k = 1; k <= inst.K(); ++k) {
        std::vector<ComplexVector> fam;
        for (const auto& sd : tr.stages)
            if (tr.phi[sd.r - 1] == k && lp_norm(sd.a, 2.0) > 0) fam.push_back(sd.a);
        if (!fam.empty()) tr.gram[static_cast<std::size_t>(k - 1)] = gram_check(fam, battery, gip);
    }
    return tr;
}

std::vector<ComplexVector> functional_battery(int count, long lo, long hi, std::uint64_t seed) {
    if (count < 0 || hi < lo) throw InvalidInput("functional_battery: bad size or index range");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<ComplexVector> out;
    for (int i = 0; i < count; ++i) {
        std::vector<cplx> e(static_cast<std::size_t>(hi - lo + 1));
        for (auto& v : e) v = cplx(nd(gen), nd(gen));
        const double n = lp_norm(e, 2.0);
        for (auto& v : e) v /= n;
        out.emplace_back(std::move(e), lo);
    }
    return out;
}

std::vector<VisitError> weak_visit_report(const WHCInstance& inst, const ConstructionTrace& trace,
                                          const std::vector<ComplexVector>& battery) {
    std::vector<VisitError> out;
    for (int k = 1; k <= inst.K(); ++k) {
        VisitError e{k, std::numeric_limits<double>::infinity(), std::nullopt};
        for (const auto& sd : trace.stages) {
            if (trace.phi[sd.r - 1] != k) continue;
            const ComplexVector diff = axpy(-1.0, inst.u(k, 0), sd.orbit_point);
            double m = 0;
            for (const auto& y : battery) m = std::max(m, std::abs(inner(diff, y)));
            if (m < e.err) {
                e.err = m;
                e.stage = sd.r;
            }
        }
        out.push_back(e);
    }
    return out;
}

SlowGrowthTrace slow_growth_search(const RateFn& q, std::size_t S, std::size_t G) {
    if (S < 1) throw InvalidInput("slow_growth_search: need at least one stage");
    if (!fft::is_pow2(G) || G < 256) throw InvalidInput("slow_growth_search: window must be a power of two >= 256");
    {
        double prev = q(0.0);
        for (double x = 0.25; x <= 1e6; x *= 1.25) {
            const double v = q(x);
            if (!std::isfinite(v) || !(v > 0) || !(v > prev))
                throw InvalidInput(fmt("slow_growth_search: rate function is not increasing near x = ", x));
            prev = v;
        }
        for (int n = 1; n < 64; ++n)
            if (std::ldexp(q(n + 1), -(n + 1)) >= std::ldexp(q(n), -n))
                throw InvalidInput("slow_growth_search: 2^-x q(x) is not decreasing");
    }
    const std::size_t N = G / 4;
    const double Gd = static_cast<double>(G);
    std::vector<double> t(G);
    for (std::size_t j = 0; j < G; ++j) {
        t[j] = two_pi * static_cast<double>(j) / Gd;
        if (t[j] > std::numbers::pi) t[j] -= two_pi;
    }
    auto representer = [&](const std::vector<cplx>& psi) {
        // F_j = (1/G) sum_t conj(phi)(t) e^{-ijt}, j < N
        std::vector<cplx> f = fft::forward(psi);
        f.resize(N);
        for (auto& v : f) v /= Gd;
        return f;
    };
    auto l2 = [&](const std::vector<cplx>& psi) { return lp_norm(psi, 2.0) / std::sqrt(Gd); };
    auto next_k = [&](double norm, std::size_t after) {
        for (std::size_t k = after + 1; k < after + 10'000'000; ++k)
            if (norm <= q(static_cast<double>(k)) / 4.0) return k;
        throw NumericalFailure("slow_growth_search: no index k satisfies ||phi|| <= q(k)/4");
    };

    SlowGrowthTrace tr;
    // stage 1: a modulated bump on the smallest arc, so every later arc contains it
    const double hS = 1.0 / static_cast<double>(S);
    const double m0 = static_cast<double>(N / 16);
    std::vector<cplx> psi(G, 0.0);
    for (std::size_t j = 0; j < G; ++j) {
        const double s = t[j] / hS;
        if (std::abs(s) < 1) psi[j] = std::polar(std::exp(-1.0 / (1.0 - s * s)), m0 * t[j]);
    }
    std::vector<cplx> F = representer(psi);
    {
        const double n = lp_norm(F, 2.0);
        for (auto& v : psi) v /= n;
        for (auto& v : F) v /= n;
    }
    {
        SlowStage st{1.0, l2(psi), lp_norm(F, 2.0), 0.0, 0.0, 0, 0, 0};
        st.k = next_k(st.phi_l2, 0);
        tr.stages.push_back(st);
    }
    for (std::size_t n = 2; n <= S; ++n) {
        const double h = 1.0 / static_cast<double>(n);
        std::vector<std::size_t> pts;
        for (std::size_t j = 0; j < G; ++j)
            if (std::abs(t[j]) <= h) pts.push_back(j);
        Eigen::MatrixXcd A(N, pts.size());
        for (std::size_t p = 0; p < pts.size(); ++p)
            for (std::size_t j = 0; j < N; ++j)
                A(j, p) = std::polar(1.0 / Gd, -static_cast<double>(j) * t[pts[p]]);
        Eigen::VectorXcd rhs(N);
        for (std::size_t j = 0; j < N; ++j) rhs(j) = F[j];
        const Eigen::VectorXcd sol = A.completeOrthogonalDecomposition().solve(rhs);
        const Eigen::VectorXcd fit = A * sol;
        const SlowStage& prev = tr.stages.back();
        SlowStage st{};
        st.arc = h;
        st.ls_residual = (fit - rhs).norm();
        st.ls_target = std::pow(5.0, 1.0 - static_cast<double>(n)) * q(static_cast<double>(prev.k)) *
                       std::ldexp(1.0, -static_cast<int>(prev.k));
        if (!(st.ls_residual <= st.ls_target)) {
            std::ostringstream os;
            os << "slow_growth_search: stage " << n << " least-squares residual " << st.ls_residual
               << " exceeds target " << st.ls_target << " (completed " << n - 1 << " stages)";
            throw NumericalFailure(os.str());
        }
        std::fill(psi.begin(), psi.end(), cplx(0));
        for (std::size_t p = 0; p < pts.size(); ++p) psi[pts[p]] = sol(static_cast<Eigen::Index>(p));
        for (std::size_t j = 0; j < N; ++j) F[j] = fit(static_cast<Eigen::Index>(j));
        st.phi_l2 = l2(psi);
        st.functional_norm = lp_norm(F, 2.0);
        st.k = next_k(st.phi_l2, prev.k);
        tr.stages.push_back(st);
    }

    std::vector<double> arcs, targets;
    for (const auto& st : tr.stages) {
        arcs.push_back(st.arc);
        targets.push_back(std::exp2(1.0 / static_cast<double>(st.k)));
    }
    const std::size_t grid = std::max<std::size_t>(1u << 14, G);
    tr.g = outer_from_log_modulus(smooth_bump_modulus(arcs, targets, grid));
    tr.g.label = "outer bump";
    const std::vector<cplx> gb = boundary_eval(tr.g, grid);
    tr.g_sup = 0;
    for (std::size_t i = 0; i < tr.stages.size(); ++i) {
        auto& st = tr.stages[i];
        st.arc_target = targets[i];
        for (std::size_t j = 0; j < grid; ++j) {
            double a = two_pi * static_cast<double>(j) / static_cast<double>(grid);
            if (a > std::numbers::pi) a -= two_pi;
            if (std::abs(a) <= st.arc) st.arc_sup_g = std::max(st.arc_sup_g, std::abs(gb[j]));
        }
    }
    for (const auto& v : gb) tr.g_sup = std::max(tr.g_sup, std::abs(v));

    tr.f = ComplexVector(F);
    const std::size_t kS = tr.stages.back().k;
    const std::size_t H = std::max<std::size_t>(10, 2 * kS);
    const OperatorPtr T = toeplitz_operator(build(tr.g, N, Flavor::coanalytic));
    tr.orbit = iterate_orbit(*T, tr.f, H, "slow-growth f");

    // boundary route on grid G: coefficients j < N of the representer of g^k phi
    std::vector<cplx> gG(G);
    {
        const std::vector<cplx> gv = boundary_eval(tr.g, G);
        for (std::size_t j = 0; j < G; ++j) gG[j] = std::conj(gv[j]);
    }
    tr.all_verified = true;
    tr.resolution_diagnostic = 0;
    for (const auto& st : tr.stages) {
        SlowDip d{st.k, tr.orbit.norms[st.k], tr.orbit.spill_bound, q(static_cast<double>(st.k)), false};
        d.verified = d.norm + d.spill < d.q;
        tr.all_verified = tr.all_verified && d.verified;
        std::vector<cplx> h(psi);
        for (std::size_t j = 0; j < G; ++j) h[j] *= std::pow(gG[j], static_cast<double>(st.k));
        const double alt = lp_norm(representer(h), 2.0);
        tr.resolution_diagnostic = std::max(tr.resolution_diagnostic, std::abs(alt - d.norm) / d.norm);
        tr.dips.push_back(d);
    }
    return tr;
}

}  // namespace orbitlab
