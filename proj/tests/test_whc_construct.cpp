#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "orbitlab/error.hpp"
#include "orbitlab/orbit_lab.hpp"
#include "orbitlab/whc_construct.hpp"

using namespace orbitlab;

namespace {

double mlog(std::size_t m) { return static_cast<double>(m) * std::log(static_cast<double>(m) + 1.0); }

ComplexVector random_vector(std::mt19937_64& gen, std::size_t n, long offset) {
    std::normal_distribution<double> nd;
    std::vector<cplx> e(n);
    for (auto& v : e) v = cplx(nd(gen), nd(gen));
    return ComplexVector(std::move(e), offset);
}

}  // namespace

TEST_CASE("phi_map block sizes for c = 1 and d_m = m log(m+1)") {
    const auto m = phi_map([](std::size_t) { return 1.0; }, mlog, 1000000);
    // block s needs log(r+1) >= s^2
    REQUIRE(m.blocks.size() >= 4);
    for (std::size_t s = 1; s <= 4; ++s) {
        const double oracle = std::ceil(std::exp(static_cast<double>(s * s)) - 1.0);
        CHECK(static_cast<double>(m.blocks[s - 1]) == std::max(oracle, static_cast<double>(s)));
    }
    CHECK(m.completed_blocks == 3);
    CHECK(m.horizon() == 1000000);
    // interleaving pattern 1,1 | 1,2,1,2,... | 1,2,3,...
    CHECK(m(1) == 1);
    CHECK(m(2) == 1);
    CHECK(m(3) == 1);
    CHECK(m(4) == 2);
    CHECK(m(57) == 1);
    CHECK(m(58) == 2);
    CHECK(m(59) == 3);
    CHECK(m.count(4) > 0);

    // ratios shrink from block to block and again at the horizon
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto& ends = m.ratio_at_block_end[n - 1];
        for (std::size_t i = 1; i < ends.size(); ++i) CHECK(ends[i] < ends[i - 1]);
        CHECK(m.ratio_at_horizon[n - 1] < ends.back());
    }
    CHECK(m.ratio_at_horizon[0] < 0.35);
}

TEST_CASE("phi_map ratios against a direct sum") {
    const auto c = [](std::size_t n) { return static_cast<double>(n); };
    const std::size_t H = 20000;
    const auto m = phi_map(c, mlog, H);
    for (std::size_t n = 1; n <= m.completed_blocks; ++n) {
        double sum = 0, last = 0;
        std::size_t visits = 0;
        for (std::size_t j = 1; j <= H; ++j) {
            sum += c(static_cast<std::size_t>(m(j)));
            if (m(j) == static_cast<int>(n)) last = sum / mlog(++visits);
        }
        CHECK(m.ratio_at_horizon[n - 1] == doctest::Approx(last).epsilon(1e-12));
    }
}

TEST_CASE("phi_map with c_n = n grows blocks faster") {
    const auto m = phi_map([](std::size_t n) { return static_cast<double>(n); }, mlog, 1000000);
    CHECK(m.blocks[0] == 2);
    // s = 2: v = 2, need log(r+1) >= 8
    CHECK(static_cast<double>(m.blocks[1]) == std::ceil(std::exp(8.0) - 1.0));
    CHECK(m.completed_blocks == 2);
    REQUIRE(m.ratio_at_block_end[0].size() == 2);
    CHECK(m.ratio_at_block_end[0][1] < m.ratio_at_block_end[0][0]);
    CHECK(m.ratio_at_block_end[0][1] < 0.45);
}

TEST_CASE("phi_map errors") {
    CHECK_THROWS_AS(phi_map([](std::size_t) { return 1.0; }, [](std::size_t n) { return static_cast<double>(n); }, 1000),
                    HypothesisViolation);
    CHECK_THROWS_AS(phi_map([](std::size_t) { return 1.0; }, mlog, 50), InvalidInput);
    CHECK_THROWS_AS(phi_map([](std::size_t) { return -1.0; }, mlog, 100000), InvalidInput);
}

TEST_CASE("cyclic phi map") {
    const auto m = PhiMap::cyclic(4, 10);
    CHECK(m.assignments == std::vector<int>{1, 2, 3, 4, 1, 2, 3, 4, 1, 2});
    CHECK(m.count(1) == 3);
    CHECK(m.count(4) == 2);
    CHECK_THROWS_AS(PhiMap::cyclic(0, 4), InvalidInput);
}

TEST_CASE("gram_check examples") {
    const std::vector<ComplexVector> battery{ComplexVector({1.0, 2.0, -1.0}, 1), ComplexVector({0.5, 0.5}, 3)};
    SUBCASE("orthonormal basis") {
        std::vector<ComplexVector> a;
        for (std::size_t n = 1; n <= 100; ++n) a.push_back(ComplexVector::basis(1, 0, static_cast<long>(n)));
        const auto rep = gram_check(a, battery);
        CHECK(rep.r == 0);
        CHECK(rep.d == 1);
        CHECK(rep.d_stated == 1);
        CHECK(rep.gram_max_eig == doctest::Approx(1.0));
        CHECK(rep.score == 0);
        CHECK(rep.inv_sq_partial.back() == doctest::Approx(100));
        CHECK(rep.sum_divergent == Tri::yes);
        CHECK(rep.r_bounded == Tri::yes);
        CHECK(rep.hypotheses_hold);
    }
    SUBCASE("one vector repeated") {
        std::vector<ComplexVector> a(100, ComplexVector::basis(1, 0, 1));
        const auto rep = gram_check(a, battery);
        CHECK(rep.sum_divergent == Tri::yes);
        CHECK(rep.r == doctest::Approx(100.0 * 99.0 / 2.0));
        CHECK(rep.r_bounded == Tri::no);
        CHECK_FALSE(rep.hypotheses_hold);
        CHECK(rep.gram_max_eig == doctest::Approx(100.0));
        CHECK(rep.score == doctest::Approx(1.0));
    }
    SUBCASE("growing orthogonal vectors") {
        std::vector<ComplexVector> a;
        for (std::size_t n = 1; n <= 200; ++n)
            a.push_back(ComplexVector({std::sqrt(std::log(static_cast<double>(n) + 1.0))}, static_cast<long>(n)));
        const auto rep = gram_check(a, battery);
        double oracle = 0;
        for (std::size_t n = 1; n <= 200; ++n) oracle += 1.0 / std::log(static_cast<double>(n) + 1.0);
        CHECK(rep.inv_sq_partial.back() == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(rep.sum_divergent == Tri::yes);
        CHECK(rep.r == 0);
        CHECK(rep.score == 0);
        CHECK(rep.hypotheses_hold);
    }
    SUBCASE("empty battery") { CHECK(gram_check({ComplexVector({1.0})}, {}).score == 0); }
    SUBCASE("zero vector") {
        CHECK_THROWS_AS(gram_check({ComplexVector({1.0}), ComplexVector({0.0, 0.0})}, battery), InvalidInput);
    }
}

TEST_CASE("gram bound dominates the largest Gram eigenvalue") {
    std::mt19937_64 gen(42);
    for (int f = 0; f < 50; ++f) {
        std::vector<ComplexVector> a;
        const std::size_t M = 2 + static_cast<std::size_t>(f % 9), dim = 3 + static_cast<std::size_t>(f % 13);
        for (std::size_t i = 0; i < M; ++i) a.push_back(random_vector(gen, dim, 0));
        const auto rep = gram_check(a, {});
        // independent oracle: power iteration on the normalized Gram matrix
        Eigen::MatrixXcd gm(M, M);
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < M; ++j)
                gm(i, j) = inner(a[i], a[j]) / std::sqrt(inner(a[i], a[i]).real() * inner(a[j], a[j]).real());
        Eigen::VectorXcd v = Eigen::VectorXcd::Ones(M);
        double lam = 0;
        for (int it = 0; it < 2000; ++it) {
            v = gm * v;
            lam = v.norm();
            v /= lam;
        }
        CHECK(rep.gram_max_eig == doctest::Approx(lam).epsilon(1e-8));
        CHECK(rep.gram_max_eig <= rep.d + 1e-12);
    }
}

TEST_CASE("the constant 1 + sqrt(r/2) is exceeded by two unit vectors") {
    const double s = std::sqrt(0.75);
    const auto rep = gram_check({ComplexVector({1.0, 0.0}), ComplexVector({0.5, s})}, {});
    CHECK(rep.r == doctest::Approx(0.25));
    CHECK(rep.gram_max_eig == doctest::Approx(1.5));
    CHECK(rep.gram_max_eig > rep.d_stated);
    CHECK(rep.gram_max_eig <= rep.d);
}

TEST_CASE("weighted inner product is shift invariant on interior supports") {
    const auto inst = WHCInstance::chan_sanders(2, 128, 3);
    std::mt19937_64 gen(5);
    for (long off : {-40L, -3L, 0L, 2L, 30L}) {
        const auto x = random_vector(gen, 9, off), y = random_vector(gen, 9, off + 2);
        const cplx before = inst.inner(x, y);
        const cplx after = inst.inner(shift_apply(inst.w, x), shift_apply(inst.w, y));
        CHECK(std::abs(after - before) <= 1e-12 * std::abs(before) + 1e-300);
    }
    for (int k = 1; k <= 2; ++k) CHECK(inst.c(k) == doctest::Approx(g_norm(inst.r, inst.u(k, 0))));
}

TEST_CASE("u(k, n) agrees with repeated application of T and T^-1") {
    const auto inst = WHCInstance::chan_sanders(3, 256, 11);
    for (int k = 1; k <= 3; ++k) {
        ComplexVector fwd = inst.u(k, 0), bwd = inst.u(k, 0);
        for (long n = 1; n <= 40; ++n) {
            fwd = shift_apply(inst.w, fwd);
            bwd = shift_inverse(inst.w, bwd);
            const auto uf = inst.u(k, n), ub = inst.u(k, -n);
            CHECK(uf.first() == fwd.first());
            CHECK(max_abs_diff(uf, fwd) <= 1e-14 * std::max(1.0, lp_norm(fwd, INFINITY)));
            CHECK(max_abs_diff(ub, bwd) <= 1e-14 * std::max(1.0, lp_norm(bwd, INFINITY)));
        }
    }
    CHECK_THROWS_AS(inst.u(1, 300), NumericalFailure);
    CHECK_THROWS_AS(inst.u(4, 0), InvalidInput);
}

TEST_CASE("chan_sanders targets are rational and seeded") {
    const auto a = WHCInstance::chan_sanders(4, 64, 7), b = WHCInstance::chan_sanders(4, 64, 7);
    REQUIRE(a.K() == 4);
    CHECK(a.op_norm == 2.0);
    for (int k = 0; k < 4; ++k) {
        CHECK(a.targets[k].first() == -2);
        CHECK(a.targets[k].size() == 5);
        CHECK(max_abs_diff(a.targets[k], b.targets[k]) == 0);
        CHECK(lp_norm(a.targets[k], 2.0) > 0);
        for (const auto& v : a.targets[k].entries()) {
            bool rational = false;
            for (int q = 1; q <= 8 && !rational; ++q) rational = std::abs(v.real() * q - std::round(v.real() * q)) < 1e-12;
            CHECK(rational);
            CHECK(v.imag() == 0);
        }
    }
}

TEST_CASE("build_theta on the Chan-Sanders instance") {
    const auto inst = WHCInstance::chan_sanders(4, 4096, 0);
    const auto phi = PhiMap::cyclic(4, 6);
    const auto s = build_theta(inst, phi, 6);
    REQUIRE(s.theta.size() == 6);
    CHECK(s.theta[0] == 0);
    for (std::size_t j = 1; j < 6; ++j) CHECK(s.theta[j] > s.theta[j - 1]);
    CHECK(s.e5);
    CHECK(s.e6);
    CHECK(s.e7);
    // shifted supports are disjoint, so the pairings vanish exactly
    CHECK(s.e5_worst == 0);
    CHECK(s.e6_worst == 0);

    // greedy: the previous integer fails at least one inequality
    for (std::size_t j = 1; j < 6; ++j) {
        if (s.theta[j] - 1 == s.theta[j - 1]) continue;
        std::vector<long> t(s.theta.begin(), s.theta.begin() + static_cast<long>(j) + 1);
        t.back() -= 1;
        const auto v = verify_theta(inst, phi, t);
        CHECK_FALSE((v.e5 && v.e6 && v.e7));
    }
}

TEST_CASE("build_theta edge cases") {
    const auto inst = WHCInstance::chan_sanders(4, 4096, 0);
    SUBCASE("single stage") {
        const auto s = build_theta(inst, PhiMap::cyclic(4, 1), 1);
        CHECK(s.theta == std::vector<long>{0});
        CHECK((s.e5 && s.e6 && s.e7));
    }
    SUBCASE("window too small") {
        const auto small = WHCInstance::chan_sanders(4, 64, 0);
        CHECK_THROWS_AS(build_theta(small, PhiMap::cyclic(4, 20), 20), NumericalFailure);
    }
    SUBCASE("norm one") {
        WHCInstance flat(WeightSequence::constant(1.0, 256), inst.targets);
        CHECK_THROWS_AS(build_theta(flat, PhiMap::cyclic(4, 4), 4), HypothesisViolation);
    }
    SUBCASE("admissible set") {
        std::vector<std::size_t> evens;
        for (std::size_t n = 0; n <= 2000; n += 2) evens.push_back(n);
        WHCInstance even(inst.w, inst.targets, evens);
        const auto s = build_theta(even, PhiMap::cyclic(4, 6), 6);
        for (long t : s.theta) CHECK(t % 2 == 0);
        CHECK((s.e5 && s.e6 && s.e7));

        WHCInstance tiny(inst.w, inst.targets, {0, 1, 2, 3});
        CHECK_THROWS_AS(build_theta(tiny, PhiMap::cyclic(4, 4), 4), HypothesisViolation);
    }
    SUBCASE("phi outside the target range") {
        CHECK_THROWS_AS(build_theta(inst, PhiMap::cyclic(5, 6), 6), InvalidInput);
    }
}

TEST_CASE("assemble_and_decompose") {
    const auto inst = WHCInstance::chan_sanders(4, 4096, 0);
    const auto phi = PhiMap::cyclic(4, 8);
    const auto battery = functional_battery(5, -2, 2, 0);
    SUBCASE("eight stages") {
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 8), phi, battery);
        REQUIRE(tr.stages.size() == 8);
        CHECK(tr.b_bounds_hold);
        for (const auto& sd : tr.stages) {
            CHECK(sd.mismatch <= 1e-10);
            CHECK(sd.b_norm <= sd.b_bound);
            CHECK(sd.b_bound == std::ldexp(1.0, -static_cast<int>(sd.r)));
        }
        // u is the sum of the backward pieces
        ComplexVector oracle = ComplexVector::zeros(1);
        for (std::size_t j = 1; j <= 8; ++j) oracle = axpy(1.0, inst.u(phi(j), -tr.theta[j - 1]), oracle);
        CHECK(max_abs_diff(oracle, tr.u) == 0);
        // a_1 = 0 is excluded, later a_r enter the per-target Gram data
        CHECK(tr.gram.size() == 4);
        for (const auto& g : tr.gram) {
            CHECK(g.inv_sq_partial.size() >= 1);
            CHECK(g.score == 0);
        }
    }
    SUBCASE("one stage") {
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 1), phi);
        CHECK(max_abs_diff(tr.u, inst.u(1, 0)) == 0);
        CHECK(tr.stages[0].b_norm == 0);
        CHECK(tr.b_bounds_hold);
    }
}

TEST_CASE("weak_visit_report") {
    const auto inst = WHCInstance::chan_sanders(4, 4096, 0);
    const auto phi = PhiMap::cyclic(4, 8);
    SUBCASE("acceptance scale") {
        const auto battery = functional_battery(5, -2, 2, 1);
        for (const auto& y : battery) CHECK(lp_norm(y, 2.0) == doctest::Approx(1.0));
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 8), phi, battery);
        const auto errs = weak_visit_report(inst, tr, battery);
        REQUIRE(errs.size() == 4);
        for (const auto& e : errs) {
            CHECK(e.err < 0.1);
            REQUIRE(e.stage.has_value());
            CHECK(phi(*e.stage) == e.target);
        }
    }
    SUBCASE("own functional") {
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 6), phi);
        const ComplexVector y = inst.u(phi(1), 0);
        const auto errs = weak_visit_report(inst, tr, {y});
        CHECK(errs[0].err < 0.5);
    }
    SUBCASE("empty battery") {
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 4), phi);
        for (const auto& e : weak_visit_report(inst, tr, {})) CHECK(e.err == 0);
    }
    SUBCASE("unvisited target") {
        const auto tr = assemble_and_decompose(inst, build_theta(inst, phi, 2), phi);
        const auto errs = weak_visit_report(inst, tr, functional_battery(2, -2, 2, 0));
        CHECK(std::isinf(errs[3].err));
        CHECK_FALSE(errs[3].stage.has_value());
    }
}

TEST_CASE("slow_growth_search with q = 1 + log(1+x)") {
    const RateFn q = [](double x) { return 1.0 + std::log1p(x); };
    const auto tr = slow_growth_search(q, 3, 1u << 12);
    REQUIRE(tr.stages.size() == 3);
    REQUIRE(tr.dips.size() == 3);
    CHECK(tr.all_verified);
    for (std::size_t n = 0; n < 3; ++n) {
        const auto& st = tr.stages[n];
        CHECK(st.phi_l2 <= q(static_cast<double>(st.k)) / 4);
        if (n > 0) {
            CHECK(st.k > tr.stages[n - 1].k);
            CHECK(st.ls_residual <= st.ls_target);
        }
        CHECK(st.arc == doctest::Approx(1.0 / static_cast<double>(n + 1)));
        CHECK(st.arc_sup_g <= st.arc_target);
        CHECK(st.arc_target == doctest::Approx(std::exp2(1.0 / static_cast<double>(st.k))));
        const auto& d = tr.dips[n];
        CHECK(d.k == st.k);
        CHECK(d.norm + d.spill < q(static_cast<double>(d.k)));
        CHECK(d.norm == tr.orbit.norms[d.k]);
    }
    CHECK(tr.g_sup <= 2.0 + 1e-9);
    CHECK(tr.resolution_diagnostic < 1e-6);

    std::vector<std::size_t> probes;
    for (const auto& d : tr.dips) probes.push_back(d.k);
    const auto sp = superpoly_profile(tr.orbit, {1, 2, 3}, probes);
    for (const auto& pk : sp.per_k) CHECK(pk.probe_dips.size() == 3);
}

TEST_CASE("slow_growth_search edge cases") {
    const RateFn q = [](double x) { return 1.0 + std::log1p(x); };
    const auto one = slow_growth_search(q, 1, 1u << 10);
    CHECK(one.stages.size() == 1);
    CHECK(one.all_verified);
    CHECK(one.stages[0].functional_norm == doctest::Approx(1.0));

    CHECK_THROWS_AS(slow_growth_search([](double x) { return 10.0 - x / (1 + x); }, 2), InvalidInput);
    CHECK_THROWS_AS(slow_growth_search([](double x) { return std::exp2(2 * x); }, 2), InvalidInput);
    CHECK_THROWS_AS(slow_growth_search(q, 0), InvalidInput);
    CHECK_THROWS_AS(slow_growth_search(q, 2, 1000), InvalidInput);
}
