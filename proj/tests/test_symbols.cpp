#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "orbitlab/symbols.hpp"

using namespace orbitlab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

LogModulus sample(std::size_t G, const std::function<double(double)>& q, double phase = 0.0) {
    std::vector<double> v(G);
    double ub = -1e300;
    for (std::size_t k = 0; k < G; ++k) {
        v[k] = q(two_pi * (static_cast<double>(k) + phase) / static_cast<double>(G));
        ub = std::max(ub, v[k]);
    }
    return LogModulus(v, ub, phase);
}

}  // namespace

TEST_CASE("boundary_eval examples") {
    auto c = boundary_eval(SymbolSeries::constant(2.0), 4);
    for (auto& v : c) CHECK(std::abs(v - 2.0) < 1e-15);

    auto g = boundary_eval(SymbolSeries::polynomial({2.0, 1.0}), 4);
    const cplx i(0, 1);
    CHECK(std::abs(g[0] - 3.0) < 1e-15);
    CHECK(std::abs(g[1] - (2.0 + i)) < 1e-15);
    CHECK(std::abs(g[2] - 1.0) < 1e-15);
    CHECK(std::abs(g[3] - (2.0 - i)) < 1e-15);

    auto z2 = boundary_eval(SymbolSeries::polynomial({0.0, 0.0, 1.0}), 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(z2[k] - std::polar(1.0, 2.0 * two_pi * k / 8.0)) < 1e-14);

    CHECK_THROWS_AS(boundary_eval(SymbolSeries::polynomial({1.0, 1.0, 1.0}), 4), InvalidInput);
    CHECK_THROWS_AS(boundary_eval(SymbolSeries::polynomial({1.0}), 6), InvalidInput);
}

TEST_CASE("boundary_eval agrees with Horner evaluation") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<cplx> c(37);
    for (auto& v : c) v = {nd(rng), nd(rng)};
    SymbolSeries g(c, 0.0, "random");
    auto b = boundary_eval(g, 128);
    double err = 0;
    for (std::size_t k = 0; k < 128; ++k) err = std::max(err, std::abs(b[k] - g.eval(std::polar(1.0, two_pi * k / 128.0))));
    CHECK(err < 1e-12);
}

TEST_CASE("outer function of q = 0 is 1") {
    auto h = outer_from_log_modulus(LogModulus(std::vector<double>(64, 0.0), 0.0));
    CHECK(h.taylor.size() == 1);
    CHECK(std::abs(h.taylor[0] - 1.0) < 1e-15);
}

TEST_CASE("outer function recovers (3+z)/2 from its modulus") {
    auto q = sample(1u << 12, [](double t) { return std::log(std::abs(3.0 + std::polar(1.0, t)) / 2.0); });
    auto h = outer_from_log_modulus(q);
    REQUIRE(h.taylor.size() >= 2);
    CHECK(std::abs(h.taylor[0] - 1.5) < 1e-8);
    CHECK(std::abs(h.taylor[1] - 0.5) < 1e-8);
    for (std::size_t m = 2; m < h.taylor.size(); ++m) CHECK(std::abs(h.taylor[m]) < 1e-8);
    CHECK(h.tail_bound < 1e-8);
}

TEST_CASE("outer function modulus converges under grid refinement") {
    auto qf = [](double t) { return std::pow(std::abs(std::sin(t)), 1.5); };
    auto err_at = [&](std::size_t G) {
        auto h = outer_from_log_modulus(sample(G, qf), G / 2 - 1);
        const std::size_t E = 1u << 14;
        auto v = boundary_eval(h, E);
        double e = 0;
        for (std::size_t k = 0; k < E; ++k) e = std::max(e, std::abs(std::log(std::abs(v[k])) - qf(two_pi * k / double(E))));
        return e;
    };
    const double e1 = err_at(1u << 9), e2 = err_at(1u << 10);
    CHECK(e2 < e1);
    CHECK(e2 / e1 <= 0.6);
}

TEST_CASE("outer functions are zero-free on the radial grid") {
    auto q = sample(1u << 10, [](double t) { return 0.3 * std::cos(3 * t) - 0.2 * std::sin(t) + std::cos(t) * std::cos(t); });
    auto h = outer_from_log_modulus(q);
    CHECK(h.taylor[0].real() > 0);
    CHECK(std::abs(h.taylor[0].imag()) < 1e-14);
    for (double r : {0.0, 0.5, 0.9, 0.99}) {
        auto v = eval_on_circle(h.taylor, r, 1024);
        double mn = 1e300;
        for (auto& z : v) mn = std::min(mn, std::abs(z));
        CHECK(mn > 0.1);
    }
}

TEST_CASE("outer_from_log_modulus rejects unbounded samples") {
    std::vector<double> v(16, 0.0);
    v[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(LogModulus(v, 0.0), InvalidInput);
    v[3] = std::nan("");
    CHECK_THROWS_AS(LogModulus(v, 0.0), InvalidInput);
    CHECK_THROWS_AS(LogModulus(std::vector<double>(12, 0.0), 0.0), InvalidInput);
}

TEST_CASE("class_check examples") {
    auto z = class_check(SymbolSeries::polynomial({0.0, 1.0}));
    CHECK(z.in_E == Tri::no);
    CHECK(z.interior_min_modulus < 1e-12);

    auto cs = class_check(SymbolSeries::polynomial({1.5, 0.5}));
    CHECK(cs.in_E == Tri::yes);
    CHECK(cs.unit_level_measure_estimate < 1e-3);
    CHECK(cs.log_gap_finite);
    CHECK(std::isfinite(cs.log_gap_integral));
    CHECK(cs.boundary_min_modulus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cs.boundary_max_modulus == doctest::Approx(2.0).epsilon(1e-12));
    // |g| = 1 only at z = -1 where g = 1
    CHECK(cs.in_E1 == Tri::yes);
    CHECK(cs.in_E0 == Tri::no);

    auto opz = class_check(SymbolSeries::polynomial({1.0, 1.0}));
    CHECK(opz.in_E == Tri::no);
    CHECK(opz.interior_min_modulus <= 0.5 + 1e-12);

    // 3/2 - z/2 takes modulus 1 only at z = 1
    auto e0 = class_check(SymbolSeries::polynomial({1.5, -0.5}));
    CHECK(e0.in_E0 == Tri::yes);
}

TEST_CASE("log-gap integral of (3+z)/2 matches an independent quadrature") {
    // |g|-1 = 3(1+cos t)/(sqrt(10+6cos t)+2); integrate log of that with a fine shifted Simpson-free sum
    const std::size_t G = 1u << 20;
    double s = 0;
    for (std::size_t k = 0; k < G; ++k) {
        const double t = two_pi * (k + 0.5) / G;
        s += std::log(3.0 * (1.0 + std::cos(t)) / (std::sqrt(10.0 + 6.0 * std::cos(t)) + 2.0));
    }
    s /= G;
    auto cs = class_check(SymbolSeries::polynomial({1.5, 0.5}));
    CHECK(cs.log_gap_integral == doctest::Approx(s).epsilon(1e-3));
}

TEST_CASE("refine_integral flags a non-integrable singularity") {
    auto div = refine_integral([](double t) { return -1.0 / std::abs(std::sin(t / 2)); }, 256, 4);
    CHECK(div.divergent);
    auto conv = refine_integral([](double t) { return std::log(std::abs(std::sin(t / 2))); }, 256, 4);
    CHECK_FALSE(conv.divergent);
    CHECK(conv.value == doctest::Approx(-std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("class_check is invariant under unimodular rotation") {
    auto a = class_check(SymbolSeries::polynomial({1.5, 0.5}));
    const cplx u = std::polar(1.0, 0.7);
    auto b = class_check(SymbolSeries::polynomial({1.5 * u, 0.5 * u}));
    CHECK(a.interior_min_modulus == doctest::Approx(b.interior_min_modulus).epsilon(1e-12));
    CHECK(a.boundary_min_modulus == doctest::Approx(b.boundary_min_modulus).epsilon(1e-12));
    CHECK(a.boundary_max_modulus == doctest::Approx(b.boundary_max_modulus).epsilon(1e-12));
    CHECK(a.unit_level_measure_estimate == b.unit_level_measure_estimate);
    CHECK(a.log_gap_integral == doctest::Approx(b.log_gap_integral).epsilon(1e-10));
}

TEST_CASE("cap_function examples") {
    auto one = cap_function(SymbolSeries::constant(2.0));
    CHECK(one.taylor.size() == 1);
    CHECK(std::abs(one.taylor[0] - 1.0) < 1e-14);

    auto g = SymbolSeries::polynomial({1.5, 0.5});
    auto h = cap_function(g);
    const std::size_t E = 1u << 14;
    auto hv = eval_on_circle(h.taylor, 1.0, E), gv = eval_on_circle(g.taylor, 1.0, E);
    double excess = -1, dev = 0;
    for (std::size_t k = 0; k < E; ++k) {
        excess = std::max(excess, std::abs(hv[k]) - (std::abs(gv[k]) - 1.0));
        dev = std::max(dev, std::abs(std::abs(hv[k]) - (std::abs(gv[k]) - 1.0)));
    }
    CHECK(excess <= 1e-6);
    CHECK(dev <= 1e-6);
    CHECK(h.taylor[0].real() > 0);

    CHECK_THROWS_AS(cap_function(SymbolSeries::constant(1.0)), HypothesisViolation);
    CHECK_THROWS_AS(cap_function(SymbolSeries::constant(std::polar(1.0, 2.0))), HypothesisViolation);
}

TEST_CASE("smooth_bump_modulus constraints") {
    const std::size_t G = 1u << 14;
    auto check = [&](const std::vector<double>& arcs, const std::vector<double>& targets) {
        auto lm = smooth_bump_modulus(arcs, targets, G);
        CHECK(lm.samples[0] == 0.0);
        for (std::size_t k = 0; k < G; ++k) {
            const double p = std::exp(lm.samples[k]);
            double t = two_pi * k / double(G);
            if (t > std::numbers::pi) t -= two_pi;
            CHECK(p <= 2.0);
            if (k > 0) CHECK(p > 1.0);
            for (std::size_t n = 0; n < arcs.size(); ++n)
                if (std::abs(t) <= arcs[n]) CHECK(p <= targets[n]);
        }
    };
    check({1.0}, {2.0});
    check({1.0, 0.5, 1.0 / 3}, {2.0, 2.0, 2.0});
    check({1.0, 0.5, 1.0 / 3}, {std::pow(2.0, 1.0 / 4), std::pow(2.0, 1.0 / 16), std::pow(2.0, 1.0 / 64)});
    CHECK_THROWS_AS(smooth_bump_modulus({1.0}, {0.9}), InvalidInput);
}
