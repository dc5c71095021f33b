#include "orbitlab/fourier_measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "orbitlab/fft.hpp"
#include "orbitlab/parse.hpp"

namespace orbitlab {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;
}

DensityPart make_density(std::vector<cplx> samples) {
    if (samples.size() < 2 || !fft::is_pow2(samples.size()))
        throw InvalidInput("density: sample count must be a power of two >= 2");
    for (const auto& s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw InvalidInput("density: non-finite sample");
    auto c = fft::backward(samples);
    const double G = static_cast<double>(samples.size());
    for (auto& v : c) v /= G;
    return DensityPart{std::move(samples), std::move(c)};
}

DensityPart load_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open density file " + path);
    std::vector<cplx> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        try {
            v.emplace_back(parse_real(f[0]), f.size() > 1 ? parse_real(f[1]) : 0.0);
        } catch (const InvalidInput&) {
            if (v.empty() && lineno == 1) continue;  // header row
            throw InvalidInput(path + ": line " + std::to_string(lineno) + " is not numeric");
        }
    }
    return make_density(std::move(v));
}

SelfSimilarPart SelfSimilarPart::cantor(double ratio, int depth) {
    if (!(ratio > 0 && ratio < 0.5)) throw InvalidInput("cantor: ratio must lie in (0, 1/2)");
    if (depth < 1) throw InvalidInput("cantor: depth must be positive");
    return SelfSimilarPart{ratio, {0.0, 1.0 - ratio}, {0.5, 0.5}, depth, 1.0};
}

CircleMeasure CircleMeasure::delta(double position, cplx mass) {
    CircleMeasure m;
    m.atoms.push_back({position, mass});
    m.label = "atom";
    return m;
}

CircleMeasure CircleMeasure::arc(double halfwidth, double center) {
    if (!(halfwidth > 0 && halfwidth <= std::numbers::pi)) throw InvalidInput("arc: half-width must lie in (0, pi]");
    CircleMeasure m;
    m.arcs.push_back({halfwidth, center, 1.0});
    m.label = "arc";
    return m;
}

CircleMeasure CircleMeasure::normalized_lebesgue() {
    CircleMeasure m;
    m.lebesgue = 1.0;
    m.label = "lebesgue";
    return m;
}

CircleMeasure combine(cplx a, const CircleMeasure& mu, cplx b, const CircleMeasure& nu) {
    if (a.imag() != 0 || b.imag() != 0) {
        // complex scaling only acts on atoms and densities
        if (!mu.arcs.empty() || !nu.arcs.empty() || !mu.singular.empty() || !nu.singular.empty() || mu.lebesgue != 0 ||
            nu.lebesgue != 0)
            throw InvalidInput("combine: complex weights need atoms or densities only");
    }
    CircleMeasure out;
    auto add = [&](cplx s, const CircleMeasure& m) {
        for (auto at : m.atoms) out.atoms.push_back({at.position, s * at.mass});
        for (auto ar : m.arcs) out.arcs.push_back({ar.halfwidth, ar.center, s.real() * ar.mass});
        out.lebesgue += s.real() * m.lebesgue;
        for (const auto& d : m.densities) {
            auto samples = d.samples;
            for (auto& v : samples) v *= s;
            out.densities.push_back(make_density(std::move(samples)));
        }
        for (auto ss : m.singular) {
            ss.mass *= s.real();
            out.singular.push_back(ss);
        }
    };
    add(a, mu);
    add(b, nu);
    out.label = mu.label + "+" + nu.label;
    return out;
}

namespace {

cplx self_similar_coeff(const SelfSimilarPart& s, long n) {
    // hat nu(n) = prod_l sum_j w_j e^{2 pi i n r^l b_j}, stopped once the remaining factors are within 1e-14 of 1
    double bmax = 0;
    for (double b : s.offsets) bmax = std::max(bmax, std::fabs(b));
    cplx prod = 1.0;
    double scale = static_cast<double>(n);
    for (int l = 0; l < s.depth; ++l) {
        if (two_pi * std::fabs(scale) * bmax / (1 - s.ratio) < 1e-14) break;
        cplx f = 0;
        for (std::size_t j = 0; j < s.offsets.size(); ++j) f += s.weights[j] * std::polar(1.0, two_pi * scale * s.offsets[j]);
        prod *= f;
        scale *= s.ratio;
    }
    return s.mass * prod;
}

bool starts_with_keyword(const std::string& s) {
    for (const char* kw : {"atom:", "arc:", "lebesgue", "cantor:", "density:"})
        if (s.rfind(kw, 0) == 0) return true;
    return false;
}

CircleMeasure parse_part(const std::string& part) {
    const std::string p = trim(part);
    if (p == "lebesgue") return CircleMeasure::normalized_lebesgue();
    const auto colon = p.find(':');
    if (colon == std::string::npos) throw InvalidInput("measure: unknown component '" + p + "'");
    const std::string kind = p.substr(0, colon), body = p.substr(colon + 1);
    if (kind == "atom") {
        CircleMeasure m;
        for (const auto& item : split(body, ';')) {
            auto f = split(item, ',');
            if (f.size() != 2) throw InvalidInput("measure: atom needs 'position,mass', got '" + item + "'");
            m.atoms.push_back({parse_real(f[0]), parse_complex(f[1])});
        }
        m.label = p;
        return m;
    }
    if (kind == "arc") {
        auto f = split(body, '@');
        auto m = CircleMeasure::arc(parse_real(f[0]), f.size() > 1 ? parse_real(f[1]) : 0.0);
        m.label = p;
        return m;
    }
    if (kind == "cantor") {
        auto f = split(body, ',');
        if (f.size() != 2) throw InvalidInput("measure: cantor needs 'ratio,depth'");
        CircleMeasure m;
        m.singular.push_back(SelfSimilarPart::cantor(parse_real(f[0]), static_cast<int>(parse_real(f[1]))));
        m.label = p;
        return m;
    }
    if (kind == "density") {
        CircleMeasure m;
        m.densities.push_back(load_density_csv(body));
        m.label = p;
        return m;
    }
    throw InvalidInput("measure: unknown component '" + kind + "'");
}

}  // namespace

CircleMeasure parse_measure(const std::string& spec) {
    // '+' separates components only when a keyword follows, so "1+2i" masses stay intact
    std::vector<std::string> parts;
    std::string cur;
    const std::string s = trim(spec);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+' && starts_with_keyword(trim(s.substr(i + 1)))) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += s[i];
        }
    }
    parts.push_back(cur);
    CircleMeasure out;
    bool first = true;
    for (const auto& p : parts) {
        auto m = parse_part(p);
        out = first ? m : combine(1.0, out, 1.0, m);
        first = false;
    }
    out.label = s;
    return out;
}

cplx fourier_coeff(const CircleMeasure& mu, long n) {
    cplx v = 0;
    const double nd = static_cast<double>(n);
    for (const auto& a : mu.atoms) v += a.mass * std::polar(1.0, nd * a.position);
    for (const auto& a : mu.arcs) {
        const double x = nd * a.halfwidth;
        const double sinc = n == 0 ? 1.0 : std::sin(x) / x;
        v += a.mass * sinc * std::polar(1.0, nd * a.center);
    }
    if (n == 0) v += mu.lebesgue;
    for (const auto& d : mu.densities) {
        const long G = static_cast<long>(d.samples.size());
        if (std::labs(n) > G / 2) {
            std::ostringstream os;
            os << "fourier_coeff: |n| = " << std::labs(n) << " exceeds half the density grid (" << G / 2 << ")";
            throw InvalidInput(os.str());
        }
        v += d.coeffs[static_cast<std::size_t>(((n % G) + G) % G)];
    }
    for (const auto& s : mu.singular) v += self_similar_coeff(s, n);
    return v;
}

std::vector<double> cesaro_profile(const CircleMeasure& mu, std::size_t N) {
    if (N < 1) throw InvalidInput("cesaro_profile: N must be at least 1");
    std::vector<double> means(N + 1);
    long double acc = 0;
    for (std::size_t n = 0; n <= N; ++n) {
        acc += std::norm(fourier_coeff(mu, static_cast<long>(n)));
        means[n] = static_cast<double>(acc / static_cast<long double>(n + 1));
    }
    return means;
}

std::vector<double> density_zero_profile(const CircleMeasure& mu, double eps, std::size_t N) {
    if (!(eps > 0)) throw InvalidInput("density_zero_profile: eps must be positive");
    std::vector<double> d(N + 1, 0.0);
    std::size_t count = 0;
    for (std::size_t n = 1; n <= N; ++n) {
        if (std::abs(fourier_coeff(mu, static_cast<long>(n))) >= eps) ++count;
        d[n] = static_cast<double>(count) / static_cast<double>(n);
    }
    return d;
}

NullSubsequence select_null_subsequence(const std::vector<CircleMeasure>& measures, std::size_t L, std::size_t N) {
    if (measures.empty()) throw InvalidInput("select_null_subsequence: no measures");
    NullSubsequence out;
    for (std::size_t j = 0; j < measures.size(); ++j)
        if (measures[j].has_atoms()) out.flagged.push_back(j);
    std::size_t m = 0;
    for (std::size_t k = 1; k <= L; ++k) {
        const std::size_t J = std::min(k, measures.size());
        const double thr = 1.0 / static_cast<double>(k);
        bool found = false;
        while (++m <= N) {
            double worst = 0;
            for (std::size_t j = 0; j < J && worst < thr; ++j)
                worst = std::max(worst, std::abs(fourier_coeff(measures[j], static_cast<long>(m))));
            if (worst < thr) {
                out.indices.push_back(m);
                out.max_coeff.push_back(worst);
                found = true;
                break;
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "select_null_subsequence: horizon " << N << " exhausted at k = " << k;
            throw HypothesisViolation(os.str());
        }
    }
    return out;
}

}  // namespace orbitlab
