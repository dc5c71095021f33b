#include "orbitlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "orbitlab/error.hpp"
#include "orbitlab/fourier_measures.hpp"
#include "orbitlab/orbit_lab.hpp"
#include "orbitlab/parse.hpp"

namespace orbitlab::cli {

namespace {

std::string at_position(std::size_t pos, const std::string& what) {
    return "syntax error at position " + std::to_string(pos) + ": " + what;
}

// comma list starting at text[start], each item parsed as complex, errors carry the item position
std::vector<cplx> complex_list(const std::string& text, std::size_t start) {
    std::vector<cplx> out;
    std::size_t pos = start;
    for (const auto& item : split(text.substr(start), ',')) {
        try {
            out.push_back(parse_complex(item));
        } catch (const InvalidInput&) {
            throw InvalidInput(at_position(pos, "bad coefficient '" + item + "'"));
        }
        pos += item.size() + 1;
    }
    return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

json complex_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json record(const std::string& name, const std::string& verdict, json payload) {
    return json{{"name", name}, {"anchor", anchor(name)}, {"verdict", verdict}, {"payload", std::move(payload)}};
}

const char* pass_fail(bool ok) { return ok ? "pass" : "fail"; }

ComplexVector kernel_vector(cplx w, std::size_t N) {
    std::vector<cplx> e(N);
    cplx p = 1.0;
    for (auto& v : e) v = p, p *= std::conj(w);
    return ComplexVector(std::move(e));
}

std::vector<cplx> read_complex_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open vector file " + path);
    std::vector<cplx> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        try {
            if (cells.size() == 1) out.push_back(parse_complex(cells[0]));
            else if (cells.size() == 2) out.emplace_back(parse_real(cells[0]), parse_real(cells[1]));
            else throw InvalidInput("too many columns");
        } catch (const InvalidInput&) {
            if (lineno == 1 && out.empty()) continue;  // header row
            throw InvalidInput(path + ": line " + std::to_string(lineno) + " is not a complex entry");
        }
    }
    return out;
}

// smallest N with |w|^N (sup|g| / |g(w)|)^H below 1e-16 for kernel starts, else 256
std::size_t auto_dim(const SymbolSeries& g, const std::string& xs, std::size_t H) {
    if (xs.rfind("kernel:", 0) != 0) return 256;
    const cplx w = parse_complex(xs.substr(7));
    const double rw = std::abs(w);
    if (!(rw < 1)) throw InvalidInput("kernel point must lie in the open unit disk");
    if (rw == 0) return 256;
    const double gw = std::abs(g.eval(w));
    const double growth = gw > 0 ? std::max(0.0, std::log(g.coeff_l1() / gw)) : 50.0;
    const double n = (std::log(1e-16) - static_cast<double>(H) * growth) / std::log(rw);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(n)), 256, std::size_t{1} << 16);
}

using Params = json;

long get_int(const Params& p, const std::string& k) { return p.at(k).get<long>(); }
double get_real(const Params& p, const std::string& k) { return p.at(k).get<double>(); }
std::string get_text(const Params& p, const std::string& k) { return p.at(k).get<std::string>(); }
std::vector<std::string> get_list(const Params& p, const std::string& k) { return p.at(k).get<std::vector<std::string>>(); }

std::size_t get_size(const Params& p, const std::string& k, long min = 1) {
    const long v = get_int(p, k);
    if (v < min) throw InvalidInput("--" + k + " must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

struct Outcome {
    json records = json::array();
};

// ---- subcommands ----

void run_taylor(const Params& p, std::uint64_t, Outcome& out) {
    const int k = static_cast<int>(get_size(p, "k", 0));
    const double c = get_real(p, "c");
    const std::size_t n_max = get_size(p, "n-max");
    const auto tbl = taylor_norms(k, c, n_max);
    const auto a = taylor_coefficients(k, c, 1, 8);
    out.records.push_back(record("taylor-coefficients", "evidence",
                                 {{"n", 1}, {"a", numbers(a)}, {"N1", number(tbl.rows.front().N)}}));
    json rows = json::array();
    bool ok = std::isfinite(tbl.A);
    for (const auto& r : tbl.rows) {
        json row{{"n", r.n}, {"N", number(r.N)}, {"tail_bound", number(r.tail_bound)}};
        if (r.crosscheck_error) {
            row["crosscheck_error"] = number(*r.crosscheck_error);
            ok = ok && *r.crosscheck_error <= 1e-8;
        }
        rows.push_back(row);
    }
    out.records.push_back(record("taylor-norms", pass_fail(ok),
                                 {{"k", k}, {"c", c}, {"n_max", n_max}, {"rows", rows}, {"A", number(tbl.A)},
                                  {"fitted_slope", number(tbl.fitted_slope)}}));
}

void run_orbit(const Params& p, std::uint64_t seed, Outcome& out) {
    const auto spec = parse_symbol(get_text(p, "symbol"));
    if (!std::holds_alternative<SymbolSeries>(spec)) throw InvalidInput("orbit: tridiagonal symbols are handled by toeplitz-check");
    const SymbolSeries g = std::get<SymbolSeries>(spec);
    const std::size_t H = get_size(p, "horizon", 0);
    const std::string xs = get_text(p, "x"), precision = get_text(p, "precision");
    const std::size_t N = get_int(p, "dim") == 0 ? auto_dim(g, xs, H) : get_size(p, "dim");
    const std::string flavor_name = get_text(p, "flavor");
    if (flavor_name != "analytic" && flavor_name != "coanalytic") throw InvalidInput("--flavor must be analytic or coanalytic");
    const Flavor flavor = flavor_name == "analytic" ? Flavor::analytic : Flavor::coanalytic;
    if (precision != "auto" && precision != "double" && precision != "mp") throw InvalidInput("--precision must be auto, double or mp");
    const ComplexVector x = parse_vector(xs, N, seed);
    const auto T = toeplitz_operator(build(g, N, flavor));

    const bool mp_ok = flavor == Flavor::coanalytic && g.is_polynomial();
    if (precision == "mp" && !mp_ok) throw InvalidInput("--precision mp needs a polynomial symbol and the coanalytic flavor");
    OrbitProfile prof;
    if (mp_ok && precision != "double" && xs.rfind("kernel:", 0) == 0)
        prof = iterate_kernel_orbit_mp(g, parse_complex(xs.substr(7)), N, H);
    else if (precision == "mp")
        prof = iterate_orbit_mp(g, x, H);
    else
        prof = iterate_orbit(*T, x, H, xs);
    prof.vector_label = xs;
    out.records.push_back(record("orbit-profile", "evidence",
                                 {{"operator", prof.operator_label}, {"vector", xs}, {"horizon", H}, {"dim", N},
                                  {"norms", numbers(prof.norms)}, {"spill_bound", number(prof.spill_bound)},
                                  {"precision_bits", prof.precision_bits}}));
    if (const std::string csv = get_text(p, "csv"); !csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw InvalidInput("cannot write " + csv);
        f << prof.to_csv();
    }

    for (const auto& check : get_list(p, "check")) {
        const auto colon = check.find(':');
        const std::string kind = check.substr(0, colon), arg = colon == std::string::npos ? "" : check.substr(colon + 1);
        if (kind == "superpoly") {
            std::vector<double> ks;
            for (const auto& s : split(arg.empty() ? "1" : arg, ',')) ks.push_back(parse_real(s));
            const auto sp = superpoly_profile(prof, ks);
            json per = json::array();
            for (const auto& r : sp.per_k)
                per.push_back({{"k", r.k}, {"argmin", r.argmin}, {"tail_monotone", r.tail_monotone}, {"dips", r.dips}});
            out.records.push_back(record("superpoly", "evidence", {{"per_k", per}}));
        } else if (kind == "summability") {
            const double c = arg.empty() ? 2.0 : parse_real(arg);
            const auto s = summability_certificate(prof, c);
            out.records.push_back(record("summability", s.verdict == "summable (certified)" ? "pass" : "evidence",
                                         {{"c", c}, {"verdict", s.verdict}, {"partial_sum", number(s.partial_sums.back())},
                                          {"fitted_term_slope", number(s.fitted_term_slope)}}));
        } else if (kind == "ball") {
            auto vs = orbit_vectors(*T, x, H);
            double sum = 0;
            for (const auto& v : vs) sum += std::pow(lp_norm(v), -2);
            for (auto& v : vs)
                for (auto& e : v.entries()) e *= std::sqrt(sum);
            const auto b = ball_witness_search(vs, seed);
            out.records.push_back(record("ball-witness", b.success ? "pass" : "evidence",
                                         {{"margin", number(b.margin)}, {"scale", number(std::sqrt(sum))}}));
        } else if (kind == "growth") {
            const SymbolSeries h = arg == "cap" ? cap_function(g) : parse_series(arg);
            const auto S = toeplitz_operator(build(h, N, flavor));
            const auto r = growth_bound(*T, *S, x, H);
            out.records.push_back(record("growth-bound", r.verdict,
                                         {{"premise_holds", r.premise_holds}, {"premise_min_eig", number(r.premise_min_eig)},
                                          {"commutator_norm", number(r.commutator_norm)}, {"tol", number(r.tol)},
                                          {"violations", r.violations}}));
        } else {
            throw InvalidInput("unknown orbit check '" + check + "'");
        }
    }
}

void run_toeplitz(const Params& p, std::uint64_t, Outcome& out) {
    const auto spec = parse_symbol(get_text(p, "symbol"));
    const std::size_t N = get_size(p, "dim");
    std::vector<std::string> checks = get_list(p, "check");
    std::vector<SymbolSeries> hs;
    for (const auto& h : get_list(p, "h-symbols")) hs.push_back(parse_series(h));

    if (const auto* t = std::get_if<Tridiag>(&spec)) {
        if (checks.empty()) checks = {"hc", "hyponormal", "eigen"};
        for (const auto& c : checks) {
            if (c == "hc") {
                const auto r = hypercyclicity_classify(*t);
                out.records.push_back(record("hypercyclicity", "evidence",
                                             {{"verdict", to_string(r.verdict)}, {"min_modulus", number(r.min_modulus)},
                                              {"max_modulus", number(r.max_modulus)}, {"reason", r.reason}}));
            } else if (c == "hyponormal") {
                const auto r = hyponormality_check(*t, N);
                out.records.push_back(record("hyponormality", pass_fail(r.deviation <= r.tol),
                                             {{"min_eig", number(r.min_eig)}, {"tol", number(r.tol)},
                                              {"hyponormal", r.min_eig >= -r.tol},
                                              {"deviation_from_predicted", number(r.deviation)}}));
            } else if (c == "eigen") {
                const auto r = tridiag_eigen(*t, parse_complex(get_text(p, "z")));
                out.records.push_back(record("tridiagonal-eigenpair", pass_fail(r.residual <= 1e-10),
                                             {{"lambda", complex_json(r.lambda)}, {"residual", number(r.residual)},
                                              {"residual_literal", number(r.residual_literal)},
                                              {"degenerate", r.degenerate}}));
            } else {
                throw InvalidInput("check '" + c + "' is not available for tridiagonal symbols");
            }
        }
        return;
    }
    const SymbolSeries& g = std::get<SymbolSeries>(spec);
    if (checks.empty()) {
        checks = {"kernel", "class", "hyponormal", "hc"};
        if (!hs.empty()) checks.insert(checks.end(), {"dominance", "positivity"});
    }
    for (const auto& c : checks) {
        if (c == "kernel") {
            const cplx w = parse_complex(get_text(p, "w"));
            const auto r = kernel_eigencheck(g, w, N);
            out.records.push_back(record("kernel-eigenvector", pass_fail(r.residual <= r.bound),
                                         {{"w", complex_json(w)}, {"eigenvalue", complex_json(r.eigenvalue)},
                                          {"residual", number(r.residual)}, {"bound", number(r.bound)}}));
        } else if (c == "class") {
            const auto r = class_check(g);
            out.records.push_back(record("symbol-class", "evidence",
                                         {{"in_E", to_string(r.in_E)}, {"in_E0", to_string(r.in_E0)},
                                          {"in_E1", to_string(r.in_E1)}, {"interior_min_modulus", number(r.interior_min_modulus)},
                                          {"boundary_min_modulus", number(r.boundary_min_modulus)},
                                          {"boundary_max_modulus", number(r.boundary_max_modulus)},
                                          {"log_gap_integral", number(r.log_gap_integral)},
                                          {"log_gap_finite", r.log_gap_finite}}));
        } else if (c == "hyponormal") {
            const auto r = hyponormality_check(g, N);
            out.records.push_back(record("hyponormality", pass_fail(r.min_eig >= -r.tol),
                                         {{"min_eig", number(r.min_eig)}, {"tol", number(r.tol)}}));
        } else if (c == "hc") {
            const auto r = hypercyclicity_classify(g);
            out.records.push_back(record("hypercyclicity", "evidence",
                                         {{"verdict", to_string(r.verdict)}, {"min_modulus", number(r.min_modulus)},
                                          {"max_modulus", number(r.max_modulus)}, {"reason", r.reason}}));
        } else if (c == "dominance") {
            if (hs.empty()) throw InvalidInput("dominance needs at least one --h-symbols entry");
            const auto r = dominance_check(hs, g, N);
            out.records.push_back(record("dominance", !r.orderings_agree ? "fail" : r.dominated ? "pass" : "evidence",
                                         {{"min_eig_star_right", number(r.min_eig_star_right)},
                                          {"min_eig_star_left", number(r.min_eig_star_left)}, {"tol", number(r.tol)},
                                          {"dominated", r.dominated}, {"orderings_agree", r.orderings_agree}}));
        } else if (c == "positivity") {
            if (hs.empty()) throw InvalidInput("positivity needs at least one --h-symbols entry");
            const auto r = positivity_equiv(hs, {g}, N);
            out.records.push_back(record("positivity", r.verdict,
                                         {{"min_eig", number(r.min_eig)}, {"tol", number(r.tol)}, {"H_min", number(r.H_min)},
                                          {"H_nonnegative", r.H_nonnegative}}));
        } else {
            throw InvalidInput("unknown toeplitz check '" + c + "'");
        }
    }
}

void run_shift(const Params& p, std::uint64_t, Outcome& out) {
    const auto w = parse_weights(get_text(p, "weights"), static_cast<long>(get_size(p, "window")), get_real(p, "p"));
    const auto v = classify_bws(w);
    out.records.push_back(record("shift-classification", "evidence",
                                 {{"weights", w.label}, {"r_bounded", to_string(v.r_bounded)},
                                  {"forward_liminf_zero", to_string(v.forward_liminf_zero)},
                                  {"backward_liminf_positive", to_string(v.backward_liminf_positive)},
                                  {"whc_candidate", to_string(v.whc_candidate)},
                                  {"norm_hypercyclic", to_string(v.norm_hypercyclic)}, {"log_r_max", number(v.log_r_max)},
                                  {"evidence", v.evidence}}));
}

json decade_samples(const std::vector<double>& prof) {
    json s = json::object();
    for (std::size_t n = 1; n < prof.size(); n *= 10) s[std::to_string(n)] = number(prof[n]);
    s[std::to_string(prof.size() - 1)] = number(prof.back());
    return s;
}

void run_cesaro(const Params& p, std::uint64_t, Outcome& out) {
    const auto mu = parse_measure(get_text(p, "measure"));
    const std::size_t n = get_size(p, "n", 0);
    const auto prof = cesaro_profile(mu, n);
    out.records.push_back(record("cesaro-means", "evidence",
                                 {{"n", n}, {"mean", number(prof.back())}, {"samples", decade_samples(prof)},
                                  {"has_atoms", mu.has_atoms()}}));
}

void run_density(const Params& p, std::uint64_t, Outcome& out) {
    const auto mu = parse_measure(get_text(p, "measure"));
    const std::size_t n = get_size(p, "n");
    const auto prof = density_zero_profile(mu, get_real(p, "eps"), n);
    out.records.push_back(record("density-zero", "evidence",
                                 {{"n", n}, {"eps", get_real(p, "eps")}, {"density", number(prof.back())},
                                  {"samples", decade_samples(prof)}, {"has_atoms", mu.has_atoms()}}));
}

void run_select(const Params& p, std::uint64_t, Outcome& out) {
    std::vector<CircleMeasure> ms;
    for (const auto& s : get_list(p, "measures")) ms.push_back(parse_measure(s));
    if (ms.empty()) throw InvalidInput("fourier-select needs at least one --measures entry");
    const auto r = select_null_subsequence(ms, get_size(p, "L"), get_size(p, "n"));
    out.records.push_back(record("null-subsequence", r.flagged.empty() ? "pass" : "evidence",
                                 {{"indices", r.indices}, {"max_coeff", numbers(r.max_coeff)}, {"flagged", r.flagged}}));
}

struct WhcSetup {
    WHCInstance inst;
    PhiMap phi;
    std::size_t J;
};

WhcSetup whc_setup(const Params& p, std::uint64_t seed) {
    const int K = static_cast<int>(get_size(p, "targets"));
    const std::size_t J = get_size(p, "stages");
    const long W = static_cast<long>(get_size(p, "window", 8));
    const std::string weights = get_text(p, "weights");
    WHCInstance cs = WHCInstance::chan_sanders(K, W, seed);
    WHCInstance inst = weights == "cs" ? cs : WHCInstance(parse_weights(weights, W, 2.0), cs.targets);
    const std::string pm = get_text(p, "phi");
    PhiMap phi;
    if (pm == "cyclic")
        phi = PhiMap::cyclic(K, J);
    else if (pm == "block")
        phi = phi_map([](std::size_t) { return 1.0; },
                      [](std::size_t m) { return static_cast<double>(m) * std::log(static_cast<double>(m) + 1.0); },
                      std::max<std::size_t>(J, 1000000));
    else
        throw InvalidInput("--phi must be cyclic or block");
    return {std::move(inst), std::move(phi), J};
}

ConstructionTrace whc_build_records(const WhcSetup& s, const std::vector<ComplexVector>& battery, Outcome& out) {
    const auto sched = build_theta(s.inst, s.phi, s.J);
    out.records.push_back(record("theta-schedule", pass_fail(sched.e5 && sched.e6 && sched.e7),
                                 {{"theta", sched.theta}, {"e5", sched.e5}, {"e6", sched.e6}, {"e7", sched.e7},
                                  {"e5_worst", number(sched.e5_worst)}, {"e6_worst", number(sched.e6_worst)},
                                  {"e7_worst", number(sched.e7_worst)}, {"op_norm", number(s.inst.op_norm)}}));
    auto trace = assemble_and_decompose(s.inst, sched, s.phi, battery);
    json stages = json::array();
    for (const auto& sd : trace.stages)
        stages.push_back({{"r", sd.r}, {"b_norm", number(sd.b_norm)}, {"b_bound", number(sd.b_bound)},
                          {"mismatch", number(sd.mismatch)}});
    out.records.push_back(record("stage-bounds", pass_fail(trace.b_bounds_hold), {{"phi", trace.phi}, {"stages", stages}}));
    json gram = json::array();
    for (std::size_t k = 0; k < trace.gram.size(); ++k) {
        const auto& g = trace.gram[k];
        gram.push_back({{"target", k + 1}, {"family_size", g.inv_sq_partial.size()}, {"r", number(g.r)}, {"d", number(g.d)},
                        {"d_stated", number(g.d_stated)}, {"gram_max_eig", number(g.gram_max_eig)},
                        {"score", number(g.score)}});
    }
    out.records.push_back(record("gram-data", "evidence", {{"per_target", gram}}));
    return trace;
}

void run_whc_build(const Params& p, std::uint64_t seed, Outcome& out) {
    const auto s = whc_setup(p, seed);
    whc_build_records(s, {}, out);
}

void run_whc_visit(const Params& p, std::uint64_t seed, Outcome& out) {
    const auto s = whc_setup(p, seed);
    const auto battery = functional_battery(static_cast<int>(get_size(p, "battery", 0)), -2, 2, seed);
    const auto trace = whc_build_records(s, battery, out);
    const double thr = get_real(p, "threshold");
    json errs = json::array();
    bool ok = true;
    for (const auto& e : weak_visit_report(s.inst, trace, battery)) {
        ok = ok && e.err < thr;
        errs.push_back({{"target", e.target}, {"err", number(e.err)},
                        {"stage", e.stage ? json(*e.stage) : json(nullptr)}});
    }
    out.records.push_back(record("weak-visit", pass_fail(ok), {{"threshold", thr}, {"errors", errs}}));
}

void run_whc_slow(const Params& p, std::uint64_t, Outcome& out) {
    const auto q = parse_rate(get_text(p, "rate"));
    const auto tr = slow_growth_search(q, get_size(p, "stages"), get_size(p, "window"));
    json stages = json::array(), dips = json::array();
    std::vector<std::size_t> probes;
    for (const auto& s : tr.stages)
        stages.push_back({{"arc", number(s.arc)}, {"phi_l2", number(s.phi_l2)}, {"functional_norm", number(s.functional_norm)},
                          {"ls_residual", number(s.ls_residual)}, {"ls_target", number(s.ls_target)}, {"k", s.k},
                          {"arc_sup_g", number(s.arc_sup_g)}, {"arc_target", number(s.arc_target)}});
    for (const auto& d : tr.dips) {
        dips.push_back({{"k", d.k}, {"norm", number(d.norm)}, {"spill", number(d.spill)}, {"q", number(d.q)},
                        {"verified", d.verified}});
        probes.push_back(d.k);
    }
    out.records.push_back(record("slow-growth", pass_fail(tr.all_verified),
                                 {{"stages", stages}, {"dips", dips}, {"g_sup", number(tr.g_sup)},
                                  {"symbol_degree", tr.g.degree()},
                                  {"resolution_diagnostic", number(tr.resolution_diagnostic)}}));
    const auto sp = superpoly_profile(tr.orbit, {1, 2, 3}, probes);
    json per = json::array();
    for (const auto& r : sp.per_k) per.push_back({{"k", r.k}, {"probe_dips", r.probe_dips}});
    out.records.push_back(record("superpoly", "evidence", {{"per_k", per}}));
}

void run_coco(const Params& p, std::uint64_t seed, Outcome& out) {
    const std::size_t dim = get_size(p, "dim"), count = get_size(p, "count");
    std::vector<double> cs;
    for (const auto& s : get_list(p, "c")) cs.push_back(parse_real(s));
    if (cs.empty()) throw InvalidInput("coco needs at least one --c value");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.5, 1.0);
    double worst = 0, worst_premise = 1e300;
    for (std::size_t t = 0; t < count; ++t) {
        Eigen::MatrixXcd m(dim, dim);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(nd(gen), nd(gen));
        const double top = std::sqrt(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m.adjoint() * m,
                                                                                     Eigen::EigenvaluesOnly)
                                         .eigenvalues()
                                         .maxCoeff());
        m *= ud(gen) / top;
        const auto S = dense_operator(m);
        for (double c : cs) {
            const auto r = coco_identity(*S, c);
            worst = std::max(worst, r.residual);
            worst_premise = std::min(worst_premise, r.premise_min_eig);
        }
    }
    out.records.push_back(record("coco-identity", pass_fail(worst <= 1e-12),
                                 {{"dim", dim}, {"count", count}, {"c", numbers(cs)}, {"max_residual", number(worst)},
                                  {"min_premise_eig", number(worst_premise)}}));
}

void run_resolvent(const Params& p, std::uint64_t seed, Outcome& out) {
    const std::size_t dim = get_size(p, "dim");
    const std::string op = get_text(p, "operator");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    if (op == "backward-shift") {
        for (std::size_t i = 0; i + 1 < dim; ++i) m(i, i + 1) = 1.0;
    } else if (op == "random-unitary-diagonal") {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> u(0, 2 * 3.141592653589793);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = std::polar(1.0, u(gen));
    } else {
        throw InvalidInput("--operator must be backward-shift or random-unitary-diagonal");
    }
    const auto r = resolvent_decay(*dense_operator(m), get_real(p, "c"), static_cast<int>(get_size(p, "k", 0)),
                                       get_size(p, "n-max"));
    out.records.push_back(record("resolvent-decay", pass_fail(r.bound_holds),
                                 {{"operator", op}, {"dim", dim}, {"values", numbers(r.values)},
                                  {"power_bound", number(r.power_bound)}, {"A", number(r.A)},
                                  {"fitted_exponent", number(r.fitted_exponent)}}));
}

using Runner = void (*)(const Params&, std::uint64_t, Outcome&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m{
        {"taylor-norms", run_taylor},      {"orbit", run_orbit},
        {"toeplitz-check", run_toeplitz},  {"shift-classify", run_shift},
        {"fourier-cesaro", run_cesaro},    {"fourier-density", run_density},
        {"fourier-select", run_select},    {"whc-build", run_whc_build},
        {"whc-visit", run_whc_visit},      {"whc-slow", run_whc_slow},
        {"coco", run_coco},                {"resolvent-decay", run_resolvent},
    };
    return m;
}

int exit_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::hypothesis: return hypothesis;
        case ErrorKind::numerical: return numerical;
        default: return usage;
    }
}

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::hypothesis: return "hypothesis violation";
        case ErrorKind::numerical: return "numerical failure";
        default: return "invalid input";
    }
}

}  // namespace

SymbolSeries parse_series(const std::string& text) {
    auto s = parse_symbol(text);
    if (!std::holds_alternative<SymbolSeries>(s)) throw InvalidInput("expected an analytic symbol, got '" + text + "'");
    return std::get<SymbolSeries>(s);
}

SymbolSpec parse_symbol(const std::string& raw) {
    const std::string text = trim(raw);
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidInput(at_position(0, "expected '<kind>:' in '" + text + "'"));
    const std::string kind = text.substr(0, colon), body = text.substr(colon + 1);
    const std::size_t start = colon + 1;
    if (kind == "poly") {
        if (body.empty()) throw InvalidInput(at_position(start, "empty coefficient list"));
        return SymbolSeries::polynomial(complex_list(text, start), text);
    }
    if (kind == "const") {
        const auto c = complex_list(text, start);
        if (c.size() != 1) throw InvalidInput(at_position(start, "const takes one value"));
        auto g = SymbolSeries::constant(c[0]);
        g.label = text;
        return g;
    }
    if (kind == "tridiag") {
        const auto c = complex_list(text, start);
        if (c.size() != 3) throw InvalidInput(at_position(start, "tridiag takes three values a,b,c"));
        return Tridiag{c[0], c[1], c[2]};
    }
    if (kind == "outer-from") {
        if (body.empty()) throw InvalidInput(at_position(start, "missing path"));
        auto g = outer_from_log_modulus(load_log_modulus_csv(body));
        g.label = text;
        return g;
    }
    if (kind == "builtin") {
        if (body == "cs-halfplane") return SymbolSeries::polynomial({1.5, 0.5}, "cs-halfplane");
        if (body == "feldman") return SymbolSeries::polynomial({2.0, 1.0}, "feldman");
        throw InvalidInput(at_position(start, "unknown builtin '" + body + "'"));
    }
    throw InvalidInput(at_position(0, "unknown symbol kind '" + kind + "'"));
}

ComplexVector parse_vector(const std::string& raw, std::size_t N, std::uint64_t seed) {
    const std::string text = trim(raw);
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon), arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "kernel") {
        const cplx w = parse_complex(arg);
        if (!(std::abs(w) < 1)) throw InvalidInput("kernel point must lie in the open unit disk");
        return kernel_vector(w, N);
    }
    if (kind == "e") {
        const long j = static_cast<long>(parse_real(arg));
        if (j < 0 || static_cast<std::size_t>(j) >= N) throw InvalidInput("basis index out of range");
        return ComplexVector::basis(N, static_cast<std::size_t>(j));
    }
    if (kind == "random") {
        const std::size_t d = arg.empty() ? N : static_cast<std::size_t>(parse_real(arg));
        if (d == 0 || d > N) throw InvalidInput("random vector length must be in 1..dim");
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> nd;
        std::vector<cplx> e(N, 0.0);
        for (std::size_t i = 0; i < d; ++i) e[i] = cplx(nd(gen), nd(gen));
        return ComplexVector(std::move(e));
    }
    if (kind == "csv") {
        auto e = read_complex_csv(arg);
        if (e.empty() || e.size() > N) throw InvalidInput("vector file must hold 1..dim entries");
        e.resize(N, 0.0);
        return ComplexVector(std::move(e));
    }
    throw InvalidInput("unknown vector spec '" + text + "'");
}

WeightSequence parse_weights(const std::string& raw, long W, double p) {
    const std::string text = trim(raw);
    if (text == "cs") return WeightSequence::chan_sanders(W, p);
    if (text.rfind("const:", 0) == 0) return WeightSequence::constant(parse_real(text.substr(6)), W, p);
    if (text.rfind("csv:", 0) == 0) return WeightSequence::from_csv(text.substr(4), p);
    throw InvalidInput("unknown weight spec '" + text + "'");
}

RateFn parse_rate(const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "log") return [](double x) { return 1.0 + std::log1p(x); };
    if (text == "sqrt") return [](double x) { return 1.0 + std::sqrt(x); };
    if (text.rfind("pow:", 0) == 0) {
        const double a = parse_real(text.substr(4));
        if (!(a > 0)) throw InvalidInput("pow exponent must be positive");
        return [a](double x) { return std::pow(1.0 + x, a); };
    }
    throw InvalidInput("unknown rate function '" + text + "'");
}

const std::vector<CommandSpec>& commands() {
    using T = ParamType;
    static const std::vector<CommandSpec> cmds{
        {"taylor-norms", "coefficient norms of (1-z)^k (1+c-cz)^-n",
         {{"k", T::integer, 2, "power of (1-z)"}, {"c", T::real, 1.0, "expansion parameter"},
          {"n-max", T::integer, 4096, "largest n"}}},
        {"orbit", "orbit norms of a truncated Toeplitz operator",
         {{"symbol", T::text, nullptr, "symbol spec"}, {"x", T::text, "kernel:0.5", "start vector spec"},
          {"horizon", T::integer, 100, "number of steps"}, {"dim", T::integer, 0, "truncation size, 0 = automatic"},
          {"flavor", T::text, "coanalytic", "analytic (T_g) or coanalytic (T_g*)"},
          {"precision", T::text, "auto", "auto, double or mp"},
          {"check", T::list, json::array(), "superpoly:k,..|summability:c|ball|growth:cap|growth:<symbol>"},
          {"csv", T::text, "", "write the profile to this CSV file"}}},
        {"toeplitz-check", "operator checks for a symbol",
         {{"symbol", T::text, nullptr, "symbol spec"}, {"dim", T::integer, 128, "truncation size"},
          {"check", T::list, json::array(), "kernel|class|hyponormal|hc|dominance|positivity|eigen"},
          {"w", T::text, "0.5", "kernel point"}, {"z", T::text, "0.6", "tridiagonal eigenvector parameter"},
          {"h-symbols", T::list, json::array(), "symbols h_j for dominance and positivity"}}},
        {"shift-classify", "weighted-shift classification",
         {{"weights", T::text, "cs", "cs | const:v | csv:path"}, {"window", T::integer, 4096, "window half-width"},
          {"p", T::real, 2.0, "l_p exponent"}}},
        {"fourier-cesaro", "Cesaro means of squared Fourier coefficients",
         {{"measure", T::text, nullptr, "measure spec"}, {"n", T::integer, 1000, "last index"}}},
        {"fourier-density", "density of large Fourier coefficients",
         {{"measure", T::text, nullptr, "measure spec"}, {"eps", T::real, 0.5, "threshold"},
          {"n", T::integer, 10000, "last index"}}},
        {"fourier-select", "common null subsequence for several measures",
         {{"measures", T::list, nullptr, "measure specs"}, {"L", T::integer, 10, "subsequence length"},
          {"n", T::integer, 100000, "search horizon"}}},
        {"whc-build", "theta schedule and assembled vector for a weighted shift",
         {{"targets", T::integer, 4, "number of targets"}, {"stages", T::integer, 8, "stages J"},
          {"window", T::integer, 4096, "window half-width"}, {"weights", T::text, "cs", "weight spec"},
          {"phi", T::text, "cyclic", "cyclic or block"}}},
        {"whc-visit", "weak-visit errors of the assembled vector",
         {{"targets", T::integer, 4, "number of targets"}, {"stages", T::integer, 8, "stages J"},
          {"window", T::integer, 4096, "window half-width"}, {"weights", T::text, "cs", "weight spec"},
          {"phi", T::text, "cyclic", "cyclic or block"}, {"battery", T::integer, 5, "number of functionals"},
          {"threshold", T::real, 0.1, "largest accepted error"}}},
        {"whc-slow", "slow-orbit construction",
         {{"rate", T::text, "log", "log | sqrt | pow:a"}, {"stages", T::integer, 3, "stages"},
          {"window", T::integer, 4096, "boundary grid size"}}},
        {"coco", "identity T*T - R*R - I = c(I - S*S) on random contractions",
         {{"dim", T::integer, 32, "matrix size"}, {"c", T::list, json::array({"0.5", "1", "2"}), "values of c"},
          {"count", T::integer, 20, "number of contractions"}}},
        {"resolvent-decay", "decay of (I-S)^k T^-n",
         {{"operator", T::text, "backward-shift", "backward-shift | random-unitary-diagonal"},
          {"dim", T::integer, 64, "matrix size"}, {"c", T::real, 1.0, "parameter c"}, {"k", T::integer, 3, "power k"},
          {"n-max", T::integer, 256, "largest n"}}},
    };
    return cmds;
}

const CommandSpec& command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw InvalidInput("unknown command '" + name + "'");
}

const std::string& anchor(const std::string& rec) {
    static const std::map<std::string, std::string> table{
        {"taylor-coefficients", "taylor-coefficients/(1-z)^k(1+c-cz)^-n"},
        {"taylor-norms", "taylor-norms/sup N(n) n^((k-1)/2) finite"},
        {"orbit-profile", "orbit/norms of T^n x"},
        {"superpoly", "orbit/n^-k ||T^n x|| trend"},
        {"summability", "orbit/sum ||T^n x||^-c"},
        {"ball-witness", "orbit/unit vector with |<x_n,y>| >= 1"},
        {"growth-bound", "orbit/||T^n x||^2 >= n(n-1)/2 ||S^2 x||^2"},
        {"hypercyclicity", "toeplitz/hypercyclicity of the adjoint"},
        {"hyponormality", "toeplitz/T*T - TT* >= 0"},
        {"tridiagonal-eigenpair", "toeplitz/tridiagonal eigenvectors"},
        {"kernel-eigenvector", "toeplitz/T_g* k_w = conj(g(w)) k_w"},
        {"symbol-class", "symbols/classes E, E0, E1"},
        {"dominance", "toeplitz/T_g T_g* - sum T_h T_h* >= 0"},
        {"positivity", "toeplitz/sum T_h*T_h - T_g*T_g >= 0 iff modulus inequality"},
        {"shift-classification", "shifts/weak and norm hypercyclicity of bilateral shifts"},
        {"cesaro-means", "measures/Cesaro means of |mu^(n)|^2"},
        {"density-zero", "measures/density of large coefficients"},
        {"null-subsequence", "measures/common subsequence with coefficients to 0"},
        {"theta-schedule", "construction/inequalities e5 e6 e7"},
        {"stage-bounds", "construction/||b_r|| <= 2^-r"},
        {"gram-data", "construction/Gram bound for the a_r family"},
        {"weak-visit", "construction/weak approach to the targets"},
        {"slow-growth", "construction/||(T_g*)^k f|| < q(k) infinitely often"},
        {"coco-identity", "operators/T*T - R*R - I = c(I - S*S)"},
        {"resolvent-decay", "operators/||(I-S)^k T^-n|| decay"},
    };
    static const std::string unknown = "job/error";
    const auto it = table.find(rec);
    return it == table.end() ? unknown : it->second;
}

json validate(const JobSpec& job) {
    const CommandSpec& spec = command(job.command);
    if (!job.params.is_object()) throw InvalidInput("params must be an object");
    for (const auto& [k, v] : job.params.items()) {
        (void)v;
        if (std::none_of(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.key == k; }))
            throw InvalidInput(job.command + ": unknown parameter '" + k + "'");
    }
    json out = json::object();
    for (const auto& p : spec.params) {
        const bool given = job.params.contains(p.key);
        if (!given && p.fallback.is_null()) throw InvalidInput(job.command + ": --" + p.key + " is required");
        json v = given ? job.params.at(p.key) : p.fallback;
        const std::string where = job.command + ": --" + p.key;
        switch (p.type) {
            case ParamType::integer:
                if (v.is_string()) {
                    const double d = parse_real(v.get<std::string>());
                    if (d != std::floor(d)) throw InvalidInput(where + " must be an integer");
                    v = static_cast<long>(d);
                }
                if (!v.is_number_integer()) throw InvalidInput(where + " must be an integer");
                break;
            case ParamType::real:
                if (v.is_string()) v = parse_real(v.get<std::string>());
                if (!v.is_number()) throw InvalidInput(where + " must be a number");
                v = v.get<double>();
                break;
            case ParamType::text:
                if (!v.is_string()) throw InvalidInput(where + " must be a string");
                break;
            case ParamType::list:
                if (v.is_string()) v = json::array({v});
                if (!v.is_array()) throw InvalidInput(where + " must be a list");
                for (auto& e : v) {
                    if (e.is_number()) e = e.dump();
                    if (!e.is_string()) throw InvalidInput(where + " must hold strings");
                }
                break;
        }
        out[p.key] = v;
    }
    return out;
}

JobSpec job_from_json(const json& j) {
    if (!j.is_object() || !j.contains("command") || !j.at("command").is_string())
        throw InvalidInput("job entries need a \"command\" string");
    JobSpec s;
    s.command = j.at("command").get<std::string>();
    s.name = j.value("name", s.command);
    if (j.contains("params")) s.params = j.at("params");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw InvalidInput("seed must be a non-negative integer");
        s.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("tol")) s.tol = j.at("tol").get<double>();
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (k != "command" && k != "name" && k != "params" && k != "seed" && k != "tol")
            throw InvalidInput("unknown job field '" + k + "'");
    }
    return s;
}

std::vector<JobSpec> load_job_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open job file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
    const json& arr = doc.is_object() && doc.contains("jobs") ? doc.at("jobs") : doc;
    if (!arr.is_array()) throw InvalidInput(path + ": expected an array of jobs");
    std::vector<JobSpec> jobs;
    for (const auto& j : arr) jobs.push_back(job_from_json(j));
    return jobs;
}

JobResult run_job(const JobSpec& job, bool canonical) {
    const auto t0 = std::chrono::steady_clock::now();
    JobResult res;
    json& rep = res.report;
    rep["schema_version"] = schema_version;
    rep["version"] = tool_version;
    json echo{{"name", job.name.empty() ? job.command : job.name}, {"command", job.command}, {"seed", job.seed}};
    if (job.tol) echo["tol"] = *job.tol;
    Outcome out;
    try {
        const json params = validate(job);
        echo["params"] = params;
        std::optional<ToleranceOverride> tol;
        if (job.tol) tol.emplace(*job.tol);
        runners().at(job.command)(params, job.seed, out);
        for (const auto& r : out.records)
            if (r.at("verdict") == "fail") res.exit_code = std::max<int>(res.exit_code, hypothesis);
    } catch (const Error& e) {
        if (!echo.contains("params")) echo["params"] = job.params;
        out.records.push_back(
            json{{"name", job.command}, {"anchor", anchor("")}, {"verdict", "error"},
                 {"payload", {{"kind", kind_name(e.kind())}, {"message", e.what()}}}});
        res.exit_code = exit_for(e.kind());
    } catch (const json::exception& e) {
        if (!echo.contains("params")) echo["params"] = job.params;
        out.records.push_back(json{{"name", job.command}, {"anchor", anchor("")}, {"verdict", "error"},
                                   {"payload", {{"kind", "invalid input"}, {"message", e.what()}}}});
        res.exit_code = usage;
    }
    rep["job"] = echo;
    rep["records"] = out.records;
    if (!canonical)
        rep["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<JobResult> run_jobs(const std::vector<JobSpec>& jobs, unsigned workers, bool canonical) {
    std::vector<JobResult> results(jobs.size());
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) results[i] = run_job(jobs[i], canonical);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return results;
}

json merge_reports(const std::vector<JobResult>& results) {
    json doc{{"schema_version", schema_version}, {"version", tool_version}, {"jobs", json::array()}};
    for (const auto& r : results) doc["jobs"].push_back(r.report);
    doc["exit_code"] = merged_exit_code(results);
    return doc;
}

int merged_exit_code(const std::vector<JobResult>& results) {
    int code = ok;
    for (const auto& r : results) code = std::max(code, r.exit_code);
    return code;
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace orbitlab::cli
