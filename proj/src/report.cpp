#include "bgl/report.hpp"

#include "bgl/errors.hpp"
#include "bgl/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace bgl {

namespace {

constexpr double kPointMargin = 0.05;

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    std::vector<double> vec(int n, double a, double b)
    {
        std::vector<double> v(n);
        for (auto& x : v) x = uni(a, b);
        return v;
    }
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double scaled(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

GaugeTheorySpec random_gauge(Sampler& s, Family f, int rank, int nf, double range)
{
    GaugeTheorySpec g;
    g.family = f;
    g.rank = rank;
    g.m_adj = s.uni(0.1 * range, 0.9 * range);
    g.masses = s.vec(nf, -range, range);
    if (f == Family::A) g.anti_masses = s.vec(nf, -range, range);
    return g;
}

// sigma in (lo, hi)^rank keeping every listed form away from its singular set
template<class Forms>
std::optional<std::vector<double>> admissible(Sampler& s, int rank, double lo, double hi, const Forms& forms)
{
    for (int attempt = 0; attempt < 10000; ++attempt) {
        auto x = s.vec(rank, lo, hi);
        const auto cx = to_complex(x);
        if (std::all_of(forms.begin(), forms.end(),
                        [&](const ProductForm& f) { return f.min_distance(cx) >= kPointMargin; }))
            return x;
    }
    return std::nullopt;
}

double slope(const std::vector<double>& errs, double ratio)
{
    return std::log(errs.front() / errs.back()) / std::log(ratio);
}

Json string_list(const std::vector<std::string>& v)
{
    Json a = Json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

Json complex_list(const std::vector<cplx>& v)
{
    Json a = Json::array();
    for (cplx z : v) a.push_back(to_json(z));
    return a;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

bool AcceptanceReport::pass() const
{
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

CriterionResult check_root_counts()
{
    CriterionResult r{1, "root counts", true, 0.0, 0.0, {}, Json::array()};
    auto check = [&](Family f, int rank, std::size_t expect) {
        const auto got = build_root_system(f, rank).count();
        const bool ok = got == expect;
        if (!ok) {
            r.pass = false;
            r.metric += 1.0;
        }
        r.details.push_back(Json{{"family", to_string(f)}, {"rank", rank}, {"count", got}, {"expected", expect}, {"pass", ok}});
    };
    for (int n = 1; n <= 6; ++n) {
        const std::size_t N = n;
        check(Family::A, n, N * (N - 1));
        check(Family::B, n, 2 * N * N);
        check(Family::C, n, 2 * N * N);
        check(Family::D, n, 2 * N * (N - 1));
    }
    check(Family::E8, 8, 240);
    check(Family::E7, 7, 126);
    check(Family::E6, 6, 72);
    check(Family::F4, 4, 48);
    r.notes.push_back("metric counts mismatching root systems");
    return r;
}

CriterionResult check_gradient_equivalence(std::uint64_t seed)
{
    constexpr double kProductTol = 1e-8, kFdTol = 1e-6, kStep = 1e-5;
    CriterionResult r{2, "gradient-equation equivalence", true, 0.0, kProductTol, {}, Json::array()};
    Sampler s(derive_seed(seed, 2));
    double worst_product = 0.0, worst_fd = 0.0;
    const cplx I(0.0, 1.0);
    for (Family f : {Family::A, Family::B, Family::C, Family::D})
        for (int n = 1; n <= 3; ++n) {
            double wp = 0.0, wf = 0.0;
            int points = 0;
            for (int k = 0; k < 20; ++k) {
                const auto g = random_gauge(s, f, n, 2, 1.5);
                std::vector<ProductForm> forms;
                for (int j = 0; j < n; ++j) {
                    forms.push_back(full_vacuum_form(g, j));
                    forms.push_back(exp_gradient_form(g, j));
                }
                const auto x = admissible(s, n, 0.0, kPi, forms);
                if (!x) {
                    r.pass = false;
                    r.notes.push_back("no admissible point for " + to_string(f) + std::to_string(n));
                    continue;
                }
                ++points;
                const auto grad = superpotential_grad(g, *x);
                for (int j = 0; j < n; ++j) {
                    wp = std::max(wp, scaled(std::exp(I * grad[j]), full_vacuum_product(g, *x, j)));
                    auto xp = *x, xm = *x;
                    xp[j] += kStep;
                    xm[j] -= kStep;
                    const cplx fd = (superpotential_value(g, xp) - superpotential_value(g, xm)) / (2 * kStep);
                    wf = std::max(wf, std::abs(fd - grad[j]));
                }
            }
            r.details.push_back(Json{{"family", to_string(f)},
                                     {"rank", n},
                                     {"points", points},
                                     {"product_residual", wp},
                                     {"finite_difference_residual", wf}});
            worst_product = std::max(worst_product, wp);
            worst_fd = std::max(worst_fd, wf);
        }
    r.metric = worst_product;
    r.pass = r.pass && worst_product <= kProductTol && worst_fd <= kFdTol;
    r.notes.push_back("product residual is |a-b|/max(1,|b|); finite-difference residual " + sci(worst_fd) +
                      " against bound 1e-6");
    return r;
}

CriterionResult check_dictionary(std::uint64_t seed)
{
    CriterionResult r{3, "dictionary certification", true, 0.0, 1.0, {}, Json::array()};
    const std::uint64_t s = derive_seed(seed, 3);
    for (const auto& p : all_presets()) {
        VerifyOptions o;
        o.samples = 200;
        o.seed = s;
        o.tol = p.infinite_boundary() ? 1e-6 : 1e-10;
        const auto v = verify_identity(p, o);
        r.pass = r.pass && v.pass;
        r.metric = std::max(r.metric, v.max_residual / o.tol);
        r.details.push_back(Json{{"preset", p.id}, {"tol", o.tol}, {"max_residual", v.max_residual}, {"pass", v.pass}});
    }
    VerifyOptions flip;
    flip.samples = 200;
    flip.seed = s;
    flip.branch = Branch::Plus;
    const auto wrong = verify_identity(find_preset("B-3d-P5"), flip);
    const bool flip_ok = !wrong.pass && wrong.max_residual >= 0.1;
    r.pass = r.pass && flip_ok;
    r.details.push_back(Json{{"preset", "B-3d-P5"},
                             {"branch", "+"},
                             {"max_residual", wrong.max_residual},
                             {"expected", "fail with residual >= 0.1"},
                             {"pass", flip_ok}});
    r.notes.push_back("metric is the worst max_residual / tol; tol is 1e-10, or 1e-6 for i-infinity boundaries");
    return r;
}

CriterionResult check_transfer_matrix(std::uint64_t seed)
{
    constexpr double kYbTol = 1e-12, kCommTol = 1e-10, kCollTol = 1e-8;
    CriterionResult r{4, "transfer-matrix oracle", true, 0.0, kCollTol, {}, Json::array()};
    struct Config {
        ChainKind kind;
        int L;
        int M;
    };
    const Config configs[] = {{ChainKind::ClosedXXZ, 3, 1}, {ChainKind::ClosedXXZ, 3, 2}, {ChainKind::OpenXXZ, 2, 1}};
    double worst_yb = 0.0, worst_comm = 0.0;
    for (std::size_t ci = 0; ci < std::size(configs); ++ci) {
        for (int draw = 0; draw < 5; ++draw) {
            Sampler s(derive_seed(seed, 400 + 10 * ci + draw));
            ChainSpec c;
            c.kind = configs[ci].kind;
            c.L = configs[ci].L;
            c.M = configs[ci].M;
            c.eta = s.uni(0.1, 0.4);
            c.spins.assign(c.L, 0.5);
            c.thetas = s.vec(c.L, -0.2, 0.2);
            if (c.is_open()) {
                c.xi_plus = s.uni(-0.45, 0.45);
                c.xi_minus = s.uni(-0.45, 0.45);
            }
            const cplx u(s.uni(-0.5, 0.5), s.uni(-0.3, 0.3)), v(s.uni(-0.5, 0.5), s.uni(-0.3, 0.3));
            const BracketContext ctx(c.eta);
            const double yb = yang_baxter_residual(u, v, ctx);
            SolveConfig cfg;
            cfg.seed = derive_seed(seed, 500 + 10 * ci + draw);
            const auto sol = solve_bethe(c, cfg);
            std::vector<BetheRoots> sets;
            for (const auto& b : sol.solutions) sets.push_back(b.roots);
            const auto orc = chain_oracle(c, sets, u, v);
            const bool found = !sets.empty();
            const bool ok = found && yb <= kYbTol && orc.commutator <= kCommTol && orc.max_collinearity <= kCollTol;
            r.pass = r.pass && ok;
            worst_yb = std::max(worst_yb, yb);
            worst_comm = std::max(worst_comm, orc.commutator);
            if (found) r.metric = std::max(r.metric, orc.max_collinearity);
            if (!found) r.notes.push_back(to_string(c.kind) + " L=" + std::to_string(c.L) + " M=" + std::to_string(c.M) +
                                          " draw " + std::to_string(draw) + ": solver found no root set");
            r.details.push_back(Json{{"chain", to_string(c.kind)},
                                     {"L", c.L},
                                     {"M", c.M},
                                     {"draw", draw},
                                     {"eta", c.eta},
                                     {"root_sets", sets.size()},
                                     {"yang_baxter", yb},
                                     {"commutator", orc.commutator},
                                     {"shift", orc.shift},
                                     {"max_collinearity", orc.max_collinearity},
                                     {"pass", ok}});
        }
    }
    r.notes.push_back("worst Yang-Baxter residual " + sci(worst_yb) + ", worst commutator " +
                      sci(worst_comm));
    return r;
}

CriterionResult check_degeneration(std::uint64_t seed)
{
    constexpr double kOrder = 2.0, kOrderTol = 0.2;
    const double eps[] = {1e-1, 1e-2, 1e-3};
    CriterionResult r{5, "2d degeneration", true, 0.0, kOrderTol, {}, Json::array()};
    Sampler s(derive_seed(seed, 5));
    auto record = [&](const std::string& what, const std::vector<double>& errs) {
        const double order = slope(errs, eps[0] / eps[2]);
        const double dev = std::isfinite(order) ? std::abs(order - kOrder) : std::numeric_limits<double>::infinity();
        const bool ok = dev <= kOrderTol;
        r.pass = r.pass && ok;
        r.metric = std::max(r.metric, dev);
        r.details.push_back(Json{{"case", what}, {"errors", errs}, {"order", order}, {"pass", ok}});
    };

    for (Family f : {Family::A, Family::B, Family::C, Family::D}) {
        const auto g = random_gauge(s, f, 2, 2, 1.5);
        std::vector<ProductForm> forms;
        for (int j = 0; j < 2; ++j) forms.push_back(vacuum_form(g, j, true));
        const auto x = admissible(s, 2, -2.0, 2.0, forms);
        if (!x) {
            r.pass = false;
            r.notes.push_back("no admissible point for " + to_string(f));
            continue;
        }
        const cplx target = vacuum_lhs_2d(g, *x, 0, Branch::Plus).lhs;
        std::vector<double> errs;
        for (double e : eps) {
            GaugeTheorySpec ge = g;
            ge.m_adj *= e;
            for (auto& m : ge.masses) m *= e;
            for (auto& m : ge.anti_masses) m *= e;
            std::vector<double> xe(*x);
            for (auto& v : xe) v *= e;
            errs.push_back(std::abs(vacuum_lhs(ge, xe, 0, Branch::Plus, 0.0).lhs - target));
        }
        record("vacuum " + to_string(f) + "2", errs);
    }

    for (ChainKind k : {ChainKind::ClosedXXZ, ChainKind::OpenXXZ}) {
        ChainSpec c;
        c.kind = k;
        c.L = 2;
        c.M = 2;
        c.eta = s.uni(0.1, 0.4);
        c.spins.assign(2, 0.5);
        c.thetas = s.vec(2, -0.3, 0.3);
        if (c.is_open()) {
            c.xi_plus = s.uni(-0.5, 0.5);
            c.xi_minus = s.uni(-0.5, 0.5);
        }
        ChainSpec x = c;
        x.kind = k == ChainKind::ClosedXXZ ? ChainKind::ClosedXXX : ChainKind::OpenXXX;
        BetheRoots u;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            u = {cplx(s.uni(-0.5, 0.5), s.uni(-0.5, 0.5)), cplx(s.uni(-0.5, 0.5), s.uni(-0.5, 0.5))};
            if (bethe_form(x, 0).min_distance(u) >= kPointMargin) break;
        }
        const cplx target = bethe_lhs(x, u, 0, 0.0).lhs;
        std::vector<double> errs;
        for (double e : eps) {
            ChainSpec ce = c;
            ce.eta *= e;
            for (auto& t : ce.thetas) t *= e;
            ce.xi_plus *= e;
            ce.xi_minus *= e;
            BetheRoots ue(u);
            for (auto& z : ue) z *= e;
            errs.push_back(std::abs(bethe_lhs(ce, ue, 0, 0.0).lhs - target));
        }
        record("bethe " + to_string(k), errs);
    }
    r.notes.push_back("metric is the worst |order - 2| over epsilon in {1e-1, 1e-2, 1e-3}");
    return r;
}

CriterionResult check_duality(std::uint64_t seed)
{
    constexpr double kTol = 1e-10;
    CriterionResult r{6, "realization duality", true, 0.0, kTol, {}, Json::array()};
    Sampler s(derive_seed(seed, 6));
    for (Family f : {Family::B, Family::C})
        for (int n = 1; n <= 3; ++n) {
            GaugeTheorySpec gii = random_gauge(s, f, n, 2, 1.5);
            GaugeTheorySpec gi = gii;
            gi.realization = Realization::I;
            gi.anti_masses = gi.masses;
            const auto v = duality_compare(gi, gii, 50, derive_seed(seed, 600 + 10 * static_cast<int>(f) + n), kTol);
            r.pass = r.pass && v.pass;
            r.metric = std::max(r.metric, v.max_residual);
            Json d{{"family", to_string(f)}, {"rank", n}, {"max_residual", v.max_residual}, {"pass", v.pass}};
            d["notes"] = string_list(v.notes);
            r.details.push_back(d);
        }
    if (!r.pass)
        r.notes.push_back("realization I and II squared equations differ by the short-root factor; see details");
    return r;
}

CriterionResult check_special_functions(std::uint64_t seed)
{
    constexpr double kRefTol = 1e-12, kFactTol = 1e-10, kAsymTol = 5e-3;
    CriterionResult r{7, "special functions", true, 0.0, kFactTol, {}, Json::array()};
    const double ref = std::max(std::abs(dilog(1.0) - kPi * kPi / 6.0), std::abs(dilog(-1.0) + kPi * kPi / 12.0));
    const bool ref_ok = ref <= kRefTol;
    r.details.push_back(Json{{"check", "Li2(1), Li2(-1)"}, {"residual", ref}, {"bound", kRefTol}, {"pass", ref_ok}});

    Sampler s(derive_seed(seed, 7));
    double fact = 0.0;
    for (int q = 2; q <= 4; ++q) {
        const cplx w = std::polar(1.0, 2 * kPi / q);
        for (int k = 0; k < 20; ++k) {
            const cplx x(s.uni(-4.0, std::log(0.9)), s.uni(-kPi, kPi));
            cplx sum = 0.0, wj = 1.0;
            for (int j = 0; j < q; ++j, wj *= w) sum += dilog(wj * std::exp(x));
            fact = std::max(fact, std::abs(dilog(std::exp(double(q) * x)) - double(q) * sum));
        }
    }
    const bool fact_ok = fact <= kFactTol;
    r.details.push_back(Json{{"check", "Li2(z^r) = r sum_j Li2(w^j z), r in {2,3,4}"},
                             {"residual", fact},
                             {"bound", kFactTol},
                             {"pass", fact_ok}});

    const std::vector<double> betas{1e-1, 1e-2, 1e-3};
    bool asym_ok = true;
    double asym = 0.0;
    Json cases = Json::array();
    for (cplx z : {cplx(0.3), cplx(-0.6), std::polar(0.8, 1.1)}) {
        const auto a = one_loop_asymptotic_check(z, betas);
        const bool ok = a.rel_error.back() <= kAsymTol && a.monotone;
        asym_ok = asym_ok && ok;
        asym = std::max(asym, a.rel_error.back());
        Json c = to_json(a);
        c["z"] = to_json(z);
        c["pass"] = ok;
        cases.push_back(c);
    }
    r.details.push_back(Json{{"check", "q-Pochhammer asymptotics"}, {"cases", cases}, {"bound", kAsymTol}, {"pass", asym_ok}});

    r.pass = ref_ok && fact_ok && asym_ok;
    r.metric = std::max(ref, fact);
    r.notes.push_back("worst asymptotic relative error at beta2 = 1e-3: " + sci(asym));
    return r;
}

AcceptanceReport run_acceptance(std::uint64_t seed)
{
    AcceptanceReport rep;
    rep.seed = seed;
    rep.criteria.push_back(check_root_counts());
    rep.criteria.push_back(check_gradient_equivalence(seed));
    rep.criteria.push_back(check_dictionary(seed));
    rep.criteria.push_back(check_transfer_matrix(seed));
    rep.criteria.push_back(check_degeneration(seed));
    rep.criteria.push_back(check_duality(seed));
    rep.criteria.push_back(check_special_functions(seed));
    return rep;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const RootSystem& rs)
{
    Json roots = Json::array();
    for (const auto& v : rs.roots) {
        Json row = Json::array();
        for (const auto& q : v) row.push_back(q.denominator() == 1 ? std::to_string(q.numerator())
                                                                    : std::to_string(q.numerator()) + "/" +
                                                                          std::to_string(q.denominator()));
        roots.push_back(row);
    }
    return Json{{"family", to_string(rs.family)},
                {"rank", rs.rank},
                {"ambient_dim", rs.ambient_dim},
                {"count", rs.count()},
                {"roots", roots}};
}

Json to_json(const VerificationReport& r)
{
    Json worst{{"sample", r.worst.sample},
               {"equation", r.worst.equation},
               {"sigma", r.worst.sigma},
               {"masses", r.worst.masses},
               {"anti_masses", r.worst.anti_masses},
               {"m_adj", r.worst.m_adj}};
    Json cal = Json::array();
    for (const auto& c : r.calibration)
        cal.push_back(Json{{"xi_plus", c.xi_plus},
                           {"xi_minus", c.xi_minus},
                           {"fixed_sites", c.fixed_sites},
                           {"half_thetas", c.half_thetas},
                           {"branch", to_string(c.branch)},
                           {"max_residual", c.max_residual},
                           {"pass", c.pass}});
    return Json{{"preset", r.preset},
                {"family", to_string(r.family)},
                {"rank", r.rank},
                {"nf", r.nf},
                {"samples", r.samples},
                {"seed", r.seed},
                {"tol", r.tol},
                {"max_residual", r.max_residual},
                {"pass", r.pass},
                {"branch", to_string(r.branch_used)},
                {"worst", worst},
                {"cutoffs", r.cutoffs},
                {"cutoff_residuals", r.cutoff_residuals},
                {"calibration", cal},
                {"notes", string_list(r.notes)}};
}

Json to_json(const DictionaryPreset& p)
{
    Json fixed = Json::array();
    for (const auto& f : p.fixed_sites) fixed.push_back(Json{{"spin", f.spin}, {"theta", f.theta}});
    return Json{{"id", p.id},
                {"family", to_string(p.family)},
                {"regime", to_string(p.regime)},
                {"chain", to_string(p.chain_kind())},
                {"scale", p.scale},
                {"xi_plus", p.xi_plus.to_string()},
                {"xi_minus", p.xi_minus.to_string()},
                {"fixed_sites", fixed},
                {"branch", to_string(p.branch)}};
}

Json to_json(const CalibrationResult& r)
{
    return Json{{"preset", to_json(r.preset)}, {"report", to_json(r.report)}};
}

Json to_json(const BetheSolveResult& r)
{
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(Json{{"roots", complex_list(s.roots)}, {"residual", s.residual}});
    return Json{{"solutions", sols},
                {"converged_starts", r.converged_starts},
                {"degenerate_starts", r.degenerate_starts},
                {"asymptotic_starts", r.asymptotic_starts},
                {"diagnostics", string_list(r.diagnostics)}};
}

Json to_json(const VacuumSolveResult& r)
{
    Json sols = Json::array();
    for (const auto& s : r.solutions) sols.push_back(Json{{"sigma", s.sigma}, {"residual", s.residual}});
    return Json{{"solutions", sols},
                {"underdetermined", r.underdetermined},
                {"converged_starts", r.converged_starts},
                {"other_branch_starts", r.other_branch_starts},
                {"degenerate_starts", r.degenerate_starts},
                {"diagnostics", string_list(r.diagnostics)}};
}

Json to_json(const CrossCheckReport& r)
{
    return Json{{"report", to_json(r.report)}, {"bethe_solutions", r.bethe_solutions}, {"residuals", r.residuals}};
}

Json to_json(const OracleReport& r)
{
    return Json{{"commutator", r.commutator},
                {"shift", r.shift},
                {"shift_scan", r.shift_scan},
                {"collinearity", r.collinearity},
                {"max_collinearity", r.max_collinearity}};
}

Json to_json(const OneLoopReport& r)
{
    return Json{{"beta2", r.beta2}, {"rel_error", r.rel_error}, {"terms", r.terms}, {"rate", r.rate}, {"monotone", r.monotone}};
}

Json to_json(const CriterionResult& r)
{
    return Json{{"id", r.id},
                {"name", r.name},
                {"pass", r.pass},
                {"metric", r.metric},
                {"threshold", r.threshold},
                {"notes", string_list(r.notes)},
                {"details", r.details}};
}

Json to_json(const AcceptanceReport& r)
{
    Json crit = Json::array();
    for (const auto& c : r.criteria) crit.push_back(to_json(c));
    return Json{{"seed", r.seed}, {"pass", r.pass()}, {"criteria", crit}};
}

Json envelope(const std::string& kind, Json body)
{
    Json out{{"schema_version", kSchemaVersion}, {"kind", kind}};
    for (auto& [k, v] : body.items()) out[k] = v;
    return out;
}

}  // namespace bgl
