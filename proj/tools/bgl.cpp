#include "bgl/bridge.hpp"
#include "bgl/chain.hpp"
#include "bgl/errors.hpp"
#include "bgl/gauge.hpp"
#include "bgl/lie_roots.hpp"
#include "bgl/report.hpp"
#include "bgl/solve.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace bgl;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct Common {
    bool json = false;
    bool csv = false;
    bool no_timestamp = false;
    std::string out;
    std::optional<std::uint64_t> seed;
};

struct Outcome {
    bool pass = true;
    Json json;
    std::string human;
    std::optional<std::string> csv;  // absent when the subcommand has no table
};

// Thrown for argument combinations CLI11 cannot express; reported like a parse error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sci(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string cnum(cplx z)
{
    std::ostringstream os;
    os << std::setprecision(12) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv_row(const std::vector<std::string>& cells)
{
    std::string line;
    for (std::size_t k = 0; k < cells.size(); ++k) line += (k ? "," : "") + csv_field(cells[k]);
    return line + "\n";
}

std::string pass_word(bool p) { return p ? "PASS" : "FAIL"; }

// "re" or "re:im"
cplx parse_complex(const std::string& s)
{
    try {
        const auto colon = s.find(':');
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const double re = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return re;
        }
        const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
        std::size_t ua = 0, ub = 0;
        const double re = std::stod(a, &ua), im = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::logic_error&) {
        throw UsageError("expected a complex number as re or re:im, got '" + s + "'");
    }
}

std::uint64_t env_seed()
{
    const char* v = std::getenv("BGL_SEED");
    if (!v || !*v) return kDefaultSeed;
    try {
        std::size_t used = 0;
        const std::string s(v);
        if (s.front() == '-') throw std::invalid_argument(s);
        const auto seed = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return seed;
    } catch (const std::logic_error&) {
        throw UsageError(std::string("BGL_SEED must be a non-negative integer, got '") + v + "'");
    }
}

std::string timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- shared option groups ----

struct GaugeOpts {
    std::string family = "A";
    int rank = 1;
    std::vector<double> masses;
    std::vector<double> anti_masses;
    double m_adj = 0.5;
    double beta2 = 1.0;
    std::string realization = "II";

    void add(CLI::App* app)
    {
        app->add_option("--family", family, "Gauge family: A B C D E6 E7 E8 F4")->required();
        app->add_option("--rank", rank, "Gauge rank")->check(CLI::Range(1, 8));
        app->add_option("--masses", masses, "Fundamental masses")->delimiter(',')->check(CLI::Range(-1e6, 1e6));
        app->add_option("--anti-masses", anti_masses, "Antifundamental masses (A, realization I)")
            ->delimiter(',')
            ->check(CLI::Range(-1e6, 1e6));
        app->add_option("--m-adj", m_adj, "Adjoint mass")->check(CLI::Range(-1e6, 1e6));
        app->add_option("--beta2", beta2, "beta_2")->check(CLI::PositiveNumber);
        app->add_option("--realization", realization, "I or II")->check(CLI::IsMember({"I", "II"}));
    }

    GaugeTheorySpec spec() const
    {
        GaugeTheorySpec g;
        g.family = parse_family(family);
        g.rank = rank;
        g.masses = masses;
        g.anti_masses = anti_masses;
        g.m_adj = m_adj;
        g.beta2 = beta2;
        g.realization = parse_realization(realization);
        g.validate();
        return g;
    }
};

struct ChainOpts {
    std::string kind = "closed-xxz";
    int L = 1;
    int M = 0;
    double eta = 0.25;
    std::vector<double> spins;
    std::vector<double> thetas;
    std::string xi_plus = "0";
    std::string xi_minus = "0";

    void add(CLI::App* app)
    {
        app->add_option("--chain", kind, "closed-xxz, open-xxz, closed-xxx or open-xxx")
            ->check(CLI::IsMember({"closed-xxz", "open-xxz", "closed-xxx", "open-xxx"}));
        app->add_option("--length,-L", L, "Number of sites")->check(CLI::Range(1, 16));
        app->add_option("--magnons,-M", M, "Number of Bethe roots")->check(CLI::Range(0, 16));
        app->add_option("--eta", eta, "Anisotropy / shift eta")->check(CLI::Range(-1e3, 1e3));
        app->add_option("--spins", spins, "Site spins (default 1/2)")->delimiter(',')->check(CLI::Range(-1e3, 1e3));
        app->add_option("--thetas", thetas, "Inhomogeneities (default 0)")
            ->delimiter(',')
            ->check(CLI::Range(-1e6, 1e6));
        app->add_option("--xi-plus", xi_plus, "Boundary parameter xi_+ as re or re:im");
        app->add_option("--xi-minus", xi_minus, "Boundary parameter xi_- as re or re:im");
    }

    ChainSpec spec() const
    {
        ChainSpec c;
        c.kind = parse_chain_kind(kind);
        c.L = L;
        c.M = M;
        c.eta = eta;
        c.spins = spins.empty() ? std::vector<double>(L, 0.5) : spins;
        c.thetas = thetas.empty() ? std::vector<double>(L, 0.0) : thetas;
        c.xi_plus = parse_complex(xi_plus);
        c.xi_minus = parse_complex(xi_minus);
        c.validate();
        return c;
    }
};

struct SolveOpts {
    SolveConfig cfg;

    void add(CLI::App* app)
    {
        app->add_option("--starts", cfg.n_starts, "Random Newton starts")->check(CLI::Range(1, 1000000));
        app->add_option("--solve-tol", cfg.tol, "Newton convergence tolerance")->check(CLI::Range(1e-15, 1e-2));
        app->add_option("--max-iter", cfg.max_iter, "Newton iteration cap")->check(CLI::Range(10, 100000));
        app->add_option("--damping", cfg.damping, "Initial Newton step fraction")->check(CLI::Range(1e-6, 1.0));
        app->add_option("--dedup-tol", cfg.dedup_tol, "Distance below which solutions coincide")
            ->check(CLI::Range(1e-14, 1.0));
    }

    SolveConfig config(std::uint64_t seed) const
    {
        SolveConfig c = cfg;
        c.seed = seed;
        c.validate();
        return c;
    }
};

std::vector<BetheRoots> parse_root_sets(const std::vector<std::string>& raw)
{
    std::vector<BetheRoots> sets;
    for (const auto& set : raw) {
        BetheRoots r;
        std::stringstream ss(set);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) r.push_back(parse_complex(item));
        sets.push_back(std::move(r));
    }
    return sets;
}

Json chain_json(const ChainSpec& c)
{
    return Json{{"chain", to_string(c.kind)},
                {"L", c.L},
                {"M", c.M},
                {"eta", c.eta},
                {"spins", c.spins},
                {"thetas", c.thetas},
                {"xi_plus", to_json(c.xi_plus)},
                {"xi_minus", to_json(c.xi_minus)}};
}

Json gauge_json(const GaugeTheorySpec& g)
{
    return Json{{"family", to_string(g.family)},
                {"rank", g.rank},
                {"masses", g.masses},
                {"anti_masses", g.anti_masses},
                {"m_adj", g.m_adj},
                {"beta2", g.beta2},
                {"realization", to_string(g.realization)}};
}

std::string verification_human(const VerificationReport& r)
{
    std::ostringstream os;
    os << r.preset << ": " << pass_word(r.pass) << "  max residual " << sci(r.max_residual) << " (tol " << sci(r.tol)
       << ", " << r.samples << " samples, seed " << r.seed << ", branch " << to_string(r.branch_used) << ")\n";
    if (r.worst.sample >= 0) {
        os << "  worst: sample " << r.worst.sample << ", equation " << r.worst.equation << ", sigma";
        for (double s : r.worst.sigma) os << " " << num(s);
        os << ", m_adj " << num(r.worst.m_adj) << "\n";
    }
    for (std::size_t k = 0; k < r.cutoffs.size(); ++k)
        os << "  cutoff T=" << r.cutoffs[k] << ": " << sci(r.cutoff_residuals[k]) << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    return os.str();
}

std::string calibration_csv(const VerificationReport& r)
{
    std::string out = csv_row({"xi_plus", "xi_minus", "fixed_sites", "half_thetas", "branch", "max_residual", "pass"});
    for (const auto& c : r.calibration)
        out += csv_row({c.xi_plus, c.xi_minus, std::to_string(c.fixed_sites), std::to_string(c.half_thetas),
                        to_string(c.branch), sci(c.max_residual), c.pass ? "true" : "false"});
    return out;
}

// ---- subcommands ----

Outcome do_roots(const std::string& family, int rank)
{
    const auto rs = build_root_system(parse_family(family), rank);
    Outcome o;
    o.json = to_json(rs);
    std::ostringstream os;
    os << to_string(rs.family) << " rank " << rank << ": " << rs.count() << " roots in dimension " << rs.ambient_dim << "\n";
    o.human = os.str();
    std::string csv;
    for (std::size_t k = 0; k < rs.count(); ++k) {
        std::vector<std::string> cells{std::to_string(k)};
        for (const auto& q : rs.roots[k]) cells.push_back(num(boost::rational_cast<double>(q)));
        cells.push_back(num(boost::rational_cast<double>(rs.lengths_sq[k])));
        csv += csv_row(cells);
    }
    std::vector<std::string> header{"index"};
    for (int d = 0; d < rs.ambient_dim; ++d) header.push_back("e" + std::to_string(d + 1));
    header.push_back("length_sq");
    o.csv = csv_row(header) + csv;
    return o;
}

Outcome do_presets()
{
    Outcome o;
    Json list = Json::array();
    std::string csv = csv_row({"id", "family", "regime", "chain", "scale", "xi_plus", "xi_minus", "fixed_sites", "branch"});
    std::ostringstream os;
    for (const auto& p : all_presets()) {
        list.push_back(to_json(p));
        csv += csv_row({p.id, to_string(p.family), to_string(p.regime), to_string(p.chain_kind()), num(p.scale),
                        p.xi_plus.to_string(), p.xi_minus.to_string(), std::to_string(p.fixed_sites.size()),
                        to_string(p.branch)});
        os << std::left << std::setw(9) << p.id << " " << std::setw(10) << to_string(p.chain_kind()) << " xi+ "
           << std::setw(12) << p.xi_plus.to_string() << " xi- " << std::setw(12) << p.xi_minus.to_string()
           << " fixed " << p.fixed_sites.size() << " branch " << to_string(p.branch) << "\n";
    }
    o.json = Json{{"presets", list}};
    o.human = os.str();
    o.csv = csv;
    return o;
}

Outcome do_specfun(std::uint64_t seed)
{
    const auto c = check_special_functions(seed);
    Outcome o;
    o.pass = c.pass;
    o.json = to_json(c);
    std::ostringstream os;
    for (const auto& d : c.details)
        os << pass_word(d["pass"].get<bool>()) << "  " << d["check"].get<std::string>() << "\n";
    for (const auto& n : c.notes) os << "  note: " << n << "\n";
    o.human = os.str();
    return o;
}

Outcome do_vacuum(const GaugeOpts& go, const std::vector<double>& sigma, const std::string& branch_s,
                  const std::string& regime_s, double tol)
{
    const auto g = go.spec();
    const Branch b = parse_branch(branch_s);
    const bool two_d = parse_regime(regime_s) == Regime::TwoD;
    const int n = equation_count(g);
    if (static_cast<int>(sigma.size()) != g.rank)
        throw UsageError("--sigma needs " + std::to_string(g.rank) + " values");
    Outcome o;
    Json eqs = Json::array();
    std::ostringstream os;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const auto v = two_d ? vacuum_lhs_2d(g, sigma, j, b) : vacuum_lhs(g, sigma, j, b);
        worst = std::max(worst, v.residual);
        eqs.push_back(Json{{"j", j}, {"lhs", to_json(v.lhs)}, {"target", v.target}, {"residual", v.residual}});
        os << "j=" << j << "  LHS " << cnum(v.lhs) << "  target " << v.target << "  residual " << sci(v.residual) << "\n";
    }
    o.pass = worst <= tol;
    os << pass_word(o.pass) << "  max residual " << sci(worst) << " (tol " << sci(tol) << ")\n";
    o.json = Json{{"gauge", gauge_json(g)},
                  {"regime", regime_s},
                  {"branch", to_string(b)},
                  {"sigma", sigma},
                  {"equations", eqs},
                  {"max_residual", worst},
                  {"tol", tol},
                  {"pass", o.pass}};
    o.human = os.str();
    return o;
}

Outcome do_bethe(const ChainOpts& co, const std::vector<std::string>& roots_raw, double tol)
{
    const auto c = co.spec();
    const auto sets = parse_root_sets(roots_raw);
    if (sets.size() != 1) throw UsageError("--roots takes one comma-separated root set");
    const auto& u = sets[0];
    if (static_cast<int>(u.size()) != c.M)
        throw UsageError("--roots needs " + std::to_string(c.M) + " entries to match --magnons");
    Outcome o;
    Json eqs = Json::array();
    std::ostringstream os;
    double worst = 0.0;
    for (int i = 0; i < c.M; ++i) {
        const auto v = bethe_lhs(c, u, i);
        worst = std::max(worst, v.residual);
        eqs.push_back(Json{{"i", i}, {"lhs", to_json(v.lhs)}, {"residual", v.residual}});
        os << "i=" << i << "  LHS " << cnum(v.lhs) << "  residual " << sci(v.residual) << "\n";
    }
    o.pass = worst <= tol;
    os << pass_word(o.pass) << "  max residual " << sci(worst) << " (tol " << sci(tol) << ")\n";
    Json roots = Json::array();
    for (cplx z : u) roots.push_back(to_json(z));
    o.json = Json{{"chain", chain_json(c)}, {"roots", roots}, {"equations", eqs}, {"max_residual", worst}, {"tol", tol},
                  {"pass", o.pass}};
    o.human = os.str();
    return o;
}

Outcome do_chain_oracle(const ChainOpts& co, const std::vector<std::string>& roots_raw, const std::string& u_s,
                        const std::string& v_s, const SolveOpts& so, std::uint64_t seed)
{
    constexpr double kCommTol = 1e-10, kCollTol = 1e-8, kYbTol = 1e-12;
    const auto c = co.spec();
    const cplx u = parse_complex(u_s), v = parse_complex(v_s);
    std::vector<BetheRoots> sets = parse_root_sets(roots_raw);
    bool solved = false;
    if (sets.empty()) {
        for (const auto& s : solve_bethe(c, so.config(seed)).solutions) sets.push_back(s.roots);
        solved = true;
    }
    for (const auto& s : sets)
        if (static_cast<int>(s.size()) != c.M) throw UsageError("every root set needs --magnons entries");
    const auto rep = chain_oracle(c, sets, u, v);
    const double yb = yang_baxter_residual(u, v, BracketContext(c.eta));
    Outcome o;
    o.pass = yb <= kYbTol && rep.commutator <= kCommTol && (sets.empty() || rep.max_collinearity <= kCollTol);
    Json body = to_json(rep);
    body["yang_baxter"] = yb;
    body["root_sets"] = Json::array();
    for (const auto& s : sets) {
        Json r = Json::array();
        for (cplx z : s) r.push_back(to_json(z));
        body["root_sets"].push_back(r);
    }
    body["roots_from_solver"] = solved;
    o.json = Json{{"chain", chain_json(c)}, {"oracle", body}, {"pass", o.pass}};
    std::ostringstream os;
    os << "Yang-Baxter residual " << sci(yb) << "\n";
    os << "[t(u),t(v)] residual " << sci(rep.commutator) << "\n";
    os << sets.size() << " root set(s)" << (solved ? " from the solver" : "") << ", shift " << num(rep.shift)
       << " eta, max collinearity " << sci(rep.max_collinearity) << "\n";
    os << pass_word(o.pass) << "\n";
    o.human = os.str();
    return o;
}

Outcome do_verify(const std::string& preset, VerifyOptions opt, const std::string& branch_s)
{
    if (!branch_s.empty()) opt.branch = parse_branch(branch_s);
    const auto r = verify_identity(find_preset(preset), opt);
    Outcome o;
    o.pass = r.pass;
    o.json = to_json(r);
    o.human = verification_human(r);
    return o;
}

Outcome do_calibrate(const std::string& family, const std::string& regime, int samples, std::uint64_t seed, double tol)
{
    const Family f = parse_family(family);
    const Regime rg = parse_regime(regime);
    auto grid = default_grid(f, rg);
    grid.verify.samples = samples;
    grid.verify.seed = seed;
    grid.verify.tol = tol;
    const auto r = calibrate_preset(f, rg, grid);
    Outcome o;
    o.pass = r.report.pass;
    o.json = to_json(r);
    std::ostringstream os;
    os << "selected: xi+ " << r.preset.xi_plus.to_string() << ", xi- " << r.preset.xi_minus.to_string() << ", "
       << r.preset.fixed_sites.size() << " fixed site(s), branch " << to_string(r.preset.branch) << "\n";
    os << verification_human(r.report);
    os << r.report.calibration.size() << " grid points evaluated\n";
    o.human = os.str();
    o.csv = calibration_csv(r.report);
    return o;
}

Outcome do_duality(const GaugeOpts& go, int samples, std::uint64_t seed, double tol)
{
    GaugeOpts two = go;
    two.realization = "II";
    const auto gii = two.spec();
    GaugeTheorySpec gi = gii;
    gi.realization = Realization::I;
    gi.anti_masses = go.anti_masses.empty() ? gii.masses : go.anti_masses;
    gi.validate();
    const auto r = duality_compare(gi, gii, samples, seed, tol);
    Outcome o;
    o.pass = r.pass;
    o.json = to_json(r);
    o.human = verification_human(r);
    return o;
}

Outcome do_solve_bethe(const ChainOpts& co, const SolveOpts& so, std::uint64_t seed)
{
    const auto c = co.spec();
    const auto r = solve_bethe(c, so.config(seed));
    Outcome o;
    o.pass = !r.solutions.empty();
    o.json = Json{{"chain", chain_json(c)}, {"seed", seed}, {"result", to_json(r)}, {"pass", o.pass}};
    std::ostringstream os;
    std::string csv = csv_row({"solution", "root", "re", "im", "residual"});
    for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        os << "#" << k << " residual " << sci(r.solutions[k].residual) << ":";
        for (std::size_t i = 0; i < r.solutions[k].roots.size(); ++i) {
            const cplx z = r.solutions[k].roots[i];
            os << " " << cnum(z);
            csv += csv_row({std::to_string(k), std::to_string(i), num(z.real()), num(z.imag()),
                            sci(r.solutions[k].residual)});
        }
        os << "\n";
    }
    os << r.solutions.size() << " solution(s); " << r.converged_starts << " converged starts, " << r.degenerate_starts
       << " degenerate, " << r.asymptotic_starts << " asymptotic\n";
    for (const auto& d : r.diagnostics) os << "  note: " << d << "\n";
    o.human = os.str();
    o.csv = csv;
    return o;
}

Outcome do_solve_vacuum(const GaugeOpts& go, const std::string& branch_s, const SolveOpts& so, std::uint64_t seed)
{
    const auto g = go.spec();
    const Branch b = parse_branch(branch_s);
    const auto r = solve_vacuum(g, b, so.config(seed));
    Outcome o;
    o.pass = !r.solutions.empty();
    o.json = Json{{"gauge", gauge_json(g)}, {"branch", to_string(b)}, {"seed", seed}, {"result", to_json(r)},
                  {"pass", o.pass}};
    std::ostringstream os;
    std::vector<std::string> header{"solution"};
    for (int j = 0; j < g.rank; ++j) header.push_back("sigma" + std::to_string(j + 1));
    header.push_back("residual");
    std::string csv = csv_row(header);
    for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        std::vector<std::string> cells{std::to_string(k)};
        os << "#" << k << " residual " << sci(r.solutions[k].residual) << ": sigma";
        for (double s : r.solutions[k].sigma) {
            os << " " << num(s);
            cells.push_back(num(s));
        }
        cells.push_back(sci(r.solutions[k].residual));
        csv += csv_row(cells);
        os << "\n";
    }
    os << r.solutions.size() << " vacuum solution(s)" << (r.underdetermined ? " (underdetermined)" : "") << "; "
       << r.converged_starts << " converged starts, " << r.other_branch_starts << " on the other branch, "
       << r.degenerate_starts << " degenerate\n";
    for (const auto& d : r.diagnostics) os << "  note: " << d << "\n";
    o.human = os.str();
    o.csv = csv;
    return o;
}

Outcome do_cross_check(const GaugeOpts& go, const std::string& preset, const SolveOpts& so, std::uint64_t seed,
                       double tol)
{
    const auto g = go.spec();
    const auto r = cross_check(g, find_preset(preset), so.config(seed), tol);
    Outcome o;
    o.pass = r.report.pass;
    o.json = to_json(r);
    std::ostringstream os;
    os << r.bethe_solutions << " Bethe solution(s) mapped to sigma\n";
    for (std::size_t k = 0; k < r.residuals.size(); ++k) os << "  #" << k << " vacuum residual " << sci(r.residuals[k]) << "\n";
    os << verification_human(r.report);
    o.human = os.str();
    return o;
}

Outcome do_report_all(std::uint64_t seed)
{
    const auto r = run_acceptance(seed);
    Outcome o;
    o.pass = r.pass();
    o.json = to_json(r);
    std::ostringstream os;
    os << std::left << std::setw(3) << "#" << std::setw(32) << "criterion" << std::setw(7) << "status" << std::setw(12)
       << "metric"
       << "threshold\n";
    std::string csv = csv_row({"id", "criterion", "pass", "metric", "threshold"});
    for (const auto& c : r.criteria) {
        os << std::left << std::setw(3) << c.id << std::setw(32) << c.name << std::setw(7) << pass_word(c.pass)
           << std::setw(12) << sci(c.metric) << sci(c.threshold) << "\n";
        csv += csv_row({std::to_string(c.id), c.name, c.pass ? "true" : "false", sci(c.metric), sci(c.threshold)});
    }
    for (const auto& c : r.criteria)
        for (const auto& n : c.notes) os << "  [" << c.id << "] " << n << "\n";
    os << "seed " << seed << ": " << (o.pass ? "all criteria pass" : "some criteria fail") << "\n";
    o.human = os.str();
    o.csv = csv;
    return o;
}

void add_common(CLI::App* app, Common& c)
{
    auto* j = app->add_flag("--json", c.json, "Emit a JSON report");
    auto* v = app->add_flag("--csv", c.csv, "Emit a CSV table");
    j->excludes(v);
    app->add_option("--out", c.out, "Write the report to this path instead of standard output");
    app->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation time from JSON");
    app->add_option("--seed", c.seed, "Random seed (default: BGL_SEED or 42)");
}

int emit(const std::string& kind, const Common& c, Outcome o, std::uint64_t seed)
{
    std::string text;
    if (c.json) {
        Json body = o.json;
        body["seed"] = seed;
        body["pass"] = o.pass;
        Json out = envelope(kind, body);
        if (!c.no_timestamp) out["generated_at"] = timestamp();
        text = out.dump(2) + "\n";
    } else if (c.csv) {
        if (!o.csv) throw UsageError(kind + " has no CSV table");
        text = *o.csv;
    } else {
        text = o.human;
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw UsageError("cannot open " + c.out + " for writing");
        f << text;
        if (!f) throw UsageError("failed writing " + c.out);
        std::cout << kind << ": " << pass_word(o.pass) << " (report written to " << c.out << ")\n";
    }
    return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bethe/gauge correspondence verification lab"};
    app.require_subcommand(1);
    Common common;

    std::string family = "E8";
    int rank = 8;
    auto* roots = app.add_subcommand("roots", "Enumerate a root system");
    roots->add_option("--family", family, "A B C D E6 E7 E8 F4")->required();
    roots->add_option("--rank", rank, "Rank")->check(CLI::Range(1, 64));
    add_common(roots, common);

    auto* presets_cmd = app.add_subcommand("presets", "List the dictionary preset catalog");
    add_common(presets_cmd, common);

    auto* specfun = app.add_subcommand("specfun-selftest", "Dilogarithm and q-Pochhammer checks");
    add_common(specfun, common);

    GaugeOpts vac_g;
    std::vector<double> sigma;
    std::string branch = "+", regime = "3d";
    double eval_tol = 1e-10;
    auto* vacuum = app.add_subcommand("vacuum", "Evaluate the vacuum equations at sigma");
    vac_g.add(vacuum);
    vacuum->add_option("--sigma", sigma, "Coulomb parameters")->delimiter(',')->required()->check(CLI::Range(-1e6, 1e6));
    vacuum->add_option("--branch", branch, "+ or -")->check(CLI::IsMember({"+", "-", "+1", "-1"}));
    vacuum->add_option("--regime", regime, "3d or 2d")->check(CLI::IsMember({"3d", "2d"}));
    vacuum->add_option("--tol", eval_tol, "Residual bound")->check(CLI::PositiveNumber);
    add_common(vacuum, common);

    ChainOpts bethe_c;
    std::vector<std::string> root_sets;
    auto* bethe = app.add_subcommand("bethe", "Evaluate the Bethe equations at given roots");
    bethe_c.add(bethe);
    bethe->add_option("--roots", root_sets, "Comma-separated roots, each re or re:im")->required()->expected(1);
    bethe->add_option("--tol", eval_tol, "Residual bound")->check(CLI::PositiveNumber);
    add_common(bethe, common);

    ChainOpts oracle_c;
    SolveOpts oracle_s;
    std::string probe_u = "0.31:0.1", probe_v = "-0.17:0.05";
    auto* oracle = app.add_subcommand("chain-oracle", "Transfer-matrix certification of Bethe root sets");
    oracle_c.add(oracle);
    oracle_s.add(oracle);
    oracle->add_option("--roots", root_sets, "Root set (repeatable); solved when absent");
    oracle->add_option("--u", probe_u, "Spectral parameter u as re or re:im");
    oracle->add_option("--v", probe_v, "Spectral parameter v as re or re:im");
    add_common(oracle, common);

    std::string preset = "A-3d";
    VerifyOptions vopt;
    std::string vbranch;
    auto* verify = app.add_subcommand("verify", "Certify a dictionary preset on random samples");
    verify->add_option("--preset", preset, "Preset id")->required();
    verify->add_option("--rank", vopt.rank, "Gauge rank")->check(CLI::Range(1, 8));
    verify->add_option("--nf", vopt.nf, "Number of flavours")->check(CLI::Range(0, 32));
    verify->add_option("--samples", vopt.samples, "Samples")->check(CLI::Range(1, 1000000));
    verify->add_option("--tol", vopt.tol, "Residual bound")->check(CLI::Range(1e-16, 1.0));
    verify->add_option("--branch", vbranch, "Override the preset branch: + or -")
        ->check(CLI::IsMember({"+", "-", "+1", "-1"}));
    add_common(verify, common);

    std::string cal_family = "B", cal_regime = "3d";
    int cal_samples = 50;
    double cal_tol = 1e-10;
    auto* calibrate = app.add_subcommand("calibrate", "Scan boundary and fixed-site choices for a family");
    calibrate->add_option("--family", cal_family, "B C or D")->required();
    calibrate->add_option("--regime", cal_regime, "3d or 2d")->check(CLI::IsMember({"3d", "2d"}));
    calibrate->add_option("--samples", cal_samples, "Samples per grid point")->check(CLI::Range(1, 100000));
    calibrate->add_option("--tol", cal_tol, "Residual bound")->check(CLI::Range(1e-16, 1.0));
    add_common(calibrate, common);

    GaugeOpts dual_g;
    int dual_samples = 50;
    double dual_tol = 1e-10;
    auto* duality = app.add_subcommand("duality-compare", "Compare squared vacuum equations of realizations I and II");
    dual_g.add(duality);
    duality->add_option("--samples", dual_samples, "Samples")->check(CLI::Range(1, 1000000));
    duality->add_option("--tol", dual_tol, "Residual bound")->check(CLI::Range(1e-16, 1.0));
    add_common(duality, common);

    ChainOpts sb_c;
    SolveOpts sb_s;
    auto* solve_b = app.add_subcommand("solve-bethe", "Solve the Bethe equations by multi-start Newton");
    sb_c.add(solve_b);
    sb_s.add(solve_b);
    add_common(solve_b, common);

    GaugeOpts sv_g;
    SolveOpts sv_s;
    std::string sv_branch = "+";
    auto* solve_v = app.add_subcommand("solve-vacuum", "Solve the vacuum equations by multi-start Newton");
    sv_g.add(solve_v);
    sv_s.add(solve_v);
    solve_v->add_option("--branch", sv_branch, "+ or -")->check(CLI::IsMember({"+", "-", "+1", "-1"}));
    add_common(solve_v, common);

    GaugeOpts cc_g;
    SolveOpts cc_s;
    std::string cc_preset = "A-3d";
    double cc_tol = 1e-6;
    auto* cross = app.add_subcommand("cross-check", "Map solved Bethe roots into the vacuum equations");
    cc_g.add(cross);
    cc_s.add(cross);
    cross->add_option("--preset", cc_preset, "Preset id")->required();
    cross->add_option("--tol", cc_tol, "Residual bound")->check(CLI::Range(1e-16, 1.0));
    add_common(cross, common);

    auto* report = app.add_subcommand("report-all", "Run the full acceptance suite");
    add_common(report, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "\n" << app.help();
        return 2;
    }

    try {
        const std::uint64_t seed = common.seed ? *common.seed : env_seed();
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        Outcome o;
        if (sub == roots) {
            o = do_roots(family, rank);
        } else if (sub == presets_cmd) {
            o = do_presets();
        } else if (sub == specfun) {
            o = do_specfun(seed);
        } else if (sub == vacuum) {
            o = do_vacuum(vac_g, sigma, branch, regime, eval_tol);
        } else if (sub == bethe) {
            o = do_bethe(bethe_c, root_sets, eval_tol);
        } else if (sub == oracle) {
            o = do_chain_oracle(oracle_c, root_sets, probe_u, probe_v, oracle_s, seed);
        } else if (sub == verify) {
            vopt.seed = seed;
            o = do_verify(preset, vopt, vbranch);
        } else if (sub == calibrate) {
            o = do_calibrate(cal_family, cal_regime, cal_samples, seed, cal_tol);
        } else if (sub == duality) {
            o = do_duality(dual_g, dual_samples, seed, dual_tol);
        } else if (sub == solve_b) {
            o = do_solve_bethe(sb_c, sb_s, seed);
        } else if (sub == solve_v) {
            o = do_solve_vacuum(sv_g, sv_branch, sv_s, seed);
        } else if (sub == cross) {
            o = do_cross_check(cc_g, cc_preset, cc_s, seed, cc_tol);
        } else {
            o = do_report_all(seed);
        }
        return emit(name, common, std::move(o), seed);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Rejected& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
