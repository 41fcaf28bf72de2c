#include "bgl/errors.hpp"
#include "bgl/solve.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace bgl;

namespace {

// Roots of a real function on (lo, hi) from sign changes on an n-point grid, refined by bisection.
std::vector<double> grid_roots(const std::function<double(double)>& f, double lo, double hi, int n)
{
    std::vector<double> out;
    double x0 = lo + (hi - lo) / n, f0 = f(x0);
    for (int k = 2; k < n; ++k) {
        const double x1 = lo + (hi - lo) * k / n, f1 = f(x1);
        if (std::isfinite(f0) && std::isfinite(f1) && f0 * f1 < 0) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b), fm = f(m);
                if (fa * fm <= 0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            const double r = 0.5 * (a + b);
            if (std::abs(f(r)) < 1e-8) out.push_back(r);
        }
        x0 = x1;
        f0 = f1;
    }
    return out;
}

}  // namespace

TEST_CASE("solver configuration")
{
    SolveConfig c;
    CHECK_NOTHROW(c.validate());
    c.max_iter = 5;
    CHECK_THROWS_AS(c.validate(), Rejected);
    c = SolveConfig{};
    c.dedup_tol = c.tol;
    CHECK_THROWS_AS(c.validate(), Rejected);
    c = SolveConfig{};
    c.damping = 0.0;
    CHECK_THROWS_AS(c.validate(), Rejected);
}

TEST_CASE("closed XXX two-site root")
{
    ChainSpec c;
    c.kind = ChainKind::ClosedXXX;
    c.L = 2;
    c.M = 1;
    c.eta = 0.3;
    c.spins = {0.5, 0.5};
    c.thetas = {0.0, 0.0};
    const auto r = solve_bethe(c, SolveConfig{});
    REQUIRE(r.solutions.size() == 1);
    CHECK(std::abs(r.solutions[0].roots[0] - cplx(-0.15)) < 1e-9);
}

TEST_CASE("no magnons")
{
    ChainSpec c;
    c.kind = ChainKind::OpenXXZ;
    c.L = 2;
    c.M = 0;
    c.eta = 0.3;
    c.spins = {0.5, 0.5};
    c.thetas = {0.0, 0.1};
    const auto r = solve_bethe(c, SolveConfig{});
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0].roots.empty());
}

TEST_CASE("open XXZ single magnon against a grid scan")
{
    ChainSpec c;
    c.kind = ChainKind::OpenXXZ;
    c.L = 1;
    c.M = 1;
    c.eta = 0.23;
    c.spins = {0.5};
    c.thetas = {0.13};
    c.xi_plus = c.xi_minus = -c.eta / 2;

    const auto lhs = [&](double u) {
        const std::vector<cplx> x{u};
        return bethe_form(c, 0).value(x, 0.0).real() - 1.0;
    };
    std::vector<double> grid;
    for (double u : grid_roots(lhs, 0.0, 1.0, 4000)) {
        const double v = u > 0.5 ? 1.0 - u : u;
        if (std::abs(v) < 1e-6 || std::abs(v - 0.5) < 1e-6) continue;
        bool seen = false;
        for (double g : grid) seen = seen || std::abs(g - v) < 1e-6;
        if (!seen) grid.push_back(v);
    }
    REQUIRE(!grid.empty());

    SolveConfig cfg;
    cfg.n_starts = 256;
    const auto r = solve_bethe(c, cfg);
    std::vector<double> real_roots;
    for (const auto& s : r.solutions) {
        CHECK(s.residual <= cfg.tol);
        if (std::abs(s.roots[0].imag()) < 1e-8) real_roots.push_back(s.roots[0].real());
    }
    CHECK(real_roots.size() == grid.size());
    for (double g : grid) {
        double best = 1.0;
        for (double x : real_roots) best = std::min(best, std::abs(x - g));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("Bethe solutions are distinct, canonical and reproducible")
{
    ChainSpec c;
    c.kind = ChainKind::OpenXXZ;
    c.L = 3;
    c.M = 2;
    c.eta = 0.21;
    c.spins = {0.5, 0.5, 0.5};
    c.thetas = {0.05, -0.11, 0.17};
    c.xi_plus = 0.4;
    c.xi_minus = 0.35;
    SolveConfig cfg;
    cfg.seed = 3;
    const auto a = solve_bethe(c, cfg);
    const auto b = solve_bethe(c, cfg);
    REQUIRE(a.solutions.size() == b.solutions.size());
    REQUIRE(!a.solutions.empty());
    CHECK(a.solutions.size() >= 2);
    for (std::size_t k = 0; k < a.solutions.size(); ++k) {
        CHECK(a.solutions[k].roots == b.solutions[k].roots);
        for (int i = 0; i < c.M; ++i) CHECK(bethe_lhs(c, a.solutions[k].roots, i).residual <= cfg.tol);
        for (cplx z : a.solutions[k].roots) {
            CHECK(z.real() >= 0.0);
            CHECK(z.real() <= 0.5);
        }
        for (std::size_t l = k + 1; l < a.solutions.size(); ++l)
            CHECK(root_set_distance(c, a.solutions[k].roots, a.solutions[l].roots) > cfg.dedup_tol);
    }
    const BetheRoots x{{0.1, 0.2}, {0.3, -0.1}}, y{{-0.3, 0.1}, {1.1, 0.2}};
    CHECK(root_set_distance(c, x, y) < 1e-12);
}

TEST_CASE("empty gauge theory is underdetermined")
{
    GaugeTheorySpec g;
    g.family = Family::D;
    g.rank = 1;
    g.m_adj = 0.5;
    const auto r = solve_vacuum(g, Branch::Plus, SolveConfig{});
    CHECK(r.underdetermined);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0].sigma == std::vector<double>{0.0});
    CHECK(solve_vacuum(g, Branch::Minus, SolveConfig{}).solutions.empty());
}

TEST_CASE("C1 vacua against a grid scan")
{
    GaugeTheorySpec g;
    g.family = Family::C;
    g.rank = 1;
    g.masses = {0.4, -1.1};
    g.m_adj = 0.7;
    SolveConfig cfg;
    cfg.n_starts = 128;
    std::vector<std::vector<double>> per_branch[2];
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const auto f = [&](double s) {
            const std::vector<double> x{s};
            return vacuum_lhs(g, x, 0, b, 0.0).lhs.real() - sign(b);
        };
        std::vector<double> grid;
        for (double s : grid_roots(f, 0.0, kPi, 2000)) {
            const double v = s > kPi / 2 ? kPi - s : s;
            if (std::abs(v) < 1e-6 || std::abs(v - kPi / 2) < 1e-6) continue;
            bool seen = false;
            for (double x : grid) seen = seen || std::abs(x - v) < 1e-6;
            if (!seen) grid.push_back(v);
        }
        const auto r = solve_vacuum(g, b, cfg);
        CHECK(r.solutions.size() == grid.size());
        for (double x : grid) {
            double best = 1.0;
            for (const auto& s : r.solutions) best = std::min(best, vacuum_distance(g, s.sigma, {x}));
            CHECK(best < 1e-6);
        }
        for (const auto& s : r.solutions) per_branch[b == Branch::Plus ? 0 : 1].push_back(s.sigma);
    }
    for (const auto& p : per_branch[0])
        for (const auto& m : per_branch[1]) CHECK(vacuum_distance(g, p, m) > cfg.dedup_tol);
}

TEST_CASE("vacua are verified and deduplicated under the Weyl group")
{
    GaugeTheorySpec g;
    g.family = Family::B;
    g.rank = 2;
    g.masses = {0.4, -1.1, 0.3, 2.0};
    g.m_adj = 0.7;
    SolveConfig cfg;
    const auto r = solve_vacuum(g, Branch::Plus, cfg);
    REQUIRE(!r.solutions.empty());
    for (std::size_t k = 0; k < r.solutions.size(); ++k) {
        for (int j = 0; j < 2; ++j) CHECK(vacuum_lhs(g, r.solutions[k].sigma, j, Branch::Plus).residual <= cfg.tol);
        for (std::size_t l = k + 1; l < r.solutions.size(); ++l)
            CHECK(vacuum_distance(g, r.solutions[k].sigma, r.solutions[l].sigma) > cfg.dedup_tol);
    }
    CHECK(vacuum_distance(g, {0.3, 1.2}, {-1.2, 0.3 + kPi}) < 1e-12);
}

TEST_CASE("cross-check maps Bethe roots onto vacua")
{
    SolveConfig cfg;
    GaugeTheorySpec b;
    b.family = Family::B;
    b.rank = 1;
    b.masses = {0.4, -1.1};
    b.m_adj = 0.7;
    const auto rb = cross_check(b, find_preset("B-3d-P1"), cfg);
    CHECK(rb.report.pass);
    CHECK(rb.report.max_residual <= 1e-6);
    CHECK(rb.bethe_solutions > 0);

    GaugeTheorySpec a;
    a.family = Family::A;
    a.rank = 2;
    a.masses = {0.4, -1.1};
    a.anti_masses = {0.25, 1.3};
    a.m_adj = 0.7;
    const auto ra = cross_check(a, find_preset("A-3d"), cfg);
    CHECK(ra.report.pass);
    CHECK(ra.report.max_residual <= 1e-6);

    GaugeTheorySpec c;
    c.family = Family::C;
    c.rank = 2;
    c.masses = {0.4, -1.1};
    c.m_adj = 0.7;
    const auto rc = cross_check(c, find_preset("C-3d-P1"), cfg);
    CHECK(rc.bethe_solutions == 0);
    CHECK(!rc.report.pass);
    CHECK(!rc.report.notes.empty());
}
