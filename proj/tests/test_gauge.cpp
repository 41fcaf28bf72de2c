#include "bgl/errors.hpp"
#include "bgl/gauge.hpp"

#include <doctest.h>

#include <random>

using namespace bgl;

namespace {

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(unsigned long seed) : rng(seed) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    std::vector<double> vec(int n, double a, double b)
    {
        std::vector<double> v(n);
        for (auto& x : v) x = uni(a, b);
        return v;
    }
};

GaugeTheorySpec random_spec(Sampler& s, Family f, int rank, int nf, Realization r = Realization::II)
{
    GaugeTheorySpec g;
    g.family = f;
    g.rank = rank;
    g.realization = r;
    g.m_adj = s.uni(0.2, 1.4);
    g.masses = s.vec(nf, -1.5, 1.5);
    if (f == Family::A) g.anti_masses = s.vec(nf, -1.5, 1.5);
    return g;
}

// sigma with every vacuum and gradient factor at least `margin` from a zero
std::vector<double> admissible_point(Sampler& s, const GaugeTheorySpec& g, double margin = 0.1)
{
    for (int attempt = 0; attempt < 20000; ++attempt) {
        auto x = s.vec(g.rank, 0.0, kPi);
        const auto cx = to_complex(x);
        bool ok = true;
        for (int j = 0; j < g.rank && ok; ++j) {
            ok = ok && vacuum_form(g, j).min_distance(cx) > margin;
            ok = ok && exp_gradient_form(g, j).min_distance(cx) > margin;
            if (g.family != Family::E8 && g.family != Family::F4)
                ok = ok && full_vacuum_form(g, j).min_distance(cx) > margin;
        }
        if (ok) return x;
    }
    FAIL("no admissible point");
    return {};
}

double scaled(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("empty D1 theory")
{
    GaugeTheorySpec g;
    g.family = Family::D;
    g.rank = 1;
    g.m_adj = 0.7;
    const std::vector<double> x{0.3};
    CHECK(std::abs(superpotential_value(g, x)) == 0.0);
    CHECK(std::abs(superpotential_grad(g, x)[0]) == 0.0);
    CHECK(vacuum_lhs(g, x, 0, Branch::Plus).lhs == cplx(1.0));
    CHECK(vacuum_lhs_2d(g, x, 0, Branch::Plus).lhs == cplx(1.0));
}

TEST_CASE("pinned A-type superpotential")
{
    GaugeTheorySpec g;
    g.family = Family::A;
    g.rank = 1;
    g.masses = {0.2};
    g.m_adj = 0.9;
    const std::vector<double> x{0.1};
    // Li2(e^{-0.6i}) - 0.3^2, mpmath
    CHECK(std::abs(superpotential_value(g, x) - cplx(0.702456270771288496, -0.909500796416818013)) < 1e-13);
}

TEST_CASE("superpotential Weyl invariance")
{
    Sampler s(3);
    auto g = random_spec(s, Family::B, 2, 2);
    const auto x = admissible_point(s, g);
    const cplx w0 = superpotential_value(g, x);
    for (const auto& img : weyl_images(Family::B, 2, x).images) CHECK(std::abs(superpotential_value(g, img) - w0) < 1e-10);
}

TEST_CASE("analytic gradient matches finite differences")
{
    Sampler s(5);
    for (Family f : {Family::A, Family::B, Family::C, Family::D})
        for (int n = 1; n <= 3; ++n) {
            auto g = random_spec(s, f, n, 2);
            const auto x = admissible_point(s, g);
            const auto grad = superpotential_grad(g, x);
            for (int j = 0; j < n; ++j) {
                auto xp = x, xm = x;
                xp[j] += 1e-5;
                xm[j] -= 1e-5;
                const cplx fd = (superpotential_value(g, xp) - superpotential_value(g, xm)) / 2e-5;
                CHECK(std::abs(fd - grad[j]) < 1e-6);
            }
        }
}

TEST_CASE("gradient at the B1 symmetric point")
{
    GaugeTheorySpec g;
    g.family = Family::B;
    g.rank = 1;
    g.m_adj = 0.45;
    g.masses = {0.3, -0.3};
    g.realization = Realization::I;
    const auto grad = superpotential_grad(g, std::vector<double>{kPi / 2});
    CHECK(std::abs(grad[0].imag()) < 1e-12);
    CHECK(std::abs(std::exp(cplx(0.0, 1.0) * grad[0]) - 1.0) < 1e-12);
}

TEST_CASE("exponentiated gradient equals the full trigonometric product")
{
    Sampler s(7);
    const cplx I(0.0, 1.0);
    for (Realization r : {Realization::II, Realization::I})
        for (Family f : {Family::A, Family::B, Family::C, Family::D})
            for (int n = 1; n <= 3; ++n) {
                auto g = random_spec(s, f, n, 2, r);
                for (int k = 0; k < 5; ++k) {
                    const auto x = admissible_point(s, g);
                    const auto cx = to_complex(x);
                    const auto grad = superpotential_grad(g, x);
                    for (int j = 0; j < n; ++j) {
                        const cplx full = full_vacuum_product(g, x, j);
                        CHECK(scaled(std::exp(I * grad[j]), full) < 1e-10);
                        CHECK(scaled(exp_gradient_form(g, j).value(cx), full) < 1e-12);
                        const cplx v = vacuum_lhs(g, x, j, Branch::Plus).lhs;
                        CHECK(scaled(v * v, full) < 1e-12);
                    }
                }
            }
}

TEST_CASE("vacuum LHS reflection, permutation and periodicity")
{
    Sampler s(9);
    for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::F4}) {
        const int n = f == Family::F4 ? 4 : 3;
        auto g = random_spec(s, f, n, 2);
        const auto x = admissible_point(s, g);
        std::vector<cplx> base(n);
        for (int j = 0; j < n; ++j) base[j] = vacuum_lhs(g, x, j, Branch::Plus).lhs;

        for (int k = 0; k < n; ++k) {
            auto y = x;
            y[k] += kPi;
            for (int j = 0; j < n; ++j) CHECK(scaled(vacuum_lhs(g, y, j, Branch::Plus).lhs, base[j]) < 1e-12);
        }
        auto p = x;
        std::swap(p[0], p[1]);
        CHECK(scaled(vacuum_lhs(g, p, 0, Branch::Plus).lhs, base[1]) < 1e-12);
        CHECK(scaled(vacuum_lhs(g, p, 1, Branch::Plus).lhs, base[0]) < 1e-12);
        if (f != Family::A) {
            auto q = x;
            q[0] = -q[0];
            CHECK(std::abs(vacuum_lhs(g, q, 0, Branch::Plus).lhs * base[0] - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("E8 and F4 vacuum equations")
{
    Sampler s(13);
    auto e8 = random_spec(s, Family::E8, 8, 1);
    auto f4 = random_spec(s, Family::F4, 4, 2);
    CHECK(equation_count(e8) == 8);
    CHECK(equation_count(f4) == 4);
    const auto x = admissible_point(s, e8, 0.01);
    const auto grad = superpotential_grad(e8, x);
    for (int j = 0; j < 8; ++j) {
        const cplx v = vacuum_lhs(e8, x, j, Branch::Plus).lhs;
        CHECK(scaled(std::exp(cplx(0.0, 1.0) * grad[j]), v) < 1e-9);
        auto y = x;
        y[2] += kPi;
        y[5] += kPi;
        CHECK(scaled(vacuum_lhs(e8, y, j, Branch::Plus).lhs, v) < 1e-10);
    }
    e8.realization = Realization::I;
    CHECK_THROWS_AS(e8.validate(), Rejected);
    f4.realization = Realization::I;
    CHECK_THROWS_AS(f4.validate(), Rejected);
}

TEST_CASE("rational vacuum equations")
{
    GaugeTheorySpec g;
    g.family = Family::C;
    g.rank = 1;
    g.masses = {0.4};
    g.m_adj = 0.2;
    const cplx expect = ((0.7 - 0.1) / (0.7 + 0.1)) * ((0.7 - 0.4) / (-0.7 - 0.4));
    CHECK(std::abs(vacuum_lhs_2d(g, std::vector<double>{0.7}, 0, Branch::Plus).lhs - expect) < 1e-15);
}

TEST_CASE("trigonometric to rational degeneration is second order")
{
    Sampler s(17);
    auto g = random_spec(s, Family::B, 2, 2);
    const auto x = admissible_point(s, g);
    std::vector<double> errs;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        GaugeTheorySpec ge = g;
        ge.m_adj *= eps;
        for (auto& m : ge.masses) m *= eps;
        std::vector<double> xe(x);
        for (auto& v : xe) v *= eps;
        errs.push_back(std::abs(vacuum_lhs(ge, xe, 0, Branch::Plus).lhs - vacuum_lhs_2d(g, x, 0, Branch::Plus).lhs));
    }
    const double slope = std::log(errs[0] / errs[2]) / std::log(100.0);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("singular points are rejected")
{
    GaugeTheorySpec g;
    g.family = Family::C;
    g.rank = 1;
    g.masses = {0.4};
    g.m_adj = 0.2;
    CHECK_THROWS_AS(vacuum_lhs(g, std::vector<double>{-0.1}, 0, Branch::Plus), SingularPoint);
    CHECK_THROWS_AS(superpotential_grad(g, std::vector<double>{0.0}), SingularPoint);
    g.realization = Realization::I;
    g.anti_masses = {0.5};
    CHECK_THROWS_AS(g.validate(), Rejected);
}

TEST_CASE("one-loop asymptotics")
{
    const std::vector<double> betas{1e-2, 1e-3};
    const auto r = one_loop_asymptotic_check(0.3, betas);
    CHECK(r.rel_error[1] <= 5e-3);
    CHECK(r.monotone);
    const auto z = one_loop_asymptotic_check(0.0, betas);
    CHECK(z.rel_error[0] == 0.0);
    CHECK(z.rel_error[1] == 0.0);

    GaugeTheorySpec g;
    g.family = Family::B;
    g.rank = 1;
    g.masses = {0.3};
    g.m_adj = 0.5;
    const auto t = one_loop_asymptotic_check(g, std::vector<double>{0.7}, betas);
    CHECK(t.rel_error[1] < t.rel_error[0]);
    CHECK(t.rate == doctest::Approx(1.0).epsilon(0.2));
}
