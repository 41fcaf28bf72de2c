#include "bgl/chain.hpp"
#include "bgl/errors.hpp"

#include <doctest.h>

#include <random>

using namespace bgl;

namespace {

ChainSpec spin_half(ChainKind kind, int L, int M, double eta, std::vector<double> thetas)
{
    ChainSpec c;
    c.kind = kind;
    c.L = L;
    c.M = M;
    c.eta = eta;
    c.spins.assign(L, 0.5);
    c.thetas = std::move(thetas);
    return c;
}

}  // namespace

TEST_CASE("closed XXX single site")
{
    auto c = spin_half(ChainKind::ClosedXXX, 1, 1, 0.3, {0.0});
    const std::vector<cplx> u{0.3};
    CHECK(std::abs(bethe_lhs(c, u, 0).lhs - 2.0) < 1e-15);
}

TEST_CASE("open Bethe equation symmetries")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-0.4, 0.4);
    auto c = spin_half(ChainKind::OpenXXZ, 3, 2, 0.31, {d(rng), d(rng), d(rng)});
    c.spins = {0.5, -0.5, 0.5};
    c.xi_plus = {0.17, 0.05};
    c.xi_minus = 0.42;
    const std::vector<cplx> u{{0.13, 0.07}, {-0.29, 0.02}};
    const cplx v = bethe_lhs(c, u, 0).lhs;
    const std::vector<cplx> up{u[0] + 1.0, u[1]}, un{-u[0], u[1]};
    CHECK(std::abs(bethe_lhs(c, up, 0).lhs - v) < 1e-12 * std::abs(v));
    CHECK(std::abs(bethe_lhs(c, un, 0).lhs * v - 1.0) < 1e-12);
    auto sw = c;
    std::swap(sw.xi_plus, sw.xi_minus);
    CHECK(std::abs(bethe_lhs(sw, u, 0).lhs - v) <= 1e-14 * std::abs(v));
}

TEST_CASE("R and K matrices")
{
    const BracketContext ctx(0.27);
    const auto r0 = r_matrix(0.0, ctx);
    CHECK(std::abs(r0(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r0(1, 1)) < 1e-15);
    CHECK(std::abs(r0(1, 2) - 1.0) < 1e-15);
    const auto rm = r_matrix(-0.27, ctx);
    CHECK(std::abs(rm(0, 0)) < 1e-15);
    CHECK(std::abs(rm(3, 3)) < 1e-15);
    const cplx xi(0.2, 0.1);
    const auto k0 = k_matrix(0.0, xi, ctx);
    CHECK(std::abs(k0(0, 0) - bracket(xi, ctx)) < 1e-15);
    CHECK(std::abs(k0(1, 1) - bracket(xi, ctx)) < 1e-15);
    const auto kx = k_matrix(0.4, 0.0, ctx);
    CHECK(std::abs(kx(0, 0) + kx(1, 1)) < 1e-15);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-0.6, 0.6);
    for (int s = 0; s < 20; ++s) {
        const cplx u(d(rng), d(rng) / 2), v(d(rng), d(rng) / 2), x(d(rng), d(rng) / 2);
        CHECK(yang_baxter_residual(u, v, ctx) < 1e-12);
        CHECK(reflection_residual(u, v, x, ctx) < 1e-12);
    }
}

TEST_CASE("monodromy and transfer matrices")
{
    auto c = spin_half(ChainKind::ClosedXXZ, 3, 0, 0.23, {0.1, -0.2, 0.05});
    const cplx u(0.31, 0.1), v(-0.17, 0.05);
    CHECK(rtt_residual(c, u, v) < 1e-10);
    CHECK(commutator_residual(c, u, v) < 1e-10);

    auto o = c;
    o.kind = ChainKind::OpenXXZ;
    o.xi_plus = 0.13;
    o.xi_minus = {0.41, 0.2};
    CHECK(commutator_residual(o, u, v) < 1e-10);

    auto one = spin_half(ChainKind::ClosedXXZ, 1, 0, 0.23, {0.0});
    const BracketContext ctx(0.23);
    const Mat t = transfer_matrix(one, u);
    CHECK((t - (ctx(u + 0.23) + ctx(u)) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("open transfer matrix trace formula")
{
    auto c = spin_half(ChainKind::OpenXXZ, 1, 0, 0.23, {0.07});
    c.xi_plus = 0.19;
    c.xi_minus = -0.33;
    const BracketContext ctx(c.eta);
    for (cplx u : {cplx(0.115), cplx(0.3, 0.2)}) {
        const auto b = double_row_blocks(c, u);
        const double xi = 0.19, eta = c.eta;
        const Mat formula = ctx(2.0 * u + eta) * ctx(u - eta / 2 + xi) / ctx(2.0 * u) * b.A -
                            ctx(u + eta / 2 - xi) / ctx(2.0 * u) * b.Dtilde;
        CHECK((formula - transfer_matrix(c, u)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Bethe vectors")
{
    auto c = spin_half(ChainKind::ClosedXXZ, 2, 0, 0.23, {0.1, -0.2});
    const auto omega = bethe_vector(c, std::vector<cplx>{});
    CHECK(omega.state(0) == cplx(1.0));
    CHECK(omega.state.tail(3).norm() == 0.0);

    auto c3 = spin_half(ChainKind::ClosedXXZ, 3, 2, 0.23, {0.1, -0.2, 0.05});
    const std::vector<cplx> ab{{0.1, 0.2}, {-0.3, 0.1}}, ba{ab[1], ab[0]};
    const auto v1 = bethe_vector(c3, ab), v2 = bethe_vector(c3, ba);
    const cplx ratio = v2.state.dot(v1.state) / v2.state.squaredNorm();
    CHECK((v1.state - ratio * v2.state).norm() / v1.state.norm() < 1e-8);

    auto bad = c3;
    bad.spins[0] = 1.0;
    CHECK_THROWS_WITH(transfer_matrix(bad, 0.1), doctest::Contains("spin-1/2"));
}

TEST_CASE("XXZ to XXX degeneration is second order")
{
    auto c = spin_half(ChainKind::OpenXXZ, 2, 2, 0.3, {0.2, -0.1});
    c.xi_plus = 0.4;
    c.xi_minus = -0.25;
    auto x = c;
    x.kind = ChainKind::OpenXXX;
    const std::vector<cplx> u{{0.3, 0.1}, {-0.2, 0.3}};
    const cplx target = bethe_lhs(x, u, 0).lhs;
    std::vector<double> errs;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        auto ce = c;
        ce.eta *= eps;
        for (auto& t : ce.thetas) t *= eps;
        ce.xi_plus *= eps;
        ce.xi_minus *= eps;
        std::vector<cplx> ue{u[0] * eps, u[1] * eps};
        errs.push_back(std::abs(bethe_lhs(ce, ue, 0).lhs - target));
    }
    CHECK(std::log(errs[0] / errs[2]) / std::log(100.0) == doctest::Approx(2.0).epsilon(0.1));
}
