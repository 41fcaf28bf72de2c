#include "bgl/bridge.hpp"
#include "bgl/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace bgl;

TEST_CASE("preset catalog")
{
    const auto all = all_presets();
    std::vector<std::string> ids;
    for (const auto& p : all) ids.push_back(p.id);
    const std::vector<std::string> expect{"A-3d",    "B-3d-P1", "B-3d-P2", "B-3d-P3", "B-3d-P4", "B-3d-P5", "C-3d-P1",
                                          "C-3d-P2", "D-3d",    "B-2d",    "C-2d-P1", "C-2d-P2", "D-2d"};
    CHECK(ids == expect);

    const auto b3 = presets(Family::B, Regime::ThreeD);
    CHECK(b3.size() == 5);
    CHECK(std::count_if(b3.begin(), b3.end(), [](const DictionaryPreset& p) { return p.branch == Branch::Minus; }) == 1);
    CHECK(find_preset("B-3d-P5").branch == Branch::Minus);

    const auto c3 = presets(Family::C, Regime::ThreeD);
    REQUIRE(c3.size() == 2);
    CHECK(c3[0].xi_plus == XiExpr{0.5, 0.0, 0});
    CHECK(c3[0].xi_minus == XiExpr{0.0, 0.0, 0});
    CHECK(c3[1].xi_plus == XiExpr{0.0, 0.0, 0});
    CHECK(c3[1].xi_minus == XiExpr{0.5, 0.0, 0});
    for (const auto& p : c3) {
        CHECK(p.fixed_sites.empty());
        CHECK(p.branch == Branch::Plus);
    }

    const auto d2 = presets(Family::D, Regime::TwoD);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].xi_plus == XiExpr{0.5, 0.0, 0});
    CHECK(d2[0].xi_minus == XiExpr{0.5, 0.0, 0});

    for (const auto& p : all) {
        CHECK(p.scale == (p.regime == Regime::ThreeD ? kPi : 1.0));
        const std::set<std::size_t> allowed{0, 2, 3, 4};
        CHECK(allowed.count(p.fixed_sites.size()) == 1);
        for (const auto& f : p.fixed_sites) CHECK(f.spin == -0.5);
        if (p.regime == Regime::TwoD) CHECK(p.chain_kind() == ChainKind::OpenXXX);
    }

    CHECK_THROWS_WITH_AS(presets(Family::E8, Regime::ThreeD), doctest::Contains("no dictionary"), Rejected);
    CHECK_THROWS_AS(presets(Family::F4, Regime::TwoD), Rejected);
    CHECK_THROWS_AS(find_preset("B-3d-P9"), Rejected);
}

TEST_CASE("boundary expressions")
{
    CHECK(XiExpr{-0.5, 0.5, 0}.to_string() == "-eta/2+1/2");
    CHECK(XiExpr{0.5, 0.0, 0}.to_string() == "eta/2");
    CHECK(XiExpr{0.0, 0.0, 0}.to_string() == "0");
    CHECK(XiExpr{0, 0, 1}.to_string() == "i*inf");
    CHECK(XiExpr{-0.5, 0.5, 0}.value(0.2, 20.0) == cplx(0.4));
    CHECK(XiExpr{0, 0, -1}.value(0.2, 7.0) == cplx(0.0, -7.0));
}

TEST_CASE("chain length from the flavour count")
{
    CHECK(find_preset("B-3d-P1").chain_length(4) == 4);
    CHECK(find_preset("B-3d-P3").chain_length(4) == 6);
    CHECK(find_preset("B-3d-P4").chain_length(2) == 4);
    CHECK(find_preset("C-3d-P1").chain_length(4) == 2);
    CHECK(find_preset("A-3d").chain_length(3) == 3);
    CHECK_THROWS_WITH_AS(find_preset("B-3d-P1").chain_length(3), doctest::Contains("even integer"), Rejected);
}

TEST_CASE("gauge to chain maps")
{
    GaugeTheorySpec a;
    a.family = Family::A;
    a.rank = 2;
    a.masses = {0.3, -0.7};
    a.anti_masses = {1.1, 0.2};
    a.m_adj = 0.9;
    const auto ma = map_gauge_to_chain(find_preset("A-3d"), a);
    CHECK(ma.chain.kind == ChainKind::ClosedXXZ);
    CHECK(ma.chain.M == 2);
    CHECK(ma.chain.L == 2);
    CHECK(ma.chain.eta == doctest::Approx(0.9 / kPi));
    CHECK(ma.scale == kPi);
    const auto back = map_chain_to_gauge(find_preset("A-3d"), ma.chain, 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(back.masses[k] - a.masses[k]) < 1e-12);
        CHECK(std::abs(back.anti_masses[k] - a.anti_masses[k]) < 1e-12);
    }

    for (const auto& p : all_presets()) {
        if (!p.open()) continue;
        GaugeTheorySpec g;
        g.family = p.family;
        g.rank = 2;
        g.masses = {0.4, -1.3, 2.2, 0.05};
        g.m_adj = 0.8;
        const auto m = map_gauge_to_chain(p, g);
        CHECK(m.chain.L == 2 + static_cast<int>(p.fixed_sites.size()));
        CHECK(m.chain.kind == p.chain_kind());
        auto got = map_chain_to_gauge(p, m.chain, 2).masses;
        auto want = g.masses;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-12);
    }

    GaugeTheorySpec odd;
    odd.family = Family::B;
    odd.rank = 1;
    odd.masses = {0.1, 0.2, 0.3};
    odd.m_adj = 0.5;
    CHECK_THROWS_AS(map_gauge_to_chain(find_preset("B-3d-P1"), odd), Rejected);
    odd.family = Family::C;
    CHECK_THROWS_AS(map_gauge_to_chain(find_preset("B-3d-P1"), odd), Rejected);
}

TEST_CASE("every preset certifies its identity")
{
    for (const auto& p : all_presets()) {
        CAPTURE(p.id);
        VerifyOptions o;
        o.samples = 200;
        o.seed = 11;
        const auto r = verify_identity(p, o);
        CHECK(r.pass);
        CHECK(r.max_residual <= 1e-10);
        CHECK(r.samples == 200);
        CHECK(r.branch_used == p.branch);
        CHECK(r.worst.sample >= 0);
    }
}

TEST_CASE("negative branch preset")
{
    VerifyOptions o;
    o.branch = Branch::Plus;
    const auto wrong = verify_identity(find_preset("B-3d-P5"), o);
    CHECK(!wrong.pass);
    CHECK(wrong.max_residual >= 0.1);
    o.branch = Branch::Minus;
    CHECK(verify_identity(find_preset("B-3d-P5"), o).pass);
}

TEST_CASE("i-infinity boundary extrapolation")
{
    VerifyOptions o;
    o.rank = 3;
    o.nf = 4;
    const auto r = verify_identity(find_preset("D-3d"), o);
    REQUIRE(r.cutoffs.size() == 3);
    REQUIRE(r.cutoff_residuals.size() == 3);
    CHECK(r.max_residual <= 1e-6);
    CHECK(r.pass);
}

TEST_CASE("verification is reproducible")
{
    VerifyOptions o;
    o.seed = 99;
    const auto a = verify_identity(find_preset("C-3d-P2"), o);
    const auto b = verify_identity(find_preset("C-3d-P2"), o);
    CHECK(a.max_residual == b.max_residual);
    CHECK(a.worst.sample == b.worst.sample);
    CHECK(a.worst.sigma == b.worst.sigma);
    o.seed = 100;
    CHECK(verify_identity(find_preset("C-3d-P2"), o).worst.sigma != a.worst.sigma);
}

TEST_CASE("calibration")
{
    const auto c = calibrate_preset(Family::C, Regime::ThreeD, default_grid(Family::C, Regime::ThreeD));
    CHECK(c.report.pass);
    CHECK(c.preset.fixed_sites.empty());
    CHECK(c.preset.branch == Branch::Plus);

    auto grid = default_grid(Family::B, Regime::ThreeD);
    grid.xi_pairs = {{XiExpr{-0.5, 0.5, 0}, XiExpr{-0.5, 0.5, 0}}};
    const auto b = calibrate_preset(Family::B, Regime::ThreeD, grid);
    CHECK(b.report.pass);
    REQUIRE(b.preset.fixed_sites.size() == 2);
    CHECK(b.preset.fixed_sites[0].theta == 0.0);
    CHECK(b.preset.fixed_sites[1].theta == 0.0);
    CHECK(b.report.calibration.size() == 26);

    const auto d = calibrate_preset(Family::D, Regime::TwoD, default_grid(Family::D, Regime::TwoD));
    CHECK(d.report.pass);
    CHECK(d.preset.xi_plus == XiExpr{0.5, 0.0, 0});
    CHECK(d.preset.xi_minus == XiExpr{0.5, 0.0, 0});

    auto none = default_grid(Family::C, Regime::ThreeD);
    none.fixed_counts = {3};
    const auto n = calibrate_preset(Family::C, Regime::ThreeD, none);
    CHECK(!n.report.pass);
    CHECK_THROWS_AS(calibrate_preset(Family::A, Regime::ThreeD, default_grid(Family::C, Regime::ThreeD)), Rejected);
}

TEST_CASE("realization comparison")
{
    auto pair = [](Family f, int rank) {
        GaugeTheorySpec g;
        g.family = f;
        g.rank = rank;
        g.masses = {0.35, -0.8};
        g.m_adj = 0.6;
        if (f == Family::A) g.anti_masses = {0.1, 1.2};
        auto gi = g;
        gi.realization = Realization::I;
        return std::pair(gi, g);
    };
    for (Family f : {Family::A, Family::D}) {
        const auto [gi, gii] = pair(f, 2);
        CHECK(duality_compare(gi, gii, 50, 3).pass);
    }
    for (Family f : {Family::B, Family::C}) {
        const auto [gi, gii] = pair(f, 2);
        const auto r = duality_compare(gi, gii, 50, 3);
        CHECK(!r.pass);
        REQUIRE(!r.notes.empty());
        const double stripped = std::stod(r.notes[0].substr(r.notes[0].rfind(' ') + 1));
        CHECK(stripped <= 1e-10);
    }
    auto [gi, gii] = pair(Family::B, 2);
    gii.masses[0] += 0.1;
    CHECK_THROWS_AS(duality_compare(gi, gii, 5, 1), Rejected);
    CHECK_THROWS_AS(duality_compare(gii, gi, 5, 1), Rejected);
}
