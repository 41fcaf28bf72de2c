#include "bgl/report.hpp"

#include <doctest.h>

using namespace bgl;

TEST_CASE("derived seeds are stable and distinct")
{
    CHECK(derive_seed(42, 3) == derive_seed(42, 3));
    CHECK(derive_seed(42, 3) != derive_seed(42, 4));
    CHECK(derive_seed(42, 3) != derive_seed(43, 3));
}

TEST_CASE("report envelope")
{
    const auto j = envelope("roots", to_json(build_root_system(Family::F4, 4)));
    auto it = j.begin();
    CHECK(it.key() == "schema_version");
    CHECK(it.value() == kSchemaVersion);
    ++it;
    CHECK(it.key() == "kind");
    CHECK(j["count"] == 48);
    CHECK(to_json(cplx(1.5, -2.0)) == Json::array({1.5, -2.0}));
}

TEST_CASE("root count criterion")
{
    const auto c = check_root_counts();
    CHECK(c.pass);
    CHECK(c.metric == 0.0);
    CHECK(c.details.size() == 28);
}

TEST_CASE("criteria are reproducible per seed")
{
    CHECK(to_json(check_degeneration(5)).dump() == to_json(check_degeneration(5)).dump());
    CHECK(to_json(check_special_functions(5)).dump() != to_json(check_special_functions(6)).dump());
    const auto d = check_duality(1);
    CHECK(!d.pass);
    CHECK(d.details.size() == 6);
}
