#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kokomesh/construct.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/mesh_io.hpp"

using namespace koko;

TEST_CASE("mesh json round trip is exact") {
    Seed seed;
    seed.value = 12;
    MeshCoeffs m = constructIsogonal(seed);
    std::string text = meshToJson(m);
    MeshCoeffs back = meshFromJson(text);
    for (int i = 0; i < 4; ++i) {
        CHECK(back.quads[static_cast<std::size_t>(i)].a == m.quads[static_cast<std::size_t>(i)].a);
        CHECK(back.quads[static_cast<std::size_t>(i)].b == m.quads[static_cast<std::size_t>(i)].b);
        CHECK(back.quads[static_cast<std::size_t>(i)].c == m.quads[static_cast<std::size_t>(i)].c);
        CHECK(back.quads[static_cast<std::size_t>(i)].e == m.quads[static_cast<std::size_t>(i)].e);
        CHECK(back.f[static_cast<std::size_t>(i)] == m.f[static_cast<std::size_t>(i)]);
    }
    REQUIRE(back.classTag.has_value());
    CHECK(*back.classTag == "isogonal");
    REQUIRE(back.meta.has_value());
    CHECK(back.meta->seed == 12);
    CHECK(back.meta->constructor == "isogonal");
    // identical input serializes identically
    CHECK(meshToJson(back) == text);
}

TEST_CASE("parse failures carry the reason") {
    CHECK_THROWS_AS(meshFromJson("not json"), ParseError);
    CHECK_THROWS_AS(meshFromJson("{\"quads\": []}"), ParseError);
    CHECK_THROWS_AS(meshFromJson("{\"quads\": [{}, {}, {}, {}], \"f\": [0,0,0,0]}"), ParseError);
}

TEST_CASE("strict validation names the violated inequality") {
    MeshCoeffs m;
    m.quads = {QuadCoeffs{1.0, 0, 0, -6.0}, QuadCoeffs{}, QuadCoeffs{}, QuadCoeffs{}};
    m.f = {0, 0, 0, 0};
    try {
        validateMeshOrThrow(m);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("|b+c-a-e|") != std::string::npos);
    }
    MeshCoeffs bad;
    bad.f = {0, 0, 0, -1.0}; // boundary excluded
    CHECK_THROWS_AS(validateMeshOrThrow(bad), ParseError);
}

TEST_CASE("transform record survives serialization") {
    MeshCoeffs m;
    m.quads = {QuadCoeffs{0.0, 0.2, 0.3, 0.0}, QuadCoeffs{-0.5, 0, 0, 0.5},
               QuadCoeffs{-0.5, 0, 0, 0.5}, QuadCoeffs{-0.5, 0, 0, 0.5}};
    m.f = {0.0, 0.0, 0.0, 0.0};
    auto [n, rec] = normalize(m);
    std::string text = meshToJson(n, &rec);
    CHECK(text.find("transform") != std::string::npos);
    CHECK(text.find("f_before") != std::string::npos);
    MeshCoeffs back = meshFromJson(text); // extra keys are ignored
    CHECK(std::abs(back.quads[0].a + 0.2) < 1e-15);
}
