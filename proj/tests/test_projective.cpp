#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kokomesh/projective.hpp"
#include "kokomesh/rng.hpp"

using namespace koko;

TEST_CASE("apply handles finite points and infinity") {
    ProjMap id{};
    CHECK(chordal(id(ProjPoint(3.7)), ProjPoint(3.7)) < 1e-15);

    ProjMap inv2{0.0, 2.0, 1.0, 0.0}; // x -> 2/x
    CHECK(chordal(inv2(ProjPoint(4.0)), ProjPoint(0.5)) < 1e-15);
    CHECK(chordal(inv2(ProjPoint::infinity()), ProjPoint(0.0)) < 1e-15);
    CHECK(chordal(inv2(ProjPoint(0.0)), ProjPoint::infinity()) < 1e-15);
}

TEST_CASE("hinge map matches its rational form") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        double f = rng.uniform(-0.99, 0.99);
        double x = rng.uniform(-4.0, 4.0);
        ProjMap back = hingeMap(f, HingeDirection::Backward);
        double want = ((1 - f * f) * x + 2 * f) / (1 - f * f - 2 * f * x);
        CHECK(chordal(back(ProjPoint(x)), ProjPoint(want)) < 1e-12);
    }
    // f = 0 is the identity, f = 1 is y -> -1/y
    CHECK(isScalar(hingeMap(0.0)));
    ProjMap h1 = hingeMap(1.0);
    CHECK(chordal(h1(ProjPoint(2.0)), ProjPoint(-0.5)) < 1e-15);
    // backward composed with forward is the identity
    for (double f : {-0.7, 0.2, 1.0}) {
        ProjMap round = hingeMap(f, HingeDirection::Backward) * hingeMap(f, HingeDirection::Forward);
        CHECK(isScalar(round, 1e-12));
    }
}

TEST_CASE("isogram map structure") {
    // k = 2, f = 0 is x -> 2/x
    ProjMap n = isogramMap(2.0, 0.0);
    CHECK(std::abs(n.u) < 1e-15);
    CHECK(std::abs(n.v - cplx(2.0)) < 1e-15);
    CHECK(std::abs(n.s - cplx(1.0)) < 1e-15);
    CHECK(std::abs(n.t) < 1e-15);

    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        double k = rng.nonzero(-3.0, 3.0, 0.1);
        double f = rng.uniform(-0.99, 1.0);
        ProjMap m = isogramMap(k, f);
        // membership: u v = -s t
        CHECK(std::abs(m.u * m.v + m.s * m.t) < 1e-12 * m.frobenius() * m.frobenius());
        // equals hinge applied to k/x
        double x = rng.nonzero(-4.0, 4.0, 0.05);
        ProjPoint lhs = m(ProjPoint(x));
        ProjPoint rhs = hingeMap(f)(ProjPoint(k / x));
        CHECK(chordal(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("inverse of an isogram map satisfies the dual constraint") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        ProjMap m = isogramMap(rng.nonzero(-3.0, 3.0, 0.1), rng.uniform(-0.99, 1.0));
        ProjMap inv = m.adjugate();
        CHECK(std::abs(inv.u * inv.s + inv.v * inv.t) < 1e-12 * inv.frobenius() * inv.frobenius());
    }
}

TEST_CASE("compose matches successive application, including infinity") {
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
        ProjMap a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        ProjMap b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (std::abs(a.det()) < 1e-3 || std::abs(b.det()) < 1e-3) continue;
        ProjPoint x = (i % 17 == 0) ? ProjPoint::infinity() : ProjPoint(rng.uniform(-5, 5));
        std::vector<ProjMap> seq = {b, a};
        ProjPoint lhs = compose(seq)(x);
        ProjPoint rhs = a(b(x));
        CHECK(chordal(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("fourfold product of the k=2 involution is scalar") {
    ProjMap n{0.0, 2.0, 1.0, 0.0};
    ProjMap prod = n * n * n * n;
    CHECK(isScalar(prod));
    CHECK(std::abs(prod.u - cplx(4.0)) < 1e-14);
    CHECK(std::abs(prod.t - cplx(4.0)) < 1e-14);

    CHECK(isScalar(ProjMap{}));
    CHECK_FALSE(isScalar(ProjMap{1.0, 1.0, 0.0, 1.0}));
}

TEST_CASE("half-angle solver") {
    CHECK(solveHalfAngle(ProjPoint(0.0)) == 0.0);
    CHECK(solveHalfAngle(ProjPoint::infinity()) == 1.0);
    double f = solveHalfAngle(ProjPoint(2.0));
    CHECK(std::abs(f - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-12);
    CHECK(std::abs(2 * f / (1 - f * f) - 2.0) < 1e-12);
}

TEST_CASE("half-angle map is a bijection onto the projective reals") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double f = rng.uniform(-0.999, 1.0);
        double F = 2 * f / (1 - f * f);
        ProjPoint Fp = (std::abs(1 - f * f) < 1e-14) ? ProjPoint::infinity() : ProjPoint(F);
        CHECK(std::abs(solveHalfAngle(Fp) - f) < 1e-12);
        // doubled-angle identity
        double alpha = std::atan(f);
        CHECK(std::abs(std::tan(2 * alpha) - F) < 1e-9 * std::max(1.0, std::abs(F)));
    }
}

TEST_CASE("half-angle root pair solves the doubled relation") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        double A = rng.uniform(-5.0, 5.0);
        auto [F1, F2] = halfAngleRoots(ProjPoint(A));
        for (const ProjPoint& F : {F1, F2}) {
            if (F.isInfinite()) {
                CHECK(std::abs(A) < 1e-12);
                continue;
            }
            double Fv = F.realValue();
            CHECK(std::abs(2 * Fv / (1 - Fv * Fv) - A) < 1e-8 * std::max(1.0, std::abs(A)));
        }
    }
}
