#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kokomesh/bipoly.hpp"
#include "kokomesh/bricard.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/rng.hpp"

using namespace koko;

namespace {

BiPoly xyMinus(double k) {
    BiPoly p;
    p.setCoeff(1, 1, 1.0);
    p.setCoeff(0, 0, -k);
    p.trim();
    return p;
}

double evalDiff(const BiPoly& a, const BiPoly& b, int pts = 20) {
    Rng rng(5);
    double worst = 0.0;
    for (int i = 0; i < pts; ++i) {
        cplx x = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28));
        cplx y = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28));
        cplx va = a.eval(x, y), vb = b.eval(x, y);
        worst = std::max(worst, std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1.0}));
    }
    return worst;
}

} // namespace

TEST_CASE("bidegree reads off the exponents") {
    BiPoly p; // x^2 y^2 + 1
    p.setCoeff(2, 2, 1.0);
    p.setCoeff(0, 0, 1.0);
    p.trim();
    CHECK(p.bidegree() == std::pair<int, int>{2, 2});

    CHECK(xyMinus(2.0).bidegree() == std::pair<int, int>{1, 1});

    CHECK_THROWS_AS(BiPoly{}.bidegree(), ZeroPolynomialError);
}

TEST_CASE("bidegree of a deltoid-iii factor after the hinge elimination") {
    // a x y^2 + b x + y against the hinge: degrees carry over as (1, 2)
    BiPoly g3;
    g3.setCoeff(1, 2, 0.7);
    g3.setCoeff(1, 0, -0.4);
    g3.setCoeff(0, 1, 1.0);
    g3.trim();
    BiPoly G = resultant(g3, hPoly(0.3));
    CHECK(G.bidegree() == std::pair<int, int>{1, 2});
}

TEST_CASE("resultant with a linear second argument is substitution") {
    // Res(x y - 2, y - z; y) = x z - 2
    BiPoly p = xyMinus(2.0);
    BiPoly q; // y - z
    q.setCoeff(1, 0, 1.0);
    q.setCoeff(0, 1, -1.0);
    q.trim();
    BiPoly r = resultant(p, q);
    BiPoly expect = xyMinus(2.0); // same shape in (x, z)
    CHECK(evalDiff(r, expect) < 1e-14);
}

TEST_CASE("resultant against the half-turn hinge") {
    // f = 1 forces y = -1/z; x y = 2 becomes a multiple of x + 2 z
    BiPoly p = xyMinus(2.0);
    BiPoly r = resultant(p, hPoly(1.0));
    REQUIRE(r.bidegree() == std::pair<int, int>{1, 1});
    // proportional to x + 2 z
    cplx cx = r.coeff(1, 0), cz = r.coeff(0, 1);
    CHECK(std::abs(cz / cx - 2.0) < 1e-12);
    CHECK(std::abs(r.coeff(0, 0)) < 1e-12);
    CHECK(std::abs(r.coeff(1, 1)) < 1e-12);
}

TEST_CASE("resultant with the identity hinge renames the variable") {
    QuadCoeffs q{-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0};
    BiPoly G = resultant(gPoly(q), hPoly(0.0));
    // scalar multiple of g(x, z)
    BiPoly g = gPoly(q);
    cplx ratio = G.coeff(1, 1) / g.coeff(1, 1);
    CHECK(evalDiff(G, g * ratio) < 1e-13);
}

TEST_CASE("degenerate input raises") {
    BiPoly p = xyMinus(2.0);
    BiPoly constant = BiPoly::constant(3.0);
    CHECK_THROWS_AS(resultant(p, constant), DegenerateLeadingCoefficientError);
}

TEST_CASE("discriminant of a quadratic in y") {
    // y^2 + x y + 1 -> x^2 - 4
    BiPoly p;
    p.setCoeff(0, 2, 1.0);
    p.setCoeff(1, 1, 1.0);
    p.setCoeff(0, 0, 1.0);
    p.trim();
    BiPoly d = discriminantIn(p, Var::Y);
    CHECK(std::abs(d.coeff(2, 0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(d.coeff(0, 0) - cplx(-4.0)) < 1e-14);
    CHECK(std::abs(d.coeff(1, 0)) < 1e-14);

    CHECK_THROWS_AS(discriminantIn(xyMinus(1.0), Var::Y), NotQuadraticError);
}

TEST_CASE("discriminant of a deltoid-iii factor in y") {
    // a x y^2 + y + b x viewed in y: 1 - 4 a b x^2
    double a = 0.83, b = -0.37;
    BiPoly g3;
    g3.setCoeff(1, 2, a);
    g3.setCoeff(1, 0, b);
    g3.setCoeff(0, 1, 1.0);
    g3.trim();
    BiPoly d = discriminantIn(g3, Var::Y);
    CHECK(std::abs(d.coeff(0, 0) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(d.coeff(2, 0) - cplx(-4.0 * a * b)) < 1e-13);
}

TEST_CASE("common factor heuristic detects shared and disjoint loci") {
    BiPoly shared = xyMinus(2.0);
    BiPoly xMinusY;
    xMinusY.setCoeff(1, 0, 1.0);
    xMinusY.setCoeff(0, 1, -1.0);
    xMinusY.trim();

    BiPoly r1 = shared;
    BiPoly r3 = shared * xMinusY;
    CHECK(commonFactorHeuristic(r1, r3).shared);
    CHECK(commonFactorHeuristic(r3, r1).shared); // symmetric

    BiPoly other = xyMinus(3.0);
    CHECK_FALSE(commonFactorHeuristic(r1, other).shared);
    CHECK_FALSE(commonFactorHeuristic(other, r1).shared);
}

TEST_CASE("single-variable factors are stripped") {
    BiPoly core = xyMinus(2.0);
    BiPoly ux; // (x - 0.7)(x + 1.3)
    ux.setCoeff(2, 0, 1.0);
    ux.setCoeff(1, 0, 0.6);
    ux.setCoeff(0, 0, -0.91);
    ux.trim();
    BiPoly uy; // y + 0.4
    uy.setCoeff(0, 1, 1.0);
    uy.setCoeff(0, 0, 0.4);
    uy.trim();
    BiPoly dressed = core * ux * uy;
    BiPoly stripped = stripUnivariateFactors(dressed);
    REQUIRE(stripped.bidegree() == std::pair<int, int>{1, 1});
    cplx ratio = stripped.coeff(1, 1) / core.coeff(1, 1);
    CHECK(evalDiff(stripped, core * ratio) < 1e-9);
}

TEST_CASE("roots of small polynomials") {
    // (t - 1)(t - 2)(t - 3)
    std::vector<cplx> c = {-6.0, 11.0, -6.0, 1.0};
    auto roots = polyRoots(c);
    REQUIRE(roots.size() == 3);
    double found = 0;
    for (double want : {1.0, 2.0, 3.0})
        for (cplx r : roots)
            if (std::abs(r - want) < 1e-9) found += 1;
    CHECK(found == 3);
}

TEST_CASE("coupling resultant degrees follow the factor shapes") {
    // shapes: 0 -> (2,2), 1 -> (1,1), 3 -> (1,2), 5 -> (2,1)
    Rng rng(77);
    auto checkShape = [&](int j, std::pair<int, int> want) {
        for (int trial = 0; trial < 250; ++trial) {
            double f = rng.uniform(-0.999, 1.0);
            BiPoly g;
            if (j == 0) {
                QuadCoeffs q{rng.nonzero(), rng.nonzero(), rng.nonzero(), rng.nonzero()};
                if (!validate(q).ok) continue;
                g = gPoly(q);
            } else if (j == 1) {
                g.setCoeff(1, 1, 1.0);
                g.setCoeff(0, 0, -rng.nonzero());
            } else if (j == 3) {
                g.setCoeff(1, 2, rng.nonzero());
                g.setCoeff(1, 0, rng.nonzero());
                g.setCoeff(0, 1, 1.0);
            } else {
                g.setCoeff(2, 1, rng.nonzero());
                g.setCoeff(0, 1, rng.nonzero());
                g.setCoeff(1, 0, 1.0);
            }
            g.trim();
            BiPoly G = resultant(g, hPoly(f));
            CHECK(G.bidegree() == want);
        }
    };
    checkShape(0, {2, 2});
    checkShape(1, {1, 1});
    checkShape(3, {1, 2});
    checkShape(5, {2, 1});
}

TEST_CASE("identity-hinge resultant equals substitution at random points") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        QuadCoeffs q{rng.nonzero(), rng.nonzero(), rng.nonzero(), rng.nonzero()};
        if (!validate(q).ok) continue;
        BiPoly G = resultant(gPoly(q), hPoly(0.0));
        BiPoly g = gPoly(q);
        cplx ratio = G.coeff(1, 1) / g.coeff(1, 1);
        CHECK(evalDiff(G, g * ratio) < 1e-12);
    }
}
