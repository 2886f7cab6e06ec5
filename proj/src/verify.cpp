#include "kokomesh/verify.hpp"

#include <algorithm>
#include <cmath>

#include "kokomesh/errors.hpp"
#include "kokomesh/rng.hpp"

namespace koko {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SliceRoots {
    ProjPoint r0, r1;
    bool free = false;
    bool dead = false;
};

// roots in y of g(x, .) read as a homogeneous quadratic
// (a X^2 + c W^2) Y^2 + (X W) Y Z + (b X^2 + e W^2) Z^2
SliceRoots sliceRoots(const QuadCoeffs& q, const ProjPoint& x) {
    SliceRoots out;
    cplx X = x.num(), W = x.den();
    cplx A = q.a * X * X + q.c * W * W;
    cplx B = X * W;
    cplx C = q.b * X * X + q.e * W * W;
    double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    double quadScale = std::max({1.0, std::abs(q.a), std::abs(q.b), std::abs(q.c), std::abs(q.e)});
    if (scale <= 1e-10 * quadScale) {
        out.free = true; // the slice vanished identically: y is unconstrained
        return out;
    }
    if (std::abs(A) <= 1e-14 * scale) {
        out.r0 = ProjPoint::infinity();
        if (std::abs(B) <= 1e-14 * scale) {
            out.r1 = ProjPoint::infinity();
        } else {
            out.r1 = ProjPoint::fromHomogeneous(-C, B);
        }
        return out;
    }
    cplx D = std::sqrt(B * B - 4.0 * A * C);
    cplx qq = (std::abs(B + D) >= std::abs(B - D)) ? -(B + D) / 2.0 : -(B - D) / 2.0;
    if (std::abs(qq) == 0.0) {
        out.r0 = ProjPoint(cplx(0.0));
        out.r1 = ProjPoint(cplx(0.0));
        return out;
    }
    out.r0 = ProjPoint::fromHomogeneous(qq, A);
    out.r1 = ProjPoint::fromHomogeneous(C, qq);
    return out;
}

bool pointIsRealish(const ProjPoint& p) { return p.isFree() || p.isReal(1e-9); }

} // namespace

ChainResult chaseCycle(const MeshCoeffs& m, const ProjPoint& x1, int combo, bool allowComplex) {
    ChainResult res;
    ProjPoint x = x1;
    for (int i = 0; i < 4; ++i) {
        res.x[static_cast<std::size_t>(i)] = x;
        ProjPoint y;
        if (x.isFree()) {
            y = ProjPoint::unconstrained();
        } else {
            SliceRoots roots = sliceRoots(m.quads[static_cast<std::size_t>(i)], x);
            if (roots.dead) return res;
            if (roots.free) {
                y = ProjPoint::unconstrained();
            } else {
                y = ((combo >> i) & 1) ? roots.r1 : roots.r0;
                if (!allowComplex && !pointIsRealish(y)) return res;
            }
        }
        res.y[static_cast<std::size_t>(i)] = y;
        x = hingeMap(m.f[static_cast<std::size_t>(i)])(y);
    }
    res.back = x;
    res.ok = true;
    return res;
}

namespace {

struct SweepResult {
    double fraction = 0.0;
    int usable = 0;
    int closing = 0;
    std::array<int, 16> histogram{};
    std::vector<double> residuals;
    std::vector<std::pair<int, ProjPoint>> frozen; // local coordinate index 2..4
};

SweepResult sweepOnce(const MeshCoeffs& m, const TraceOptions& opts) {
    SweepResult out;
    // concrete coordinate values of every closing combo, per closing sample
    std::array<std::vector<std::vector<ProjPoint>>, 3> closingVals;
    const int N = opts.samples;
    for (int k = 0; k < N; ++k) {
        double alpha = -kPi + (k + 0.5) * 2.0 * kPi / N;
        ProjPoint x1(std::tan(alpha / 2.0));
        ++out.usable;
        double best = 1e300;
        bool closed = false;
        std::array<std::vector<ProjPoint>, 3> here;
        for (int combo = 0; combo < 16; ++combo) {
            ChainResult cr = chaseCycle(m, x1, combo, opts.allowComplex);
            if (!cr.ok) continue;
            double d = chordal(cr.back, x1);
            if (d <= opts.tol) {
                ++out.histogram[static_cast<std::size_t>(combo)];
                closed = true;
                for (int j = 1; j < 4; ++j) {
                    const ProjPoint& v = cr.x[static_cast<std::size_t>(j)];
                    if (!v.isFree()) here[static_cast<std::size_t>(j - 1)].push_back(v);
                }
            }
            best = std::min(best, d);
        }
        if (closed) {
            ++out.closing;
            out.residuals.push_back(best);
            for (int j = 0; j < 3; ++j)
                closingVals[static_cast<std::size_t>(j)].push_back(
                    std::move(here[static_cast<std::size_t>(j)]));
        }
    }
    if (out.usable > 0)
        out.fraction = static_cast<double>(out.closing) / static_cast<double>(out.usable);
    // A coordinate is frozen when some value is attained by a closing
    // branch at essentially every closing sample: the variance of the
    // per-sample nearest values stays below 1e-9. Taking the minimum over
    // closing combos keeps coexisting branches from masking each other.
    for (int j = 0; j < 3; ++j) {
        const auto& samples = closingVals[static_cast<std::size_t>(j)];
        if (samples.size() < 5 || samples.front().empty()) continue;
        for (const ProjPoint& cand : samples.front()) {
            bool dup = false;
            for (const auto& [idx, val] : out.frozen)
                if (idx == j + 2 && chordal(val, cand) < 1e-6) dup = true;
            if (dup) continue;
            double var = 0.0;
            for (const auto& vals : samples) {
                double mind = 1e300;
                for (const ProjPoint& v : vals) mind = std::min(mind, chordal(v, cand));
                if (vals.empty()) mind = 0.0; // only unconstrained combos closed here
                var += mind * mind;
            }
            var /= static_cast<double>(samples.size());
            if (var < 1e-9) out.frozen.emplace_back(j + 2, cand);
        }
    }
    return out;
}

} // namespace

TraceReport traceOracle(const MeshCoeffs& m, const TraceOptions& opts) {
    TraceReport rep;
    SweepResult first = sweepOnce(m, opts);
    rep.closureFraction = first.fraction;
    rep.usable = first.usable;
    rep.closing = first.closing;
    rep.branchHistogram = first.histogram;
    rep.bestFraction = first.fraction;
    rep.sweepRotation = 0;
    SweepResult* active = &first;
    SweepResult other;
    if (first.fraction < 0.95) {
        for (int r = 1; r < 4; ++r) {
            SweepResult s = sweepOnce(rotated(m, r), opts);
            if (s.fraction > rep.bestFraction) {
                rep.bestFraction = s.fraction;
                rep.sweepRotation = r;
                other = std::move(s);
                active = &other;
            }
        }
    }
    std::vector<double>& residuals = active->residuals;
    if (!residuals.empty()) {
        std::sort(residuals.begin(), residuals.end());
        rep.maxResidual = residuals.back();
        rep.medianResidual = residuals[residuals.size() / 2];
    }
    for (const auto& [localIdx, val] : active->frozen)
        rep.frozenCoords.emplace_back((localIdx - 1 + rep.sweepRotation) % 4 + 1, val);
    return rep;
}

ScalarCheckResult scalarCheck(const MeshCoeffs& m, double tol) {
    std::array<std::array<cplx, 2>, 4> ks;
    for (int i = 0; i < 4; ++i) {
        const QuadCoeffs& q = m.quads[static_cast<std::size_t>(i)];
        if (std::abs(q.b) > 1e-10 || std::abs(q.c) > 1e-10 || q.a * q.e == 0.0)
            throw NotIsogonalError("scalarCheck needs four isograms");
        cplx s = std::sqrt(cplx(1.0 - 4.0 * q.a * q.e));
        ks[static_cast<std::size_t>(i)] = {(-1.0 + s) / (2.0 * q.a), (-1.0 - s) / (2.0 * q.a)};
    }
    ScalarCheckResult out;
    for (int combo = 0; combo < 16; ++combo) {
        ProjMap prod{};
        std::array<int, 4> signs{};
        for (int i = 0; i < 4; ++i) {
            int bit = (combo >> i) & 1;
            signs[static_cast<std::size_t>(i)] = bit;
            prod = isogramMap(ks[static_cast<std::size_t>(i)][static_cast<std::size_t>(bit)],
                              m.f[static_cast<std::size_t>(i)]) *
                   prod;
        }
        if (isScalar(prod, tol)) {
            out.scalar = true;
            out.signs = signs;
            out.product = prod;
            out.scalarValue = (prod.u + prod.t) / 2.0;
            return out;
        }
    }
    return out;
}

namespace {

// For a singular quad the quadratic splits off a coordinate factor whose
// whole contribution to the coupling resultant is a single-variable
// polynomial; building from the deltoid core removes those factors
// exactly instead of deflating them numerically.
BiPoly quadCore(const QuadCoeffs& q) {
    if (classifyQuad(q).singular) return deltoidFactor(q).poly();
    return gPoly(q);
}

} // namespace

bool resultantGcdCheck(const MeshCoeffs& m, const TraceReport* trace, int samples, double tol) {
    TraceReport local;
    if (trace == nullptr) {
        local = traceOracle(m, {});
        trace = &local;
    }
    if (trace->hasConstantBranch())
        throw HypothesisViolatedError("gcd criterion needs a constant-branch-free zero set; use the trace oracle");
    auto [norm, rec] = normalize(m);
    std::array<BiPoly, 4> G;
    for (int i = 0; i < 4; ++i)
        G[static_cast<std::size_t>(i)] = resultant(quadCore(norm.quads[static_cast<std::size_t>(i)]),
                                                   hPoly(norm.f[static_cast<std::size_t>(i)]));
    BiPoly R1 = resultant(G[0], G[1]);            // (x1, x3)
    BiPoly R3 = resultant(G[2], G[3]).swapped();  // built in (x3, x1)
    R1 = stripUnivariateFactors(R1);
    R3 = stripUnivariateFactors(R3);
    if (R1.isZero() || R3.isZero()) return false;
    return commonFactorHeuristic(R1, R3, samples, tol).shared;
}

// --- factor shapes ----------------------------------------------------------

BiPoly FactorShape::poly() const {
    BiPoly g;
    switch (j) {
        case 0: return gPoly(full);
        case 1:
            g.setCoeff(1, 1, 1.0);
            g.setCoeff(0, 0, -k);
            break;
        case 3:
            g.setCoeff(1, 2, a);
            g.setCoeff(1, 0, b);
            g.setCoeff(0, 1, 1.0);
            break;
        case 5:
            g.setCoeff(2, 1, a);
            g.setCoeff(0, 1, c);
            g.setCoeff(1, 0, 1.0);
            break;
        default: throw Error("unknown factor selector");
    }
    g.trim();
    return g;
}

std::pair<int, int> FactorShape::expectedDegree() const {
    switch (j) {
        case 0: return {2, 2};
        case 1: return {1, 1};
        case 3: return {1, 2};
        case 5: return {2, 1};
        default: throw Error("unknown factor selector");
    }
}

FactorShape isogramFactor(const QuadCoeffs& q, int which) {
    auto [k1, k2] = factorIsogram(q);
    FactorShape s;
    s.j = 1;
    s.k = which == 0 ? k1 : k2;
    return s;
}

FactorShape deltoidFactor(const QuadCoeffs& q) {
    QuadClass cls = classifyQuad(q);
    FactorShape s;
    if (cls.shape == QuadShape::DeltoidIII) {
        s.j = 3;
        s.a = q.a;
        s.b = q.b;
    } else if (cls.shape == QuadShape::DeltoidV) {
        s.j = 5;
        s.a = q.a;
        s.c = q.c;
    } else {
        throw ShapeMismatchError("deltoidFactor needs a deltoid in normalized form");
    }
    return s;
}

BiPoly ReducedCoupling::GFirst() const { return resultant(first.poly(), hPoly(f1)); }
BiPoly ReducedCoupling::GSecond() const { return resultant(second.poly(), hPoly(f2)); }

BiPoly ReducedCoupling::smallResultant() const { return resultant(GFirst(), second.poly()); }
BiPoly ReducedCoupling::bigResultant() const { return resultant(GFirst(), GSecond()); }

// --- reducibility predicates -------------------------------------------------

BiPoly LinearFactor::poly() const {
    BiPoly out;
    out.setCoeff(1, 1, p);
    out.setCoeff(0, 1, q);
    out.setCoeff(1, 0, -m);
    out.setCoeff(0, 0, -n);
    out.trim();
    return out;
}

LinearFactor system1Factor(double a1, double b1, double a2, double c2, double f1) {
    (void)b1;
    (void)c2;
    double P = f1 * (f1 * f1 - 1.0);
    double Q = (f1 * f1 - 1.0) * (f1 * f1 - 1.0) - 4.0 * f1 * f1;
    LinearFactor lf;
    lf.p = 8.0 * P * a1 * a2;
    lf.q = -Q * a2;
    lf.m = -Q * a1;
    lf.n = -2.0 * P;
    return lf;
}

LinearFactor system2Factor(double a1, double a2) {
    // (a1 x - a2 y) written as (p x + q) y - (m x + n)
    LinearFactor lf;
    lf.p = 0.0;
    lf.q = -a2;
    lf.m = -a1;
    lf.n = 0.0;
    return lf;
}

LinearFactor system3Factor(double a1, double c2) {
    // (a1 x + c2 y) written as (p x + q) y - (m x + n)
    LinearFactor lf;
    lf.p = 0.0;
    lf.q = c2;
    lf.m = -a1;
    lf.n = 0.0;
    return lf;
}

LinearFactor system4FactorLinear(double a1, double a2) {
    LinearFactor lf;
    lf.p = 0.0;
    lf.q = a2;
    lf.m = a1;
    lf.n = 0.0;
    return lf;
}

LinearFactor system4FactorIsogram(double k) {
    LinearFactor lf;
    lf.p = 1.0;
    lf.q = 0.0;
    lf.m = 0.0;
    lf.n = k;
    return lf;
}

namespace {

// max relative deviation of `target` from `r` at random points
double compareOnPoints(const BiPoly& r, const BiPoly& target, int points = 50,
                       std::uint64_t seed = 12345) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        cplx x = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28318));
        cplx y = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28318));
        cplx rv = r.eval(x, y);
        cplx tv = target.eval(x, y);
        double scale = std::max({std::abs(rv), std::abs(tv), r.maxAbsCoeff()});
        worst = std::max(worst, std::abs(rv - tv) / scale);
    }
    return worst;
}

} // namespace

ReducibilityResult reducibility35(const QuadCoeffs& q1, const QuadCoeffs& q2, double f1,
                                  double tol) {
    if (std::abs(q1.c) > tol || std::abs(q1.e) > tol || q1.a == 0.0 || q1.b == 0.0)
        throw ShapeMismatchError("first quad must have c = e = 0 with a, b nonzero");
    if (std::abs(q2.b) > tol || std::abs(q2.e) > tol || q2.a == 0.0 || q2.c == 0.0)
        throw ShapeMismatchError("second quad must have b = e = 0 with a, c nonzero");
    const double a1 = q1.a, b1 = q1.b, a2 = q2.a, c2 = q2.c;
    ReducibilityResult out;
    ReducedCoupling rc;
    rc.first = FactorShape{3, {}, a1, b1, 0.0, 0.0};
    rc.second = FactorShape{5, {}, a2, 0.0, c2, 0.0};
    rc.f1 = f1;
    double prodScale = std::max({std::abs(a1 * c2), std::abs(a2 * b1), 1.0});
    if (std::abs(b1 + a1) <= tol && std::abs(c2 + a2) <= tol) {
        out.system = CouplingSystem::System1;
        LinearFactor lf = system1Factor(a1, b1, a2, c2, f1);
        out.factor = lf.poly();
        BiPoly r = rc.smallResultant();
        out.residual = compareOnPoints(r, -(lf.poly() * lf.poly()));
    } else if (std::abs(a1 * c2 - a2 * b1) <= tol * prodScale && std::abs(f1) <= tol) {
        out.system = CouplingSystem::System2;
        LinearFactor lf = system2Factor(a1, a2);
        out.factor = lf.poly();
        double k = b1 / a1;
        BiPoly r = rc.smallResultant();
        out.residual = compareOnPoints(r, lf.poly() * lf.poly() * cplx(k));
    } else if (std::abs(a1 * a2 - b1 * c2) <= tol * prodScale && std::abs(f1 - 1.0) <= tol) {
        out.system = CouplingSystem::System3;
        LinearFactor lf = system3Factor(a1, c2);
        out.factor = lf.poly();
        double k = b1 / a1;
        BiPoly r = rc.smallResultant();
        out.residual = compareOnPoints(r, lf.poly() * lf.poly() * cplx(16.0 * k));
    } else {
        return out;
    }
    if (out.residual > 1e-9)
        throw FactorExtractionFailedError("stated factorization does not reproduce the coupling resultant");
    return out;
}

ReducibilityResult reducibility53(const QuadCoeffs& q1, const QuadCoeffs& q2, double f1,
                                  double tol) {
    if (std::abs(q1.b) > tol || std::abs(q1.e) > tol || q1.a == 0.0 || q1.c == 0.0)
        throw ShapeMismatchError("first quad must have b = e = 0 with a, c nonzero");
    if (std::abs(q2.c) > tol || std::abs(q2.e) > tol || q2.a == 0.0 || q2.b == 0.0)
        throw ShapeMismatchError("second quad must have c = e = 0 with a, b nonzero");
    const double a1 = q1.a, c1 = q1.c, a2 = q2.a, b2 = q2.b;
    ReducibilityResult out;
    double prodScale = std::max({std::abs(a1 * c1), std::abs(a2 * b2), 1.0});
    if (std::abs(a1 * c1 - a2 * b2) <= tol * prodScale && std::abs(f1) <= tol) {
        out.system = CouplingSystem::System1;
        double k = b2 / a1;
        LinearFactor lin = system4FactorLinear(a1, a2);
        BiPoly fac = lin.poly() * system4FactorIsogram(k).poly();
        out.factor = lin.poly();
        ReducedCoupling rc;
        rc.first = FactorShape{5, {}, a1, 0.0, c1, 0.0};
        rc.second = FactorShape{3, {}, a2, b2, 0.0, 0.0};
        rc.f1 = f1;
        BiPoly r = rc.smallResultant();
        out.residual = compareOnPoints(r, fac);
        if (out.residual > 1e-9)
            throw FactorExtractionFailedError("stated factorization does not reproduce the coupling resultant");
    } else if (std::abs(a1 * c1 * a2 * b2 - 1.0 / 16.0) <= tol * std::max(1.0, prodScale) &&
               std::abs(f1 - 1.0) <= tol) {
        out.system = CouplingSystem::RealInfeasible; // reducible over C, no real branch
    }
    return out;
}

bool combinationCheck(int j1, int j2, int j3, int j4) {
    for (int j : {j1, j2, j3, j4})
        if (j != 1 && j != 3 && j != 5) throw Error("factor selectors must be in {1,3,5}");
    auto key = [](int a, int b) { return std::pair<int, int>{std::min(a, b), std::max(a, b)}; };
    std::pair<int, int> p1 = key(j1, j2);
    std::pair<int, int> p2 = key(j3, j4);
    auto match = [&](std::pair<int, int> a, std::pair<int, int> b) {
        return (p1 == a && p2 == b) || (p1 == b && p2 == a);
    };
    return match({1, 3}, {1, 5}) || match({3, 5}, {3, 5});
}

RatioResult ratioConstancy(const ReducedCoupling& s1, const ReducedCoupling& s2, int grid,
                           double tol) {
    RatioResult out;
    BiPoly R1 = s1.bigResultant();
    BiPoly R2 = s2.bigResultant();
    // align the second resultant with the first one's variable plane
    if (((s2.firstQuad - s1.firstQuad) % 4 + 4) % 4 == 2) R2 = R2.swapped();
    if (R1.isZero() || R2.isZero()) return out;
    double minMag = 1e300, maxMag = 0.0;
    double minPh = 1e300, maxPh = -1e300;
    cplx ref{0.0};
    int used = 0;
    for (int i = 0; i < grid && used < grid * grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            double u = -2.0 + 4.0 * (i + 0.37) / grid;
            double v = -2.0 + 4.0 * (j + 0.61) / grid;
            cplx r2 = R2.eval(u, v);
            if (std::abs(r2) < 1e-10 * R2.maxAbsCoeff()) continue; // degenerate point
            cplx r1 = R1.eval(u, v);
            cplx ratio = r1 / r2;
            if (used == 0) ref = ratio;
            ++used;
            double mag = std::abs(ratio);
            minMag = std::min(minMag, mag);
            maxMag = std::max(maxMag, mag);
            double ph = std::arg(ratio / ref);
            minPh = std::min(minPh, ph);
            maxPh = std::max(maxPh, ph);
        }
    }
    if (used < grid) return out;
    out.value = ref;
    out.magnitudeSpread = (maxMag - minMag) / std::max(maxMag, 1e-300);
    out.phaseSpread = maxPh - minPh;
    out.constant = out.magnitudeSpread < tol && out.phaseSpread < tol;
    return out;
}

} // namespace koko
