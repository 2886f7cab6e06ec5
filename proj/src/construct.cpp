#include "kokomesh/construct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "kokomesh/errors.hpp"
#include "kokomesh/rng.hpp"
#include "kokomesh/verify.hpp"

namespace koko {

namespace {

constexpr int kVerifySamples = 400;

double pinned(const Seed& seed, const std::string& name, std::function<double()> draw) {
    auto it = seed.params.find(name);
    if (it != seed.params.end()) return it->second;
    return draw();
}

bool isPinned(const Seed& seed, const std::string& name) { return seed.params.count(name) != 0; }

// sign bits: explicit vector wins, otherwise lexicographic enumeration
struct SignPlan {
    const Seed& seed;
    int nbits;
    bool enumerate;
    explicit SignPlan(const Seed& s, int n) : seed(s), nbits(n), enumerate(!s.signs.has_value()) {}
    int combos() const { return enumerate ? (1 << nbits) : 1; }
    int bit(int combo, int idx) const {
        if (!enumerate) {
            const auto& v = *seed.signs;
            return (idx < static_cast<int>(v.size()) && v[static_cast<std::size_t>(idx)]) ? 1 : 0;
        }
        return (combo >> idx) & 1;
    }
    std::vector<int> bits(int combo) const {
        std::vector<int> out;
        for (int i = 0; i < nbits; ++i) out.push_back(bit(combo, i));
        return out;
    }
};

bool quadValid(const QuadCoeffs& q) { return validate(q).ok; }

bool allValid(const MeshCoeffs& m) {
    return std::all_of(m.quads.begin(), m.quads.end(), quadValid);
}

// isogram pair (a, e): nonzero, |a+e| < 1, real distinct factor constants
bool isogramPairOk(double a, double e) {
    return std::abs(a) >= 1e-3 && std::abs(e) >= 1e-3 && std::abs(a + e) < 0.999 &&
           1.0 - 4.0 * a * e > 1e-9;
}

double isogramK(double a, double e, int signBit) {
    double s = std::sqrt(1.0 - 4.0 * a * e);
    return signBit ? (-1.0 - s) / (2.0 * a) : (-1.0 + s) / (2.0 * a);
}

// ex-5.1 tail: given M0 = K(k_next) H(f_mid) ... (the chain mapping x1 to
// the next-to-last flexion variable), produce the hinge before the last
// isogram and the last isogram's constants.
struct TailResult {
    bool ok = false;
    double f3 = 0.0, f4 = 0.0, k4 = 0.0;
};

TailResult ex51Tail(const ProjMap& M0, int branchBit) {
    TailResult out;
    if (!M0.isReal()) return out;
    double u = std::real(M0.u), v = std::real(M0.v), s = std::real(M0.s), t = std::real(M0.t);
    double den = s * s + t * t - u * u - v * v;
    double num = 2.0 * (u * s + v * t);
    ProjPoint A = (std::abs(den) <= 1e-13 * (M0.frobenius() * M0.frobenius()))
                      ? ProjPoint::infinity()
                      : ProjPoint(num / den);
    auto [F3a, F3b] = halfAngleRoots(A);
    ProjPoint F3 = branchBit ? F3b : F3a;
    if (!F3.isReal(1e-9)) return out;
    out.f3 = solveHalfAngle(F3);
    ProjMap Mp = hingeMap(out.f3) * M0;
    double scale = Mp.maxAbs();
    double sp = std::real(Mp.s), tp = std::real(Mp.t), up = std::real(Mp.u), vp = std::real(Mp.v);
    ProjPoint F4;
    if (std::abs(sp) > 1e-12 * scale) {
        out.k4 = vp / sp;
        F4 = ProjPoint(tp / sp);
    } else {
        if (std::abs(tp) <= 1e-12 * scale) return out;
        out.k4 = -up / tp;
        F4 = ProjPoint::infinity();
    }
    out.f4 = solveHalfAngle(F4);
    if (std::abs(out.k4) < 1e-6 || std::abs(std::abs(out.k4) - 1.0) < 1e-6) return out;
    out.ok = true;
    return out;
}

MeshCoeffs finishMesh(MeshCoeffs m, const std::string& name, const Seed& seed,
                      std::vector<int> bits, int attempts, const std::string& note = "") {
    MeshMeta meta;
    meta.constructor = name;
    meta.seed = seed.value;
    meta.signs = std::move(bits);
    meta.params = seed.params;
    meta.attempts = attempts;
    meta.note = note;
    m.meta = meta;
    return m;
}

bool oracleFlexible(const MeshCoeffs& m) {
    TraceOptions opts;
    opts.samples = kVerifySamples;
    return traceOracle(m, opts).flexible();
}

// adjacent-singular quad-1/quad-2 pattern shared by several constructors
struct FrontPattern {
    QuadCoeffs q1, q2;
    double f1 = 0.0;
    LinearFactor factor;
    bool ok = false;
};

FrontPattern drawFrontPattern(Rng& rng, const Seed& seed, int system, int factorBit) {
    FrontPattern out;
    switch (system) {
        case 1: {
            double a1 = pinned(seed, "a1", [&] { return rng.nonzero(-0.49, 0.49); });
            double a2 = pinned(seed, "a2", [&] { return rng.nonzero(-0.49, 0.49); });
            double f1 = pinned(seed, "f1", [&] { return rng.uniform(-0.95, 0.95); });
            double b1 = -a1, c2 = -a2;
            if (std::abs(b1 - a1) >= 0.999 || std::abs(c2 - a2) >= 0.999) return out;
            out.q1 = {a1, b1, 0.0, 0.0};
            out.q2 = {a2, 0.0, c2, 0.0};
            out.f1 = f1;
            out.factor = system1Factor(a1, b1, a2, c2, f1);
            break;
        }
        case 2: {
            double a1 = pinned(seed, "a1", [&] { return rng.nonzero(); });
            double a2 = pinned(seed, "a2", [&] { return rng.nonzero(); });
            double b1 = pinned(seed, "b1", [&] { return a1 + rng.nonzero(-0.99, 0.99); });
            double c2 = a2 * b1 / a1;
            if (std::abs(b1) < 1e-3 || std::abs(c2) < 1e-3) return out;
            if (std::abs(b1 - a1) >= 0.999 || std::abs(c2 - a2) >= 0.999) return out;
            out.q1 = {a1, b1, 0.0, 0.0};
            out.q2 = {a2, 0.0, c2, 0.0};
            out.f1 = 0.0;
            out.factor = system2Factor(a1, a2);
            break;
        }
        case 3: {
            double a1 = pinned(seed, "a1", [&] { return rng.nonzero(); });
            double b1 = pinned(seed, "b1", [&] { return a1 + rng.nonzero(-0.99, 0.99); });
            double c2 = pinned(seed, "c2", [&] { return rng.nonzero(); });
            double a2 = b1 * c2 / a1;
            if (std::abs(b1) < 1e-3 || std::abs(a2) < 1e-3) return out;
            if (std::abs(b1 - a1) >= 0.999 || std::abs(c2 - a2) >= 0.999) return out;
            out.q1 = {a1, b1, 0.0, 0.0};
            out.q2 = {a2, 0.0, c2, 0.0};
            out.f1 = 1.0;
            out.factor = system3Factor(a1, c2);
            break;
        }
        case 4: {
            double a1 = pinned(seed, "a1", [&] { return rng.nonzero(); });
            double a2 = pinned(seed, "a2", [&] { return rng.nonzero(); });
            double k = pinned(seed, "k", [&] { return rng.nonzero(-1.5, 1.5); });
            double c1 = k * a2, b2 = k * a1;
            if (std::abs(c1) < 1e-3 || std::abs(b2) < 1e-3) return out;
            if (std::abs(c1 - a1) >= 0.999 || std::abs(b2 - a2) >= 0.999) return out;
            out.q1 = {a1, 0.0, c1, 0.0};
            out.q2 = {a2, b2, 0.0, 0.0};
            out.f1 = 0.0;
            out.factor = factorBit ? system4FactorIsogram(k) : system4FactorLinear(a1, a2);
            break;
        }
        default: throw InvalidParamError("system must be 1..4");
    }
    // the factor must define an invertible projective map
    if (std::abs(out.factor.m * out.factor.q - out.factor.n * out.factor.p) < 1e-12) return out;
    out.ok = true;
    return out;
}

// residual of the coupling resultant on the factor locus
double factorResidual(const FrontPattern& fp) {
    ReducedCoupling rc;
    rc.first = deltoidFactor(fp.q1);
    rc.second = deltoidFactor(fp.q2);
    rc.f1 = fp.f1;
    BiPoly r = rc.smallResultant();
    ProjMap map = fp.factor.toMap();
    Rng rng(991);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        cplx x = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 6.28318));
        ProjPoint y = map(ProjPoint(x));
        if (y.isInfinite()) continue;
        cplx val = r.eval(x, y.value());
        double scale = r.maxAbsCoeff() * std::max(1.0, std::pow(std::abs(x), r.degX())) *
                       std::max(1.0, std::pow(std::abs(y.value()), r.degY()));
        worst = std::max(worst, std::abs(val) / scale);
    }
    return worst;
}

} // namespace

// --- isogonal ---------------------------------------------------------------

MeshCoeffs constructIsogonal(const Seed& seed) {
    Rng rng(seed.value);
    SignPlan plan(seed, 4);
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        double a[4], e[3];
        a[0] = pinned(seed, "a1", [&] { return rng.nonzero(); });
        e[0] = pinned(seed, "e1", [&] { return rng.nonzero(); });
        a[1] = pinned(seed, "a2", [&] { return rng.nonzero(); });
        e[1] = pinned(seed, "e2", [&] { return rng.nonzero(); });
        a[2] = pinned(seed, "a3", [&] { return rng.nonzero(); });
        e[2] = pinned(seed, "e3", [&] { return rng.nonzero(); });
        a[3] = pinned(seed, "a4", [&] { return rng.nonzero(); });
        double f1 = pinned(seed, "f1", [&] { return rng.uniform(-0.999, 1.0); });
        double f2 = pinned(seed, "f2", [&] { return rng.uniform(-0.999, 1.0); });
        if (!isogramPairOk(a[0], e[0]) || !isogramPairOk(a[1], e[1]) || !isogramPairOk(a[2], e[2]))
            continue;
        for (int combo = 0; combo < plan.combos(); ++combo) {
            double k1 = isogramK(a[0], e[0], plan.bit(combo, 0));
            double k2 = isogramK(a[1], e[1], plan.bit(combo, 1));
            double k3 = isogramK(a[2], e[2], plan.bit(combo, 2));
            // chain x1 -> y3: K(k3) N2 N1 with N_i = H(f_i) K(k_i)
            ProjMap M0 = ProjMap{0.0, cplx(k3), 1.0, 0.0} *
                         (hingeMap(f2) * ProjMap{0.0, cplx(k2), 1.0, 0.0}) *
                         (hingeMap(f1) * ProjMap{0.0, cplx(k1), 1.0, 0.0});
            TailResult tail = ex51Tail(M0, plan.bit(combo, 3));
            if (!tail.ok) continue;
            double e4 = -a[3] * tail.k4 * tail.k4 - tail.k4;
            if (std::abs(e4) < 1e-6 || !isogramPairOk(a[3], e4)) continue;
            MeshCoeffs m;
            m.quads = {QuadCoeffs{a[0], 0, 0, e[0]}, QuadCoeffs{a[1], 0, 0, e[1]},
                       QuadCoeffs{a[2], 0, 0, e[2]}, QuadCoeffs{a[3], 0, 0, e4}};
            m.f = {f1, f2, tail.f3, tail.f4};
            if (!allValid(m)) continue;
            ScalarCheckResult sc = scalarCheck(m);
            if (!sc.scalar) continue;
            if (!oracleFlexible(m)) continue;
            m.classTag = "isogonal";
            return finishMesh(std::move(m), "isogonal", seed, plan.bits(combo), attempt);
        }
    }
    throw SearchExhaustedError("isogonal construction exhausted its retry budget", seed.retryBudget);
}

// --- constant ---------------------------------------------------------------

MeshCoeffs constructConstant(const Seed& seed, int j) {
    if (j < 2 || j > 4) throw InvalidParamError("j must be 2, 3 or 4");
    Rng rng(seed.value);
    SignPlan plan(seed, std::max(0, j - 2));
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        // quad 1: b = e = 0; quad j: c = e = 0; others unconstrained.
        // The deltoid validity reduces to |c1 - a1| < 1 and |bj - aj| < 1,
        // so the second coefficient is drawn inside that strip.
        double a1 = pinned(seed, "a1", [&] { return rng.nonzero(); });
        double c1 = pinned(seed, "c1", [&] { return a1 + rng.nonzero(-0.999, 0.999); });
        double aj = pinned(seed, "aj", [&] { return rng.nonzero(); });
        double bj = pinned(seed, "bj", [&] { return aj + rng.nonzero(-0.999, 0.999); });
        if (std::abs(c1) < 1e-3 || std::abs(bj) < 1e-3) continue;
        if (std::abs(c1 - a1) >= 0.999 || std::abs(bj - aj) >= 0.999) continue;
        MeshCoeffs m;
        m.quads[0] = {a1, 0.0, c1, 0.0};
        m.quads[static_cast<std::size_t>(j - 1)] = {aj, bj, 0.0, 0.0};
        bool ok = true;
        for (int i = 0; i < 4; ++i) {
            if (i == 0 || i == j - 1) continue;
            QuadCoeffs q{rng.nonzero(), rng.nonzero(), rng.nonzero(), rng.nonzero()};
            if (!quadValid(q)) {
                ok = false;
                break;
            }
            m.quads[static_cast<std::size_t>(i)] = q;
        }
        if (!ok) continue;
        for (int i = 0; i < 4; ++i) m.f[static_cast<std::size_t>(i)] = rng.uniform(-0.999, 1.0);
        for (int combo = 0; combo < plan.combos(); ++combo) {
            // chain from Y1 = 0 up to Y_{j-1}
            double Y = 0.0;
            bool real = true;
            for (int k = 2; k < j; ++k) {
                ProjPoint X = hingeMap(m.f[static_cast<std::size_t>(k - 2)])(ProjPoint(Y));
                if (X.isInfinite()) {
                    real = false;
                    break;
                }
                double Xv = X.realValue();
                const QuadCoeffs& q = m.quads[static_cast<std::size_t>(k - 1)];
                double A = q.a * Xv * Xv + q.c;
                double B = Xv;
                double C = q.b * Xv * Xv + q.e;
                double disc = B * B - 4.0 * A * C;
                if (disc < 0.0) {
                    real = false;
                    break;
                }
                if (std::abs(A) < 1e-12) {
                    if (std::abs(B) < 1e-12) {
                        real = false;
                        break;
                    }
                    Y = -C / B;
                } else {
                    double s = std::sqrt(disc);
                    Y = plan.bit(combo, k - 2) ? (-B - s) / (2.0 * A) : (-B + s) / (2.0 * A);
                }
            }
            if (!real) continue;
            m.f[static_cast<std::size_t>(j - 2)] = solveHalfAngle(ProjPoint(Y));
            if (!allValid(m)) continue;
            TraceOptions opts;
            opts.samples = kVerifySamples;
            TraceReport rep = traceOracle(m, opts);
            if (!rep.flexible() || !rep.hasConstantBranch()) continue;
            // the frozen coordinate at position j must sit at zero
            bool frozenAtJ = false;
            for (const auto& [idx, val] : rep.frozenCoords)
                if (idx == j && chordal(val, ProjPoint(0.0)) < 1e-6) frozenAtJ = true;
            if (j >= 2 && !frozenAtJ) continue;
            m.classTag = "constant";
            return finishMesh(std::move(m), "constant", seed, plan.bits(combo), attempt);
        }
    }
    throw SearchExhaustedError("constant construction exhausted its retry budget", seed.retryBudget);
}

// --- adjacent-isogonal singular ----------------------------------------------

MeshCoeffs constructAdjacentSingular(const Seed& seed, int system) {
    if (system < 1 || system > 4) throw InvalidParamError("system must be 1..4");
    Rng rng(seed.value);
    SignPlan plan(seed, 3); // [factor choice, k3 sign, tail branch]
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        double a3 = pinned(seed, "a3", [&] { return rng.nonzero(); });
        double e3 = pinned(seed, "e3", [&] { return rng.nonzero(); });
        double a4 = pinned(seed, "a4", [&] { return rng.nonzero(); });
        double f2 = pinned(seed, "f2", [&] { return rng.uniform(-0.999, 1.0); });
        if (!isogramPairOk(a3, e3)) continue;
        for (int combo = 0; combo < plan.combos(); ++combo) {
            FrontPattern fp = drawFrontPattern(rng, seed, system, plan.bit(combo, 0));
            if (!fp.ok) break; // redraw
            if (factorResidual(fp) > 1e-9)
                throw FactorExtractionFailedError("coupling factor mapping is inconsistent");
            double k3 = isogramK(a3, e3, plan.bit(combo, 1));
            ProjMap M0 = ProjMap{0.0, cplx(k3), 1.0, 0.0} * hingeMap(f2) * fp.factor.toMap();
            TailResult tail = ex51Tail(M0, plan.bit(combo, 2));
            if (!tail.ok) continue;
            double e4 = -a4 * tail.k4 * tail.k4 - tail.k4;
            if (std::abs(e4) < 1e-6 || !isogramPairOk(a4, e4)) continue;
            MeshCoeffs m;
            m.quads = {fp.q1, fp.q2, QuadCoeffs{a3, 0, 0, e3}, QuadCoeffs{a4, 0, 0, e4}};
            m.f = {fp.f1, f2, tail.f3, tail.f4};
            if (!allValid(m)) continue;
            if (!oracleFlexible(m)) continue;
            m.classTag = "adjacent";
            return finishMesh(std::move(m), "adjacent", seed, plan.bits(combo), attempt,
                              "system=" + std::to_string(system));
        }
    }
    throw SearchExhaustedError("adjacent-singular construction exhausted its retry budget",
                               seed.retryBudget);
}

// --- opposite-isogonal singular ----------------------------------------------

MeshCoeffs constructOppositeSingular(const Seed& seed) {
    Rng rng(seed.value);
    SignPlan plan(seed, 4); // [d, D, p-root, q-root]
    int degenerate = 0;
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        double a2 = pinned(seed, "a2", [&] { return rng.nonzero(); });
        double b2 = pinned(seed, "b2", [&] { return a2 + rng.nonzero(-0.99, 0.99); });
        double U = pinned(seed, "U", [&] { return rng.nonzero(); });
        double S = pinned(seed, "S", [&] { return rng.nonzero(); });
        if (std::abs(b2) < 1e-3 || std::abs(b2 - a2) >= 0.999) continue;
        for (int combo = 0; combo < plan.combos(); ++combo) {
            double d = plan.bit(combo, 0) ? -1.0 : 1.0;
            double D = plan.bit(combo, 1) ? -1.0 : 1.0;
            double den0 = U * U * a2 - S * S * b2;
            if (std::abs(den0) < 1e-6) {
                ++degenerate;
                break; // redraw (U, S)
            }
            double V = D * S * b2 / den0;
            double T = U * D * a2 / den0;
            double n = 1.0;
            double v = -n * S * U;
            double t = n * (S * S * b2 + U * U * a2);
            double u = d * (S * V + T * U) / (n * D * den0);
            double s = 2.0 * d * (S * T * b2 + U * V * a2) / (n * D * (S * S * b2 - U * U * a2));
            if (std::abs(u * t - s * v - d) > 1e-9 * std::max(1.0, std::abs(u * t))) {
                ++degenerate;
                continue;
            }
            double Su = u * u + v * v + s * s + t * t;
            double Sq = U * U + V * V + S * S + T * T;
            double dp = Su * Su - 4.0;
            double dq = Sq * Sq - 4.0;
            if (dp < 0.0 || dq < 0.0) continue;
            double p = (-Su + (plan.bit(combo, 2) ? -1.0 : 1.0) * std::sqrt(dp)) / (2.0 * d);
            double q = (-Sq + (plan.bit(combo, 3) ? -1.0 : 1.0) * std::sqrt(dq)) / (2.0 * D);
            double k1 = p, k3 = q;
            if (std::min(std::abs(k1), std::abs(k3)) < 1e-3) continue;
            if (std::abs(std::abs(k1) - 1.0) < 1e-3 || std::abs(std::abs(k3) - 1.0) < 1e-3) continue;
            double denF1 = s * u + t * v, denF2 = S * U + T * V, denF3 = V * q - S,
                   denF4 = v * p - s;
            if (std::min({std::abs(denF1), std::abs(denF2), std::abs(denF3), std::abs(denF4)}) <
                1e-9)
                continue;
            double F1 = -(d * p + u * u + v * v) / denF1;
            double F2 = (D * q + U * U + V * V) / denF2;
            double F3 = -(U * q + T) / denF3;
            double F4 = (u * p + t) / denF4;
            double f1 = solveHalfAngle(ProjPoint(F1));
            double f2 = solveHalfAngle(ProjPoint(F2));
            double f3 = solveHalfAngle(ProjPoint(F3));
            double f4 = solveHalfAngle(ProjPoint(F4));
            // a1, a3 drawn inside the strip |a (1-k^2) - k| < 1
            auto drawIso = [&](double k, const char* pname) -> std::pair<double, double> {
                if (isPinned(seed, pname)) {
                    double a = seed.params.at(pname);
                    return {a, -a * k * k - k};
                }
                double lo = std::min(-1.0 / (1.0 + k), 1.0 / (1.0 - k));
                double hi = std::max(-1.0 / (1.0 + k), 1.0 / (1.0 - k));
                lo = std::max(lo, -3.0);
                hi = std::min(hi, 3.0);
                for (int tr = 0; tr < 60; ++tr) {
                    double a = rng.uniform(lo, hi);
                    double e = -a * k * k - k;
                    if (std::abs(a) >= 1e-3 && std::abs(e) >= 1e-3 && isogramPairOk(a, e))
                        return {a, e};
                }
                return {0.0, 0.0};
            };
            auto [a1, e1] = drawIso(k1, "a1");
            auto [a3, e3] = drawIso(k3, "a3");
            if (a1 == 0.0 || a3 == 0.0) continue;
            // Moebius image of the middle quadratic must be diagonal in the
            // matrix form; read off the last quad from it
            double m11 = U * U * a2 * u + S * U * s + S * S * b2 * u;
            double m12 = (U * U * a2 + S * S * b2) * v + S * U * t;
            double m21 = 2.0 * (U * V * a2 + S * T * b2) * u + (S * V + U * T) * s;
            double m22 = 2.0 * U * V * a2 * v + (S * V + U * T) * t + 2.0 * S * T * b2 * v;
            double m31 = V * V * a2 * u + V * T * s + T * T * b2 * u;
            double m32 = (V * V * a2 + T * T * b2) * v + V * T * t;
            double scaleM = std::max({std::abs(m11), std::abs(m21), std::abs(m22), std::abs(m31), 1e-30});
            if (std::max({std::abs(m12), std::abs(m21), std::abs(m32)}) > 1e-9 * scaleM)
                throw FactorExtractionFailedError("middle-quadratic image is not diagonal");
            if (std::abs(m22) < 1e-9 * scaleM) continue;
            double a4 = m11 / m22, c4 = m31 / m22;
            if (std::abs(a4) < 1e-3 || std::abs(c4) < 1e-3 || std::abs(c4 - a4) >= 0.999) continue;
            MeshCoeffs m;
            m.quads = {QuadCoeffs{a1, 0, 0, e1}, QuadCoeffs{a2, b2, 0, 0},
                       QuadCoeffs{a3, 0, 0, e3}, QuadCoeffs{a4, 0, c4, 0}};
            m.f = {f1, f2, f3, f4};
            if (!allValid(m)) continue;
            if (!oracleFlexible(m)) continue;
            m.classTag = "opposite";
            return finishMesh(std::move(m), "opposite", seed, plan.bits(combo), attempt);
        }
        if (degenerate > seed.retryBudget)
            throw DegenerateParameterizationError("persistent parameterization degeneracy");
    }
    throw SearchExhaustedError("opposite-singular construction exhausted its retry budget",
                               seed.retryBudget);
}

// --- deltoidal, reducible ------------------------------------------------------

MeshCoeffs constructDeltoidalReducible(const Seed& seed, int option) {
    if (option != 1 && option != 2) throw InvalidParamError("option must be 1 or 2");
    Rng rng(seed.value);
    int noRealZ = 0;
    if (option == 1) {
        SignPlan plan(seed, 2); // [factor choice, tail branch]
        for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
            int system = static_cast<int>(pinned(seed, "system", [&] { return 1.0 + rng.pickIndex(4); }));
            for (int combo = 0; combo < plan.combos(); ++combo) {
                FrontPattern fp = drawFrontPattern(rng, seed, system, plan.bit(combo, 0));
                if (!fp.ok) break;
                TailResult tail = ex51Tail(fp.factor.toMap(), plan.bit(combo, 1));
                if (!tail.ok) continue;
                double f2 = tail.f3, f4 = tail.f4, k4 = tail.k4;
                // k4 only needs to be a nonzero real here
                if (std::abs(k4) < 1e-6) continue;
                double a3 = 0.0, a4 = 0.0, c3 = 0.0, b4 = 0.0;
                bool found = false;
                for (int tr = 0; tr < 80; ++tr) {
                    a3 = pinned(seed, "a3", [&] { return rng.nonzero(-1.0, 1.0); });
                    a4 = pinned(seed, "a4", [&] { return rng.nonzero(-1.0, 1.0); });
                    c3 = k4 * a4;
                    b4 = k4 * a3;
                    if (std::abs(c3) >= 1e-3 && std::abs(b4) >= 1e-3 &&
                        std::abs(c3 - a3) < 0.999 && std::abs(b4 - a4) < 0.999) {
                        found = true;
                        break;
                    }
                    if (isPinned(seed, "a3") && isPinned(seed, "a4")) break;
                }
                if (!found) continue;
                MeshCoeffs m;
                m.quads = {fp.q1, fp.q2, QuadCoeffs{a3, 0, c3, 0}, QuadCoeffs{a4, b4, 0, 0}};
                m.f = {fp.f1, f2, 0.0, f4};
                if (!allValid(m)) continue;
                ProjMap chain = hingeMap(f4) * ProjMap{0.0, cplx(k4), 1.0, 0.0} * hingeMap(f2) *
                                fp.factor.toMap();
                if (!isScalar(chain, 1e-8)) continue;
                if (!oracleFlexible(m)) continue;
                m.classTag = "deltoidal-reducible";
                return finishMesh(std::move(m), "deltoidal-reducible", seed, plan.bits(combo),
                                  attempt, "option=1 system=" + std::to_string(system));
            }
        }
        throw SearchExhaustedError("deltoidal-reducible construction exhausted its retry budget",
                                   seed.retryBudget);
    }
    // option 2
    SignPlan plan(seed, 3); // [factor choice, w-root, z-sign]
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        int system = static_cast<int>(pinned(seed, "system", [&] { return 1.0 + rng.pickIndex(4); }));
        double f2 = pinned(seed, "f2", [&] { return rng.uniform(-0.95, 0.95); });
        double f4 = pinned(seed, "f4", [&] { return rng.uniform(-0.95, 0.95); });
        for (int combo = 0; combo < plan.combos(); ++combo) {
            FrontPattern fp = drawFrontPattern(rng, seed, system, plan.bit(combo, 0));
            if (!fp.ok) break;
            ProjMap Mz = hingeMap(f2) * fp.factor.toMap() * hingeMap(f4);
            if (!Mz.isReal()) continue;
            double u = std::real(Mz.u), v = std::real(Mz.v), s = std::real(Mz.s),
                   t = std::real(Mz.t);
            double qa = s * v * v * v * v;
            double qb = 4.0 * u * v * t - 2.0 * s * v * v;
            double qc = s;
            if (std::abs(qa) < 1e-14) {
                ++noRealZ;
                continue;
            }
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) {
                ++noRealZ;
                continue;
            }
            double w0 = (-qb + std::sqrt(disc)) / (2.0 * qa);
            double w1 = (-qb - std::sqrt(disc)) / (2.0 * qa);
            double w = plan.bit(combo, 1) ? w1 : w0;
            if (w <= 1e-12) {
                w = plan.bit(combo, 1) ? w0 : w1;
                if (w <= 1e-12) {
                    ++noRealZ;
                    continue;
                }
            }
            double z = (plan.bit(combo, 2) ? -1.0 : 1.0) * std::sqrt(w);
            double zv = z * v;
            if (std::abs(zv) < 1e-9 || std::abs(1.0 - zv * zv) < 1e-9 || std::abs(t) < 1e-9)
                continue;
            double f3 = solveHalfAngle(ProjPoint(zv));
            double a3 = z * t / (1.0 - zv * zv);
            double b3 = -a3;
            double a4c = s * (zv * zv - 1.0) / (4.0 * zv * t);
            double c4 = -a4c;
            if (std::abs(a3) < 1e-4 || std::abs(a4c) < 1e-4) continue;
            if (std::abs(b3 - a3) >= 0.999 || std::abs(c4 - a4c) >= 0.999) continue;
            MeshCoeffs m;
            m.quads = {fp.q1, fp.q2, QuadCoeffs{a3, b3, 0, 0}, QuadCoeffs{a4c, 0, c4, 0}};
            m.f = {fp.f1, f2, f3, f4};
            if (!allValid(m)) continue;
            // the transported factor (s y4 + t) x3 - (u y4 + v) must
            // annihilate the rear coupling resultant
            ReducedCoupling rear;
            rear.first = FactorShape{3, {}, a3, b3, 0.0, 0.0};
            rear.second = FactorShape{5, {}, a4c, 0.0, c4, 0.0};
            rear.f1 = f3;
            BiPoly rr = rear.smallResultant();
            Rng probe(717);
            double worst = 0.0;
            for (int i = 0; i < 50; ++i) {
                double y4 = probe.uniform(-2.0, 2.0);
                double den = s * y4 + t;
                if (std::abs(den) < 1e-6) continue;
                double x3 = (u * y4 + v) / den;
                double scale = rr.maxAbsCoeff() * std::max(1.0, std::pow(std::abs(x3), rr.degX())) *
                               std::max(1.0, std::pow(std::abs(y4), rr.degY()));
                worst = std::max(worst, std::abs(rr.eval(x3, y4)) / scale);
            }
            if (worst > 1e-9) continue;
            if (!oracleFlexible(m)) continue;
            m.classTag = "deltoidal-reducible";
            return finishMesh(std::move(m), "deltoidal-reducible", seed, plan.bits(combo), attempt,
                              "option=2 system=" + std::to_string(system));
        }
    }
    if (noRealZ * 2 >= seed.retryBudget)
        throw NoRealZError("no real root of the hinge quartic after the allowed adjustments",
                           seed.retryBudget);
    throw SearchExhaustedError("deltoidal-reducible construction exhausted its retry budget",
                               seed.retryBudget);
}

// --- deltoidal, irreducible (special case) --------------------------------------

MeshCoeffs constructDeltoidalIrreducibleSpecial(const Seed& seed) {
    Rng rng(seed.value);
    SignPlan plan(seed, 1); // [a4 sign]
    const bool pinnedAs = isPinned(seed, "a1") && isPinned(seed, "a2") && isPinned(seed, "a3");
    int nonReal = 0;
    for (int attempt = 1; attempt <= seed.retryBudget; ++attempt) {
        double a1 = pinned(seed, "a1", [&] { return rng.nonzero(); });
        double a2 = pinned(seed, "a2", [&] { return rng.nonzero(); });
        double a3 = pinned(seed, "a3", [&] { return rng.nonzero(); });
        // stay clear of the reducible-coupling systems
        if (std::abs(a1 + a2) < 1e-3 || std::abs(4.0 * a1 * a2 - 1.0) < 1e-3) {
            if (pinnedAs) throw InvalidParamError("pinned parameters land on a reducible coupling");
            continue;
        }
        double c1 = a1, b2 = a2;
        double f2 = std::sqrt(2.0) - 1.0, f4 = f2, f3 = 0.0;
        double F1 = 2.0 * (a1 + a2) / (4.0 * a1 * a2 - 1.0);
        double f1 = solveHalfAngle(ProjPoint(F1));
        double b3 = (a1 + a2) * (1.0 - 4.0 * a1 * a2) / (4.0 * a1 * a3 * (4.0 * a2 * a2 + 1.0));
        double rad = a1 * (4.0 * a2 * a2 + 1.0) / (a2 * (4.0 * a1 * a1 + 1.0));
        std::string interpretation = "radicand-as-stated";
        if (rad <= 0.0) {
            rad = -rad;
            interpretation = "radicand-negated";
        }
        if (rad <= 1e-12) {
            ++nonReal;
            continue;
        }
        bool accepted = false;
        for (int combo = 0; combo < plan.combos() && !accepted; ++combo) {
            double a4 = (plan.bit(combo, 0) ? -1.0 : 1.0) * a3 * std::sqrt(rad);
            double c4 = -b3 * a4 / a3;
            if (std::abs(b3) < 1e-6 || std::abs(a4) < 1e-6 || std::abs(c4) < 1e-6) continue;
            MeshCoeffs m;
            m.quads = {QuadCoeffs{a1, 0, c1, 0}, QuadCoeffs{a2, b2, 0, 0},
                       QuadCoeffs{a3, b3, 0, 0}, QuadCoeffs{a4, 0, c4, 0}};
            m.f = {f1, f2, f3, f4};
            // the anchor parameters are exempt from the validity gate
            if (!pinnedAs && !allValid(m)) continue;
            ReducedCoupling s1;
            s1.first = FactorShape{5, {}, a1, 0.0, c1, 0.0};
            s1.second = FactorShape{3, {}, a2, b2, 0.0, 0.0};
            s1.f1 = f1;
            s1.f2 = f2;
            ReducedCoupling s2;
            s2.first = FactorShape{3, {}, a3, b3, 0.0, 0.0};
            s2.second = FactorShape{5, {}, a4, 0.0, c4, 0.0};
            s2.f1 = f3;
            s2.f2 = f4;
            s2.firstQuad = 2;
            RatioResult ratio = ratioConstancy(s1, s2);
            if (!ratio.constant) continue;
            if (!oracleFlexible(m)) continue;
            m.classTag = "deltoidal-irreducible";
            std::string note = interpretation;
            if (pinnedAs && !allValid(m)) note += " validity-unchecked";
            return finishMesh(std::move(m), "deltoidal-irreducible", seed, plan.bits(combo),
                              attempt, note);
        }
    }
    if (nonReal * 2 >= seed.retryBudget)
        throw NoRealBranchError("both sign branches give a non-real last coefficient",
                                seed.retryBudget);
    throw SearchExhaustedError("deltoidal-irreducible construction exhausted its retry budget",
                               seed.retryBudget);
}

MeshCoeffs constructByName(const std::string& className, const Seed& seed) {
    auto intParam = [&](const std::string& name, int dflt) {
        auto it = seed.params.find(name);
        return it == seed.params.end() ? dflt : static_cast<int>(it->second);
    };
    if (className == "isogonal") return constructIsogonal(seed);
    if (className == "constant") return constructConstant(seed, intParam("j", 2));
    if (className == "adjacent") return constructAdjacentSingular(seed, intParam("system", 1));
    if (className == "opposite") return constructOppositeSingular(seed);
    if (className == "deltoidal-reducible")
        return constructDeltoidalReducible(seed, intParam("option", 1));
    if (className == "deltoidal-irreducible") return constructDeltoidalIrreducibleSpecial(seed);
    throw InvalidParamError("unknown constructor class: " + className);
}

} // namespace koko
