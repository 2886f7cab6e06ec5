#include "kokomesh/bricard.hpp"

#include <algorithm>
#include <cmath>

#include "kokomesh/errors.hpp"

namespace koko {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kClassifyTol = 1e-10;
} // namespace

ValidationReport validate(const QuadCoeffs& q) {
    ValidationReport r;
    double lhs = 1.0 - 4.0 * q.a * q.e - 4.0 * q.b * q.c;
    r.productMargin = lhs * lhs - 64.0 * q.a * q.b * q.c * q.e;
    r.cosineMargin = 1.0 - std::abs(q.b + q.c - q.a - q.e);
    if (r.productMargin <= 0.0) {
        r.violated = "(1-4ae-4bc)^2 > 64abce";
        return r;
    }
    if (r.cosineMargin <= 0.0) {
        r.violated = "|b+c-a-e| < 1";
        return r;
    }
    r.ok = true;
    return r;
}

QuadClass classifyQuad(const QuadCoeffs& q, double tol) {
    auto zero = [tol](double v) { return std::abs(v) <= tol; };
    const bool za = zero(q.a), zb = zero(q.b), zc = zero(q.c), ze = zero(q.e);
    QuadClass out;
    out.singular = (za || ze) && (zb || zc);
    if (out.singular) {
        if (zc && ze) out.shape = QuadShape::DeltoidIII;
        else if (za && zb) out.shape = QuadShape::AntideltoidIV;
        else if (zb && ze) out.shape = QuadShape::DeltoidV;
        else out.shape = QuadShape::AntideltoidVI;
        out.reducible = true;
        return out;
    }
    if (zb && zc) out.shape = QuadShape::Isogram;
    else if (za && ze) out.shape = QuadShape::Antiisogram;
    else out.shape = QuadShape::Generic;
    out.reducible = (out.shape != QuadShape::Generic);
    return out;
}

std::string shapeName(QuadShape s) {
    switch (s) {
        case QuadShape::Isogram: return "isogram";
        case QuadShape::Antiisogram: return "antiisogram";
        case QuadShape::DeltoidIII: return "deltoid-iii";
        case QuadShape::AntideltoidIV: return "antideltoid-iv";
        case QuadShape::DeltoidV: return "deltoid-v";
        case QuadShape::AntideltoidVI: return "antideltoid-vi";
        case QuadShape::Generic: return "generic";
    }
    return "generic";
}

std::pair<double, double> factorIsogram(const QuadCoeffs& q) {
    if (std::abs(q.b) > kClassifyTol || std::abs(q.c) > kClassifyTol || q.a * q.e == 0.0)
        throw InvalidIsogramError("factorIsogram needs b = c = 0 and a e != 0");
    double disc = 1.0 - 4.0 * q.a * q.e;
    if (disc <= 0.0) throw InvalidIsogramError("isogram with complex factors");
    double s = std::sqrt(disc);
    double k1 = (-1.0 + s) / (2.0 * q.a);
    double k2 = (-1.0 - s) / (2.0 * q.a);
    for (double k : {k1, k2})
        if (std::abs(k) < 1e-9 || std::abs(std::abs(k) - 1.0) < 1e-9)
            throw InvalidIsogramError("isogram factor constant in {0, +-1}");
    return {k1, k2};
}

SphericalQuad recoverAngles(const QuadCoeffs& q) {
    double cl = q.b + q.c - q.a - q.e;
    if (std::abs(cl) >= 1.0) throw AngleOutOfRangeError("|b+c-a-e| >= 1");
    SphericalQuad s;
    s.lambda = std::acos(cl);
    double sl = std::sin(s.lambda);
    s.gamma = std::atan2(sl, q.b - q.c - q.a + q.e); // arccot into (0, pi)
    s.delta = std::atan2(sl, q.c + q.e - q.a - q.b);
    double A = 4.0 * q.a * std::sin(s.gamma) * std::sin(s.delta);
    double cm = std::cos(s.lambda + s.gamma + s.delta) - A;
    if (std::abs(cm) > 1.0 + 1e-9) throw AngleOutOfRangeError("cos(mu) outside [-1,1]");
    cm = std::clamp(cm, -1.0, 1.0);
    s.mu = std::acos(cm);
    const double eps = 1e-7;
    if (s.mu < eps || s.mu > kPi - eps)
        throw AngleOutOfRangeError("mu degenerate (quad collapses to a triangle)");
    return s;
}

QuadCoeffs coeffsFromAngles(const SphericalQuad& s) {
    double cm = std::cos(s.mu);
    double D = 4.0 * std::sin(s.gamma) * std::sin(s.delta);
    QuadCoeffs q;
    q.a = (std::cos(s.lambda + s.gamma + s.delta) - cm) / D;
    q.b = (std::cos(s.lambda + s.gamma - s.delta) - cm) / D;
    q.c = (std::cos(s.lambda - s.gamma + s.delta) - cm) / D;
    q.e = (std::cos(s.lambda - s.gamma - s.delta) - cm) / D;
    return q;
}

double sinSqMu(const QuadCoeffs& q) {
    double lhs = 1.0 - 4.0 * q.a * q.e - 4.0 * q.b * q.c;
    double num = (lhs * lhs - 64.0 * q.a * q.b * q.c * q.e) *
                 (1.0 - std::pow(q.b + q.c - q.a - q.e, 2));
    double den = (1.0 - 4.0 * (q.b - q.a) * (q.c - q.e)) *
                 (1.0 - 4.0 * (q.c - q.a) * (q.b - q.e));
    return num / den;
}

MeshCoeffs rotated(const MeshCoeffs& m, int r) {
    MeshCoeffs out = m;
    for (int i = 0; i < 4; ++i) {
        out.quads[static_cast<std::size_t>(i)] = m.quads[static_cast<std::size_t>((i + r) % 4)];
        out.f[static_cast<std::size_t>(i)] = m.f[static_cast<std::size_t>((i + r) % 4)];
    }
    return out;
}

BiPoly gPoly(const QuadCoeffs& q) {
    BiPoly g;
    g.setCoeff(2, 2, q.a);
    g.setCoeff(2, 0, q.b);
    g.setCoeff(0, 2, q.c);
    g.setCoeff(1, 1, 1.0);
    g.setCoeff(0, 0, q.e);
    g.trim();
    return g;
}

BiPoly hPoly(double f) {
    double w = 1.0 - f * f;
    BiPoly h;
    h.setCoeff(1, 0, w);
    h.setCoeff(0, 1, -w);
    h.setCoeff(1, 1, -2.0 * f);
    h.setCoeff(0, 0, -2.0 * f);
    h.trim();
    return h;
}

BiPoly gResultant(const QuadCoeffs& q, double f) { return resultant(gPoly(q), hPoly(f)); }

double hingeFlip(double f) {
    double nf = (f <= 0.0) ? (f + 1.0) / (1.0 - f) : (f - 1.0) / (1.0 + f);
    if (!(nf > -1.0 && nf <= 1.0)) throw HingeOverflowError("hinge parameter left (-1,1]");
    return nf;
}

bool NormalizeRecord::identity() const {
    return std::all_of(flips.begin(), flips.end(), [](QuadFlip f) { return f == QuadFlip::None; });
}

std::array<bool, 4> NormalizeRecord::xFlipped() const {
    std::array<bool, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = flips[static_cast<std::size_t>(i)] == QuadFlip::FlipX;
    return out;
}

std::pair<MeshCoeffs, NormalizeRecord> normalize(const MeshCoeffs& m) {
    MeshCoeffs out = m;
    NormalizeRecord rec;
    rec.fBefore = m.f;
    for (int i = 0; i < 4; ++i) {
        auto& q = out.quads[static_cast<std::size_t>(i)];
        QuadClass cls = classifyQuad(q);
        if (cls.shape == QuadShape::Antiisogram) {
            // y_i -> -1/y_i : (a, e) <- -(b, c)
            q = {-q.b, 0.0, 0.0, -q.c};
            out.f[static_cast<std::size_t>(i)] = hingeFlip(out.f[static_cast<std::size_t>(i)]);
            rec.flips[static_cast<std::size_t>(i)] = QuadFlip::FlipY;
        } else if (cls.shape == QuadShape::AntideltoidVI) {
            // a = c = 0: flip y_i, lands on b = e = 0
            q = {-q.b, 0.0, -q.e, 0.0};
            out.f[static_cast<std::size_t>(i)] = hingeFlip(out.f[static_cast<std::size_t>(i)]);
            rec.flips[static_cast<std::size_t>(i)] = QuadFlip::FlipY;
        } else if (cls.shape == QuadShape::AntideltoidIV) {
            // a = b = 0: flip x_i, lands on c = e = 0; the feeding hinge moves
            q = {-q.c, -q.e, 0.0, 0.0};
            int prev = (i + 3) % 4;
            out.f[static_cast<std::size_t>(prev)] = hingeFlip(out.f[static_cast<std::size_t>(prev)]);
            rec.flips[static_cast<std::size_t>(i)] = QuadFlip::FlipX;
        }
    }
    rec.fAfter = out.f;
    return {out, rec};
}

ProjPoint applyFlips(const ProjPoint& x, bool flip) {
    if (!flip || x.isFree()) return x;
    return ProjPoint::fromHomogeneous(-x.den(), x.num());
}

} // namespace koko
