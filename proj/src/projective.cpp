#include "kokomesh/projective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "kokomesh/errors.hpp"

namespace koko {

void ProjPoint::init(cplx n, cplx d) {
    double scale = std::hypot(std::abs(n), std::abs(d));
    if (scale == 0.0) throw Error("projective point from (0,0)");
    num_ = n / scale;
    den_ = d / scale;
}

ProjPoint ProjPoint::fromHomogeneous(cplx num, cplx den) {
    ProjPoint p;
    p.init(num, den);
    return p;
}

bool ProjPoint::isReal(double tol) const {
    if (free_) return false;
    // [num:den] is real iff num * conj(den) is real (covers infinity)
    return std::abs(std::imag(num_ * std::conj(den_))) <= tol;
}

cplx ProjPoint::value() const {
    if (free_) throw Error("value() of unconstrained point");
    if (isInfinite()) return cplx(1e300, 0.0);
    return num_ / den_;
}

double ProjPoint::realValue() const {
    cplx v = value();
    return std::real(v);
}

double chordal(const ProjPoint& p, const ProjPoint& q) {
    if (p.isFree() || q.isFree()) return 0.0;
    // both normalized, so the chordal metric is |p_n q_d - q_n p_d|
    return std::abs(p.num() * q.den() - q.num() * p.den());
}

ProjPoint ProjMap::operator()(const ProjPoint& x) const {
    if (x.isFree()) return x;
    return ProjPoint::fromHomogeneous(u * x.num() + v * x.den(), s * x.num() + t * x.den());
}

ProjMap ProjMap::operator*(const ProjMap& o) const {
    return {u * o.u + v * o.s, u * o.v + v * o.t, s * o.u + t * o.s, s * o.v + t * o.t};
}

double ProjMap::frobenius() const {
    return std::sqrt(std::norm(u) + std::norm(v) + std::norm(s) + std::norm(t));
}

double ProjMap::maxAbs() const {
    return std::max({std::abs(u), std::abs(v), std::abs(s), std::abs(t)});
}

ProjMap ProjMap::normalized() const {
    double n = frobenius();
    if (n == 0.0) throw Error("normalizing zero map");
    return {u / n, v / n, s / n, t / n};
}

bool ProjMap::isReal(double tol) const {
    double scale = std::max(maxAbs(), 1e-300);
    return std::max({std::abs(std::imag(u)), std::abs(std::imag(v)), std::abs(std::imag(s)),
                     std::abs(std::imag(t))}) <= tol * scale;
}

ProjMap hingeMap(double f, HingeDirection dir) {
    double w = 1.0 - f * f;
    ProjMap fwd{cplx(w), cplx(-2.0 * f), cplx(2.0 * f), cplx(w)};
    if (dir == HingeDirection::Forward) return fwd;
    return fwd.adjugate();
}

ProjMap isogramMap(cplx k, double f) {
    double w = 1.0 - f * f;
    return {cplx(-2.0 * f), k * w, cplx(w), 2.0 * k * f};
}

ProjMap compose(std::span<const ProjMap> maps) {
    ProjMap acc{};
    for (const ProjMap& m : maps) acc = m * acc;
    return acc.normalized();
}

bool isScalar(const ProjMap& m, double tol) {
    double scale = m.frobenius();
    if (scale == 0.0) return false;
    return std::abs(m.v) <= tol * scale && std::abs(m.s) <= tol * scale &&
           std::abs(m.u - m.t) <= tol * scale;
}

double solveHalfAngle(const ProjPoint& F) {
    if (F.isFree()) throw Error("solveHalfAngle of unconstrained point");
    if (!F.isReal(1e-9)) throw Error("solveHalfAngle of non-real point");
    if (F.isInfinite()) return 1.0;
    double Fv = std::real(F.num() / F.den());
    // stable form of (sqrt(1+F^2)-1)/F
    return Fv / (1.0 + std::sqrt(1.0 + Fv * Fv));
}

std::pair<ProjPoint, ProjPoint> halfAngleRoots(const ProjPoint& A) {
    if (A.isFree()) throw Error("halfAngleRoots of unconstrained point");
    if (A.isInfinite()) return {ProjPoint(1.0), ProjPoint(-1.0)};
    cplx Av = A.num() / A.den();
    if (std::abs(Av) == 0.0) return {ProjPoint(0.0), ProjPoint::infinity()};
    cplx r = std::sqrt(1.0 + Av * Av);
    cplx f1 = Av / (1.0 + r);
    return {ProjPoint(f1), ProjPoint::fromHomogeneous(cplx(-1.0), f1)};
}

} // namespace koko
