#pragma once

#include <complex>
#include <span>
#include <vector>

namespace koko {

using cplx = std::complex<double>;

// Point on the complex projective line in normalized homogeneous
// coordinates [num : den], |num|^2 + |den|^2 = 1. Infinity is [1 : 0].
// A point may also be "unconstrained": it stands for an entire fiber on
// which the defining equation vanished identically. Unconstrained points
// absorb every map applied to them and have chordal distance 0 to
// everything.
class ProjPoint {
public:
    ProjPoint() : num_(0.0), den_(1.0) {}
    ProjPoint(double v) { init(cplx(v, 0.0), 1.0); }
    ProjPoint(cplx v) { init(v, 1.0); }

    static ProjPoint infinity() {
        ProjPoint p;
        p.num_ = 1.0;
        p.den_ = 0.0;
        return p;
    }
    static ProjPoint unconstrained() {
        ProjPoint p;
        p.free_ = true;
        return p;
    }
    static ProjPoint fromHomogeneous(cplx num, cplx den);

    cplx num() const { return num_; }
    cplx den() const { return den_; }
    bool isFree() const { return free_; }
    bool isInfinite(double tol = 1e-13) const { return !free_ && std::abs(den_) <= tol; }
    bool isReal(double tol = 1e-9) const;

    // affine value num/den; infinite points map to a huge real
    cplx value() const;
    double realValue() const;

private:
    void init(cplx n, cplx d);
    cplx num_, den_;
    bool free_ = false;
};

// d(p,q) = |p - q| / sqrt((1+|p|^2)(1+|q|^2)), with infinity an ordinary point
double chordal(const ProjPoint& p, const ProjPoint& q);

// 2x2 matrix acting on the projective line by x -> (u x + v)/(s x + t),
// considered modulo nonzero scalars.
struct ProjMap {
    cplx u{1.0}, v{0.0}, s{0.0}, t{1.0};

    ProjPoint operator()(const ProjPoint& x) const;
    ProjMap operator*(const ProjMap& o) const; // raw matrix product
    ProjMap adjugate() const { return {t, -v, -s, u}; }
    cplx det() const { return u * t - s * v; }
    double frobenius() const;
    double maxAbs() const;
    ProjMap normalized() const; // unit Frobenius norm
    bool isReal(double tol = 1e-10) const;
};

enum class HingeDirection { Forward, Backward };

// Forward maps y_i to x_{i+1}; backward is the projective inverse.
ProjMap hingeMap(double f, HingeDirection dir = HingeDirection::Forward);

// Composition of the involution x -> k/x with the forward hinge map.
ProjMap isogramMap(cplx k, double f);

// Product in application order: compose({N1,N2,N3}) acts as N3*N2*N1.
// The product is renormalized to unit Frobenius norm.
ProjMap compose(std::span<const ProjMap> maps);

bool isScalar(const ProjMap& m, double tol = 1e-9);

// The unique f in (-1,1] with 2f/(1-f^2) = F. F = infinity maps to f = 1.
double solveHalfAngle(const ProjPoint& F);

// Both solutions F of 2F/(1-F^2) = A, as projective points. The first is
// the (-1,1] branch, the second its projective partner -1/F.
std::pair<ProjPoint, ProjPoint> halfAngleRoots(const ProjPoint& A);

} // namespace koko
