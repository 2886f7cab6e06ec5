#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace koko {

using cplx = std::complex<double>;

// Dense bivariate polynomial; coeff(i,j) multiplies x^i y^j. Trailing zero
// rows and columns are trimmed after every arithmetic operation, at
// threshold 1e-12 relative to the largest coefficient.
class BiPoly {
public:
    static constexpr double kTrimTol = 1e-12;

    BiPoly() = default; // zero polynomial
    static BiPoly constant(cplx c);
    static BiPoly monomial(int dx, int dy, cplx c);

    bool isZero() const { return c_.empty(); }
    int degX() const { return static_cast<int>(c_.size()) - 1; }
    int degY() const { return c_.empty() ? -1 : static_cast<int>(c_[0].size()) - 1; }

    // (deg_x, deg_y); throws ZeroPolynomialError on the zero polynomial
    std::pair<int, int> bidegree() const;

    cplx coeff(int i, int j) const;
    void setCoeff(int i, int j, cplx v);
    double maxAbsCoeff() const;

    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator*(cplx k) const;
    BiPoly operator-() const;

    cplx eval(cplx x, cplx y) const;

    // univariate coefficient lists, ascending degree
    std::vector<cplx> coeffsInYAt(cplx x0) const;
    std::vector<cplx> coeffsInXAt(cplx y0) const;

    // rows as polynomials in y (index = x power) and vice versa
    std::vector<cplx> rowPoly(int i) const;
    std::vector<cplx> colPoly(int j) const;

    BiPoly swapped() const; // exchange the roles of x and y

    BiPoly& trim(double relTol = kTrimTol);

private:
    void ensure(int i, int j);
    std::vector<std::vector<cplx>> c_;
};

// Res(p, q; middle variable): p lives in (x, y), q lives in (y, z); the
// result lives in (x, z). Sylvester determinant expanded by cofactors.
BiPoly resultant(const BiPoly& p, const BiPoly& q);

enum class Var { X, Y };

// b^2 - 4ac of the degree-2-in-`v` view; throws NotQuadraticError otherwise
BiPoly discriminantIn(const BiPoly& p, Var v);

// All finite roots of a univariate complex polynomial (ascending
// coefficients). Tiny leading coefficients are dropped first.
std::vector<cplx> polyRoots(const std::vector<cplx>& coeffs);

// Removes factors depending on a single variable only.
BiPoly stripUnivariateFactors(const BiPoly& p, double tol = 1e-6);

struct CommonFactorReport {
    bool shared = false;
    double fraction = 0.0;
    int usable = 0;
    int skipped = 0;
    std::vector<std::pair<cplx, cplx>> witnesses; // (slice value, shared root)
};

// Samples random complex slices in the first variable and tests whether the
// root sets of the two polynomials in the second variable share a root in
// the chordal metric. Inconclusive slices (leading-coefficient collapse)
// are skipped and counted.
// The default matching tolerance accommodates the repeated factors these
// couplings produce: a double root is only determined to about the square
// root of the coefficient noise.
CommonFactorReport commonFactorHeuristic(const BiPoly& r1, const BiPoly& r3, int samples = 100,
                                         double tol = 1e-4,
                                         std::uint64_t seed = 0x9e3779b97f4a7c15ull);

} // namespace koko
