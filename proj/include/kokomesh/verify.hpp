#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kokomesh/bipoly.hpp"
#include "kokomesh/bricard.hpp"
#include "kokomesh/projective.hpp"

namespace koko {

struct TraceOptions {
    int samples = 1000;
    double tol = 1e-7;
    bool allowComplex = true;
};

struct TraceReport {
    // fraction over the x_1 sweep
    double closureFraction = 0.0;
    int usable = 0;
    int closing = 0;
    std::array<int, 16> branchHistogram{};
    // coordinates frozen along the best-closing branch, in the input's
    // numbering (index 1..4)
    std::vector<std::pair<int, ProjPoint>> frozenCoords;
    double maxResidual = 0.0;
    double medianResidual = 0.0;
    // A branch can be invisible to the x_1 sweep when x_1 is its frozen
    // coordinate; the sweep is then repeated from the other corners.
    double bestFraction = 0.0;
    int sweepRotation = 0;

    bool flexible() const { return bestFraction >= 0.95; }
    bool hasConstantBranch() const { return !frozenCoords.empty(); }
};

// Chases all 16 root-branch combinations of the four Bricard quadratics
// around the hinge cycle, on a uniform half-angle grid, and measures how
// often the cycle closes in the chordal metric. If the x_1 sweep stays
// open, the rotated sweeps are tried so the verdict is invariant under
// cyclic relabeling.
TraceReport traceOracle(const MeshCoeffs& m, const TraceOptions& opts = {});

// One chase from a given start point with a fixed branch combination.
// Returns the coordinates x_1..x_4 and the returned x_1'; empty when a
// branch dies (no admissible root).
struct ChainResult {
    std::array<ProjPoint, 4> x;
    std::array<ProjPoint, 4> y;
    ProjPoint back;
    bool ok = false;
};
ChainResult chaseCycle(const MeshCoeffs& m, const ProjPoint& x1, int combo, bool allowComplex);

struct ScalarCheckResult {
    bool scalar = false;
    std::array<int, 4> signs{};
    ProjMap product;     // raw product for the witnessing combination
    cplx scalarValue{0.0};
};

// For a mesh of four isograms: searches the 16 factor-sign combinations
// for one whose matrix product is scalar.
ScalarCheckResult scalarCheck(const MeshCoeffs& m, double tol = 1e-9);

// gcd-style test on the two coupling resultants, after removing
// single-variable factors. Requires a constant-branch-free mesh; pass a
// precomputed trace report to avoid re-running the oracle.
bool resultantGcdCheck(const MeshCoeffs& m, const TraceReport* trace = nullptr,
                       int samples = 100, double tol = 1e-4);

// --- reduced couplings -----------------------------------------------------

// A prime-factor shape of one Bricard quadratic:
//   j = 1: x y - k;   j = 3: a x y^2 + b x + y;   j = 5: a x^2 y + c y + x;
//   j = 0: the full irreducible quadratic.
struct FactorShape {
    int j = 0;
    QuadCoeffs full{}; // used when j == 0
    double a = 0.0, b = 0.0, c = 0.0, k = 0.0;

    BiPoly poly() const;                  // in (x_i, y_i)
    std::pair<int, int> expectedDegree() const;
};

FactorShape isogramFactor(const QuadCoeffs& q, int which);
FactorShape deltoidFactor(const QuadCoeffs& q); // for shapes iii (j=3) and v (j=5)

// Two consecutive factor choices with their hinges. `firstQuad` is the
// 0-based index of the first quad (0 for the front coupling, 2 for the
// rear one); it fixes the variable alignment when two couplings are
// compared on the same plane.
struct ReducedCoupling {
    FactorShape first, second;
    double f1 = 0.0, f2 = 0.0;
    int firstQuad = 0;

    BiPoly GFirst() const;          // Res(first, hinge1)
    BiPoly GSecond() const;
    BiPoly smallResultant() const;  // r: eliminate the middle flexion variable from (G1, g2)
    BiPoly bigResultant() const;    // R: eliminate it from (G1, G2)
};

// --- reducibility of mixed deltoid couplings --------------------------------

enum class CouplingSystem { Irreducible, System1, System2, System3, RealInfeasible };

struct ReducibilityResult {
    CouplingSystem system = CouplingSystem::Irreducible;
    std::optional<BiPoly> factor; // a factor of r in (x_1, y_2) when known
    double residual = 0.0;        // factorization check residual
};

// coupling (deltoid-iii shape, deltoid-v shape): quads (a1,b1,0,0), (a2,0,c2,0)
ReducibilityResult reducibility35(const QuadCoeffs& q1, const QuadCoeffs& q2, double f1,
                                  double tol = 1e-10);

// coupling (deltoid-v shape, deltoid-iii shape): quads (a1,0,c1,0), (a2,b2,0,0)
ReducibilityResult reducibility53(const QuadCoeffs& q1, const QuadCoeffs& q2, double f1,
                                  double tol = 1e-10);

// Admissible factor-selector combinations for a split into two couplings.
bool combinationCheck(int j1, int j2, int j3, int j4);

struct RatioResult {
    bool constant = false;
    cplx value{0.0};
    double magnitudeSpread = 0.0;
    double phaseSpread = 0.0;
};

// Tests whether the two coupling resultants differ by a constant factor on
// an evaluation grid. The second coupling's variables are aligned so both
// are compared as functions of (x_1, x_3).
RatioResult ratioConstancy(const ReducedCoupling& s1, const ReducedCoupling& s2, int grid = 20,
                           double tol = 1e-8);

// closed-form factor of r for each reducible coupling system, as
// (p x + q) y - (m x + n) coefficients
struct LinearFactor {
    double m = 0.0, n = 0.0, p = 0.0, q = 0.0;
    ProjMap toMap() const { return {cplx(m), cplx(n), cplx(p), cplx(q)}; }
    BiPoly poly() const;
};

LinearFactor system1Factor(double a1, double b1, double a2, double c2, double f1);
LinearFactor system2Factor(double a1, double a2);
LinearFactor system3Factor(double a1, double c2);
LinearFactor system4FactorLinear(double a1, double a2);   // a2 y - a1 x
LinearFactor system4FactorIsogram(double k);               // x y - k

} // namespace koko
