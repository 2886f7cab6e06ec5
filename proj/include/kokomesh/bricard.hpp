#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kokomesh/bipoly.hpp"
#include "kokomesh/projective.hpp"

namespace koko {

// Coefficients of one Bricard quadratic
//   g(x, y) = a x^2 y^2 + b x^2 + c y^2 + x y + e.
struct QuadCoeffs {
    double a = 0.0, b = 0.0, c = 0.0, e = 0.0;
};

struct ValidationReport {
    bool ok = false;
    std::string violated;      // empty when ok
    double productMargin = 0.0; // (1-4ae-4bc)^2 - 64abce
    double cosineMargin = 0.0;  // 1 - |b+c-a-e|
};

// Both defining inequalities, strictly.
ValidationReport validate(const QuadCoeffs& q);

enum class QuadShape {
    Isogram,
    Antiisogram,
    DeltoidIII,
    AntideltoidIV,
    DeltoidV,
    AntideltoidVI,
    Generic
};

struct QuadClass {
    QuadShape shape = QuadShape::Generic;
    bool singular = false;
    bool reducible = false;
};

QuadClass classifyQuad(const QuadCoeffs& q, double tol = 1e-10);
std::string shapeName(QuadShape s);

// For b = c = 0, a e != 0: g = a (xy - k)(xy - k'). Returns (k, k').
std::pair<double, double> factorIsogram(const QuadCoeffs& q);

// Arc lengths of a spherical quadrilateral, all in (0, pi).
struct SphericalQuad {
    double lambda = 0.0, gamma = 0.0, delta = 0.0, mu = 0.0;
};

SphericalQuad recoverAngles(const QuadCoeffs& q);
QuadCoeffs coeffsFromAngles(const SphericalQuad& s);

// closed form for sin^2(mu) in terms of the coefficients
double sinSqMu(const QuadCoeffs& q);

struct MeshMeta {
    std::string constructor;
    std::uint64_t seed = 0;
    std::vector<int> signs;
    std::map<std::string, double> params;
    std::string note;
    int attempts = 0;
};

// Four quads and four hinge parameters f_i in (-1, 1]; quad i couples its
// y_i to x_{i+1} through hinge i. Indices are cyclic modulo 4.
struct MeshCoeffs {
    std::array<QuadCoeffs, 4> quads{};
    std::array<double, 4> f{};
    std::optional<std::string> classTag;
    std::optional<MeshMeta> meta;
};

// Cyclic relabeling: quad i of the result is quad i+r of the input.
MeshCoeffs rotated(const MeshCoeffs& m, int r);

BiPoly gPoly(const QuadCoeffs& q);   // variables (x, y)
BiPoly hPoly(double f);              // variables (y, x')
BiPoly gResultant(const QuadCoeffs& q, double f); // variables (x, x')

enum class QuadFlip { None, FlipY, FlipX };

struct NormalizeRecord {
    std::array<QuadFlip, 4> flips{QuadFlip::None, QuadFlip::None, QuadFlip::None, QuadFlip::None};
    std::array<double, 4> fBefore{};
    std::array<double, 4> fAfter{};
    bool identity() const;
    // configuration map induced on (x_1..x_4): coordinates of quads that
    // had their x flipped go through x -> -1/x
    std::array<bool, 4> xFlipped() const;
};

// Converts every antiisogram to an isogram and every antideltoid to a
// deltoid by half-angle substitutions, updating the touched hinges.
std::pair<MeshCoeffs, NormalizeRecord> normalize(const MeshCoeffs& m);

// hinge parameter update under a half-turn of one endpoint; involutive
double hingeFlip(double f);

// Mesh label in the classification diagram: "isogonal", "constant",
// "adjacent", "opposite", "deltoidal-reducible", "deltoidal-irreducible",
// or "outside scope". Defined in classify.cpp.
std::string classifyMesh(const MeshCoeffs& m);

ProjPoint applyFlips(const ProjPoint& x, bool flip);

} // namespace koko
