#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kokomesh/bricard.hpp"

namespace koko {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);
Vec3 rotateAbout(const Vec3& axis, const Vec3& v, double angle);
// unit tangent at `from` of the great-circle arc toward `to`
Vec3 tangentToward(const Vec3& from, const Vec3& to);
// point at geodesic distance `dist` from `p` in tangent direction `dir`
Vec3 geodesic(const Vec3& p, const Vec3& dir, double dist);
// counterclockwise angle from t1 to t2 around outward normal n, in [0, 2pi)
double ccwAngle(const Vec3& n, const Vec3& t1, const Vec3& t2);

// both intersection points of the circles dist(x, c1) = r1, dist(x, c2) = r2
std::array<Vec3, 2> sphereCircleIntersect(const Vec3& c1, double r1, const Vec3& c2, double r2);

// One spherical quad with vertices V0 V1 V2 V3 and sides
// lambda (V0V1), delta (V1V2), mu (V2V3), gamma (V3V0).
struct RealizedQuad {
    std::array<Vec3, 4> v{};
    double alpha = 0.0; // interior angle at V0
    double beta = 0.0;  // interior angle at V1
};

// Realizes a quad with V0 at the north pole, V1 on the reference meridian
// and the gamma side rotated counterclockwise by alpha. `branch` picks the
// circle-circle intersection for V2.
RealizedQuad realizeQuad(const SphericalQuad& s, double alpha, int branch);

struct LinkageOptions {
    double tau1 = 0.0;
    int polygonBranch = 0;
};

struct LinkageFrame {
    std::array<RealizedQuad, 4> quads{};
    std::array<Vec3, 4> hub{};      // shared vertices = central edge directions
    std::array<double, 4> alpha{};  // flexion half-angle chain, in [0, 2pi)
    std::array<double, 4> beta{};
    std::array<double, 4> tau{};    // turning angles of the central polygon
    std::array<double, 4> zeta{};   // expected offsets 4*atan(f_i) - tau_i
    std::array<double, 4> zetaMeasured{};
    std::array<double, 4> hingeResidual{};
    double residual = 0.0; // max hinge residual
    double tau1 = 0.0;
};

// Realizes the whole linkage at one flexion value. `branches` selects the
// Bricard root per quad (as in the trace oracle combos); the configuration
// must be real on that branch.
LinkageFrame realizeLinkage(const MeshCoeffs& m, double alpha1, const std::array<int, 4>& branches,
                            const LinkageOptions& opts = {});

// Search the 16 branch combinations for the best-closing real frame.
LinkageFrame realizeBestFrame(const MeshCoeffs& m, double alpha1, const LinkageOptions& opts = {});

struct Mesh3D {
    std::array<Vec3, 4> central{};            // P1..P4
    std::array<double, 4> sideLengths{};      // |P_i P_{i+1}|
    std::array<Vec3, 4> outerA{}, outerB{};   // outer ring vertices at each corner
    std::map<std::string, double> edgeLengths;
    std::vector<std::array<int, 3>> faces;    // triangle indices into vertices()
    std::vector<Vec3> vertices() const;
    double centralClosureResidual = 0.0;
};

// Central face from the frame's edge directions (five-parameter recipe:
// the four interior angles plus tau1), outer ring attached from the
// realized quads. Throws InfeasibleEmbeddingError when the length solve
// goes nonpositive.
Mesh3D embedMesh(const MeshCoeffs& m, const LinkageFrame& frame, double tau1);

void writeObj(std::ostream& os, const Mesh3D& mesh);

} // namespace koko
