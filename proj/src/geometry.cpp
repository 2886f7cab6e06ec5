#include "kokomesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kokomesh/errors.hpp"
#include "kokomesh/verify.hpp"

namespace koko {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap2Pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

double wrapPi(double a) {
    double r = std::fmod(a + kPi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r - kPi;
}
} // namespace

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    if (n == 0.0) throw Error("normalizing zero vector");
    return a * (1.0 / n);
}

Vec3 rotateAbout(const Vec3& axis, const Vec3& v, double angle) {
    Vec3 n = normalized(axis);
    double c = std::cos(angle), s = std::sin(angle);
    return v * c + cross(n, v) * s + n * (dot(n, v) * (1.0 - c));
}

Vec3 tangentToward(const Vec3& from, const Vec3& to) {
    Vec3 t = to - from * dot(to, from);
    double n = norm(t);
    if (n < 1e-12) throw NoRealConfigurationError("degenerate arc (endpoints aligned)");
    return t * (1.0 / n);
}

Vec3 geodesic(const Vec3& p, const Vec3& dir, double dist) {
    return p * std::cos(dist) + dir * std::sin(dist);
}

double ccwAngle(const Vec3& n, const Vec3& t1, const Vec3& t2) {
    double c = dot(t1, t2);
    double s = dot(n, cross(t1, t2));
    return wrap2Pi(std::atan2(s, c));
}

std::array<Vec3, 2> sphereCircleIntersect(const Vec3& c1, double r1, const Vec3& c2, double r2) {
    double d1 = std::cos(r1), d2 = std::cos(r2);
    double g = dot(c1, c2);
    double det = 1.0 - g * g;
    if (det < 1e-14) throw NoRealConfigurationError("circle centers aligned");
    double u = (d1 - d2 * g) / det;
    double v = (d2 - d1 * g) / det;
    Vec3 base = c1 * u + c2 * v;
    double rem = 1.0 - dot(base, base);
    if (rem < -1e-12) throw NoRealConfigurationError("circles do not intersect");
    rem = std::max(rem, 0.0);
    Vec3 perp = normalized(cross(c1, c2)) * std::sqrt(rem);
    return {base + perp, base - perp};
}

RealizedQuad realizeQuad(const SphericalQuad& s, double alpha, int branch) {
    RealizedQuad out;
    out.alpha = wrap2Pi(alpha);
    Vec3 V0{0.0, 0.0, 1.0};
    Vec3 V1{std::sin(s.lambda), 0.0, std::cos(s.lambda)};
    Vec3 gdir{std::cos(out.alpha), std::sin(out.alpha), 0.0};
    Vec3 V3 = geodesic(V0, gdir, s.gamma);
    auto cand = sphereCircleIntersect(V1, s.delta, V3, s.mu);
    Vec3 V2 = cand[branch == 0 ? 0 : 1];
    out.v = {V0, V1, V2, V3};
    Vec3 tl = tangentToward(V1, V0);
    Vec3 td = tangentToward(V1, V2);
    out.beta = ccwAngle(V1, td, tl);
    return out;
}

namespace {

// parity of the angle conventions: +1 for quads 1 and 3, -1 for 2 and 4
int parity(int i) { return (i % 2 == 0) ? +1 : -1; } // i is 0-based

struct PlacedQuad {
    std::array<Vec3, 4> v{};
    double beta = 0.0;
};

// place one quad between hub points a = V0, b = V1 with prescribed alpha,
// selecting the V2 branch that matches the Bricard root y
PlacedQuad placeQuad(const SphericalQuad& s, const Vec3& a, const Vec3& b, double alpha, int par,
                     double yTarget, bool yInfinite) {
    PlacedQuad out;
    Vec3 lamDir = tangentToward(a, b);
    Vec3 gamDir = rotateAbout(a, lamDir, par > 0 ? alpha : -alpha);
    Vec3 V3 = geodesic(a, gamDir, s.gamma);
    auto cand = sphereCircleIntersect(b, s.delta, V3, s.mu);
    Vec3 tl = tangentToward(b, a);
    double bestErr = 1e300;
    for (const Vec3& V2 : cand) {
        Vec3 td = tangentToward(b, V2);
        double beta = par > 0 ? ccwAngle(b, td, tl) : ccwAngle(b, tl, td);
        double yGeo = std::tan(beta / 2.0);
        double err;
        if (yInfinite) {
            err = std::abs(std::cos(beta / 2.0));
        } else {
            err = std::abs(yGeo - yTarget) / std::sqrt((1.0 + yGeo * yGeo) * (1.0 + yTarget * yTarget));
        }
        if (err < bestErr) {
            bestErr = err;
            out.v = {a, b, V2, V3};
            out.beta = beta;
        }
    }
    return out;
}

} // namespace

LinkageFrame realizeLinkage(const MeshCoeffs& m, double alpha1, const std::array<int, 4>& branches,
                            const LinkageOptions& opts) {
    LinkageFrame frame;
    frame.tau1 = opts.tau1;
    std::array<SphericalQuad, 4> sq;
    for (int i = 0; i < 4; ++i) sq[static_cast<std::size_t>(i)] = recoverAngles(m.quads[static_cast<std::size_t>(i)]);

    // algebraic chain on the selected branches; must stay real
    int combo = branches[0] | (branches[1] << 1) | (branches[2] << 2) | (branches[3] << 3);
    ProjPoint x1(std::tan(alpha1 / 2.0));
    ChainResult chain = chaseCycle(m, x1, combo, false);
    if (!chain.ok) throw NoRealConfigurationError("no real Bricard branch at this flexion value");
    for (int i = 0; i < 4; ++i) {
        const ProjPoint& xi = chain.x[static_cast<std::size_t>(i)];
        const ProjPoint& yi = chain.y[static_cast<std::size_t>(i)];
        if (xi.isFree() || yi.isFree())
            throw NoRealConfigurationError("unconstrained flexion coordinate on this branch");
        frame.alpha[static_cast<std::size_t>(i)] =
            xi.isInfinite() ? kPi : wrap2Pi(2.0 * std::atan(xi.realValue()));
        frame.beta[static_cast<std::size_t>(i)] =
            yi.isInfinite() ? kPi : wrap2Pi(2.0 * std::atan(yi.realValue()));
    }

    // central polygon: hub_i carries the hinge between quads i and i+1;
    // side hub_{i-1} -> hub_i is the lambda arc of quad i. The turning at
    // hub_0 is fixed by tau1, the rest is closed by a circle intersection.
    std::array<double, 4> lam;
    for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = sq[static_cast<std::size_t>(i)].lambda;
    Vec3 h0{0.0, 0.0, 1.0};
    Vec3 cont{1.0, 0.0, 0.0}; // continuation of the arc arriving from hub_3
    Vec3 h3 = geodesic(h0, -cont, lam[0]);
    // first hinge is in the odd orientation: ccw(outgoing -> continuation) = tau1
    Vec3 out0 = rotateAbout(h0, cont, -opts.tau1);
    Vec3 h1 = geodesic(h0, out0, lam[1]);
    Vec3 h2;
    if (std::abs(dot(h1, h3)) > 1.0 - 1e-12) {
        // aligned centers: the intersection is a whole circle (planar
        // face family); take the representative in the h0-h1 plane
        h2 = geodesic(h1, tangentToward(h1, -h0), lam[2]);
        if (std::abs(std::acos(std::clamp(dot(h2, h3), -1.0, 1.0)) - lam[3]) > 1e-9)
            throw NoRealConfigurationError("central polygon does not close");
    } else {
        auto cand = sphereCircleIntersect(h1, lam[2], h3, lam[3]);
        h2 = cand[opts.polygonBranch == 0 ? 0 : 1];
    }
    frame.hub = {h0, h1, h2, h3};

    // turning angles at every hub, with the alternating orientation
    for (int i = 0; i < 4; ++i) {
        const Vec3& prev = frame.hub[static_cast<std::size_t>((i + 3) % 4)];
        const Vec3& here = frame.hub[static_cast<std::size_t>(i)];
        const Vec3& next = frame.hub[static_cast<std::size_t>((i + 1) % 4)];
        Vec3 c = -tangentToward(here, prev);
        Vec3 o = tangentToward(here, next);
        int par = parity(i);
        double tau = par > 0 ? ccwAngle(here, o, c) : ccwAngle(here, c, o);
        frame.tau[static_cast<std::size_t>(i)] = tau;
    }
    for (int i = 0; i < 4; ++i)
        frame.zeta[static_cast<std::size_t>(i)] =
            4.0 * std::atan(m.f[static_cast<std::size_t>(i)]) - frame.tau[static_cast<std::size_t>(i)];

    // place the quads: quad i spans hub_{i-1} -> hub_i
    for (int i = 0; i < 4; ++i) {
        const Vec3& a = frame.hub[static_cast<std::size_t>((i + 3) % 4)];
        const Vec3& b = frame.hub[static_cast<std::size_t>(i)];
        const ProjPoint& yi = chain.y[static_cast<std::size_t>(i)];
        PlacedQuad pq = placeQuad(sq[static_cast<std::size_t>(i)], a, b,
                                  frame.alpha[static_cast<std::size_t>(i)], parity(i),
                                  yi.isInfinite() ? 0.0 : yi.realValue(), yi.isInfinite());
        frame.quads[static_cast<std::size_t>(i)].v = pq.v;
        frame.quads[static_cast<std::size_t>(i)].alpha = frame.alpha[static_cast<std::size_t>(i)];
        frame.quads[static_cast<std::size_t>(i)].beta = pq.beta;
    }

    // hinge residuals: measured zeta offsets against the expected ones
    for (int i = 0; i < 4; ++i) {
        const RealizedQuad& qi = frame.quads[static_cast<std::size_t>(i)];
        const RealizedQuad& qn = frame.quads[static_cast<std::size_t>((i + 1) % 4)];
        const Vec3& hb = frame.hub[static_cast<std::size_t>(i)];
        Vec3 dCont = -tangentToward(hb, qi.v[2]);  // continuation of the delta arc
        Vec3 gDir = tangentToward(hb, qn.v[3]);    // gamma side of the next quad
        int par = parity(i);
        double zm = par > 0 ? ccwAngle(hb, dCont, gDir) : ccwAngle(hb, gDir, dCont);
        frame.zetaMeasured[static_cast<std::size_t>(i)] = zm;
        double res = std::abs(wrapPi(zm - frame.zeta[static_cast<std::size_t>(i)]));
        frame.hingeResidual[static_cast<std::size_t>(i)] = res;
        frame.residual = std::max(frame.residual, res);
    }
    return frame;
}

LinkageFrame realizeBestFrame(const MeshCoeffs& m, double alpha1, const LinkageOptions& opts) {
    LinkageFrame best;
    double bestRes = 1e300;
    bool found = false;
    for (int combo = 0; combo < 16; ++combo) {
        std::array<int, 4> branches = {combo & 1, (combo >> 1) & 1, (combo >> 2) & 1,
                                       (combo >> 3) & 1};
        try {
            LinkageFrame f = realizeLinkage(m, alpha1, branches, opts);
            if (f.residual < bestRes) {
                bestRes = f.residual;
                best = f;
                found = true;
            }
        } catch (const NoRealConfigurationError&) {
            continue;
        }
    }
    if (!found) throw NoRealConfigurationError("no real configuration at this flexion value");
    return best;
}

std::vector<Vec3> Mesh3D::vertices() const {
    std::vector<Vec3> out(central.begin(), central.end());
    out.insert(out.end(), outerA.begin(), outerA.end());
    out.insert(out.end(), outerB.begin(), outerB.end());
    return out;
}

Mesh3D embedMesh(const MeshCoeffs& m, const LinkageFrame& frame, double tau1) {
    (void)m;
    if (std::abs(tau1 - frame.tau1) > 1e-12)
        throw Error("embedMesh needs the frame realized with the same tau1");
    Mesh3D out;
    // edge directions: d_i = hub_i points from P_i to P_{i+1}
    const std::array<Vec3, 4>& d = frame.hub;
    // solve l2 d1 + l3 d2 + l4 d3 = -d0 with l1 = 1 (0-based directions)
    double A[3][3] = {{d[1].x, d[2].x, d[3].x}, {d[1].y, d[2].y, d[3].y}, {d[1].z, d[2].z, d[3].z}};
    double rhs[3] = {-d[0].x, -d[0].y, -d[0].z};
    // Regularized least squares around unit lengths with iterative
    // refinement. A planar face makes the system singular (a whole affine
    // family of solutions); this picks the member closest to unit lengths
    // and still reproduces the unique solution in the regular case.
    auto lsSolve = [&](const double r[3], double x[3]) {
        double AtA[3][3], Atr[3];
        for (int i = 0; i < 3; ++i) {
            Atr[i] = 0.0;
            for (int k = 0; k < 3; ++k) Atr[i] += A[k][i] * r[k];
            for (int j = 0; j < 3; ++j) {
                AtA[i][j] = (i == j) ? 1e-9 : 0.0;
                for (int k = 0; k < 3; ++k) AtA[i][j] += A[k][i] * A[k][j];
            }
        }
        double dd = AtA[0][0] * (AtA[1][1] * AtA[2][2] - AtA[1][2] * AtA[2][1]) -
                    AtA[0][1] * (AtA[1][0] * AtA[2][2] - AtA[1][2] * AtA[2][0]) +
                    AtA[0][2] * (AtA[1][0] * AtA[2][1] - AtA[1][1] * AtA[2][0]);
        if (std::abs(dd) < 1e-30) throw InfeasibleEmbeddingError("edge directions are degenerate");
        for (int col = 0; col < 3; ++col) {
            double B[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) B[i][j] = (j == col) ? Atr[i] : AtA[i][j];
            x[col] = (B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                      B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                      B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0])) /
                     dd;
        }
    };
    double r0[3];
    for (int k = 0; k < 3; ++k) r0[k] = rhs[k] - (A[k][0] + A[k][1] + A[k][2]);
    double delta[3];
    lsSolve(r0, delta);
    for (int pass = 0; pass < 4; ++pass) {
        double resid[3];
        for (int k = 0; k < 3; ++k)
            resid[k] = r0[k] - (A[k][0] * delta[0] + A[k][1] * delta[1] + A[k][2] * delta[2]);
        double corr[3];
        lsSolve(resid, corr);
        for (int k = 0; k < 3; ++k) delta[k] += corr[k];
    }
    std::array<double, 4> ell = {1.0, 1.0 + delta[0], 1.0 + delta[1], 1.0 + delta[2]};
    for (int k = 0; k < 3; ++k) {
        double resid = -rhs[k];
        for (int c = 0; c < 3; ++c) resid += A[k][c] * ell[static_cast<std::size_t>(c + 1)];
        if (std::abs(resid) > 1e-8)
            throw InfeasibleEmbeddingError("central face closure has no solution");
    }
    for (double l : ell)
        if (l <= 0.0) throw InfeasibleEmbeddingError("nonpositive central edge length");
    out.sideLengths = ell;
    out.central[0] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        out.central[static_cast<std::size_t>(i + 1)] =
            out.central[static_cast<std::size_t>(i)] + d[static_cast<std::size_t>(i)] * ell[static_cast<std::size_t>(i)];
    Vec3 closure = out.central[3] + d[3] * ell[3] - out.central[0];
    out.centralClosureResidual = norm(closure);

    // outer ring: quad i sits at corner P_i; its delta-side edge leaves
    // along V2 and its gamma-side edge along the flipped V3
    const double leg = 0.5;
    for (int i = 0; i < 4; ++i) {
        const RealizedQuad& q = frame.quads[static_cast<std::size_t>(i)];
        out.outerA[static_cast<std::size_t>(i)] =
            out.central[static_cast<std::size_t>(i)] + q.v[2] * leg;
        out.outerB[static_cast<std::size_t>(i)] =
            out.central[static_cast<std::size_t>(i)] - q.v[3] * leg;
    }

    auto edge = [&](const std::string& name, const Vec3& a, const Vec3& b) {
        out.edgeLengths[name] = norm(a - b);
    };
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        edge("central" + std::to_string(i + 1), out.central[static_cast<std::size_t>(i)],
             out.central[static_cast<std::size_t>(j)]);
        edge("legA" + std::to_string(i + 1), out.central[static_cast<std::size_t>(i)],
             out.outerA[static_cast<std::size_t>(i)]);
        edge("legB" + std::to_string(i + 1), out.central[static_cast<std::size_t>(i)],
             out.outerB[static_cast<std::size_t>(i)]);
        edge("corner" + std::to_string(i + 1), out.outerA[static_cast<std::size_t>(i)],
             out.outerB[static_cast<std::size_t>(i)]);
        edge("rim" + std::to_string(i + 1), out.outerA[static_cast<std::size_t>(i)],
             out.outerB[static_cast<std::size_t>(j)]);
    }

    // faces (indices: central 0..3, outerA 4..7, outerB 8..11)
    out.faces.push_back({0, 1, 2});
    out.faces.push_back({0, 2, 3});
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        int Pi = i, Pj = j, Ai = 4 + i, Bj = 8 + j, Bi = 8 + i;
        out.faces.push_back({Pi, Ai, Bj});  // edge face, split
        out.faces.push_back({Pi, Bj, Pj});
        out.faces.push_back({Pi, Bi, Ai}); // corner triangle
    }
    return out;
}

void writeObj(std::ostream& os, const Mesh3D& mesh) {
    char buf[128];
    for (const Vec3& v : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        os << buf;
    }
    for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

} // namespace koko
