#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kokomesh/construct.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/geometry.hpp"
#include "kokomesh/rng.hpp"
#include "kokomesh/verify.hpp"

using namespace koko;

namespace {
constexpr double kPi = 3.14159265358979323846;

QuadCoeffs symQuad() { return {-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0}; }

MeshCoeffs symmetricMesh() {
    MeshCoeffs m;
    m.quads = {symQuad(), symQuad(), symQuad(), symQuad()};
    m.f = {0.0, 0.0, 0.0, 0.0};
    return m;
}

double wrapAbs(double a) {
    double r = std::fmod(a, 2 * kPi);
    if (r < -kPi) r += 2 * kPi;
    if (r > kPi) r -= 2 * kPi;
    return std::abs(r);
}

double arcLen(const Vec3& a, const Vec3& b) { return std::acos(std::clamp(dot(a, b), -1.0, 1.0)); }
} // namespace

TEST_CASE("right-angle quad realizes on the orthant") {
    SphericalQuad s{kPi / 2, kPi / 2, kPi / 2, kPi / 2};
    RealizedQuad q = realizeQuad(s, kPi / 2, 0);
    CHECK(norm(q.v[0] - Vec3{0, 0, 1}) < 1e-12);
    CHECK(norm(q.v[1] - Vec3{1, 0, 0}) < 1e-12);
    CHECK(norm(q.v[3] - Vec3{0, 1, 0}) < 1e-12);
    // V2 is one of the two poles of the V1-V3 circle pair; the branch with
    // beta = pi sits at -z
    bool at = norm(q.v[2] - Vec3{0, 0, -1}) < 1e-9 || norm(q.v[2] - Vec3{0, 0, -1}) > 1.9;
    CHECK(at);
    RealizedQuad q2 = realizeQuad(s, kPi / 2, 1);
    bool found = norm(q.v[2] - Vec3{0, 0, -1}) < 1e-9 || norm(q2.v[2] - Vec3{0, 0, -1}) < 1e-9;
    CHECK(found);
    // the -z branch carries beta = pi (the infinite Bricard root)
    for (const RealizedQuad& r : {q, q2})
        if (norm(r.v[2] - Vec3{0, 0, -1}) < 1e-9) CHECK(wrapAbs(r.beta - kPi) < 1e-9);
}

TEST_CASE("realized interior angle matches a Bricard root") {
    Rng rng(61);
    int done = 0;
    while (done < 500) {
        SphericalQuad s{rng.uniform(0.2, kPi - 0.2), rng.uniform(0.2, kPi - 0.2),
                        rng.uniform(0.2, kPi - 0.2), rng.uniform(0.2, kPi - 0.2)};
        double alpha = rng.uniform(0.05, 2 * kPi - 0.05);
        QuadCoeffs qc = coeffsFromAngles(s);
        double x = std::tan(alpha / 2);
        double A = qc.a * x * x + qc.c, B = x, C = qc.b * x * x + qc.e;
        double disc = B * B - 4 * A * C;
        if (disc < 1e-8 || std::abs(A) < 1e-8) continue;
        RealizedQuad rq;
        try {
            rq = realizeQuad(s, alpha, 0);
        } catch (const NoRealConfigurationError&) {
            continue;
        }
        double y = std::tan(rq.beta / 2);
        double r0 = (-B + std::sqrt(disc)) / (2 * A);
        double r1 = (-B - std::sqrt(disc)) / (2 * A);
        double d0 = std::abs(y - r0) / std::sqrt((1 + y * y) * (1 + r0 * r0));
        double d1 = std::abs(y - r1) / std::sqrt((1 + y * y) * (1 + r1 * r1));
        CHECK(std::min(d0, d1) < 1e-8);
        ++done;
    }
}

TEST_CASE("branch pair coalesces at a flexion limit") {
    Rng rng(62);
    auto disc = [](const QuadCoeffs& qc, double alpha) {
        double x = std::tan(alpha / 2);
        return x * x - 4 * (qc.a * x * x + qc.c) * (qc.b * x * x + qc.e);
    };
    int done = 0;
    while (done < 5) {
        SphericalQuad s{rng.uniform(0.4, kPi - 0.4), rng.uniform(0.4, kPi - 0.4),
                        rng.uniform(0.4, kPi - 0.4), rng.uniform(0.4, kPi - 0.4)};
        QuadCoeffs qc = coeffsFromAngles(s);
        // bracket a sign change of the branch discriminant
        double lo = 0.0, hi = 0.0;
        double prev = disc(qc, 0.1);
        for (double a = 0.15; a < kPi; a += 0.05) {
            double cur = disc(qc, a);
            if (prev > 0 && cur < 0) {
                lo = a - 0.05;
                hi = a;
                break;
            }
            prev = cur;
        }
        if (hi == 0.0) continue; // quad flexes through the whole range
        for (int i = 0; i < 60; ++i) {
            double mid = (lo + hi) / 2;
            (disc(qc, mid) >= 0 ? lo : hi) = mid;
        }
        RealizedQuad qa = realizeQuad(s, lo, 0);
        RealizedQuad qb = realizeQuad(s, lo, 1);
        CHECK(norm(qa.v[2] - qb.v[2]) < 1e-3);
        ++done;
    }
}

TEST_CASE("symmetric mesh linkage closes and satisfies the offset identity") {
    MeshCoeffs m = symmetricMesh();
    LinkageFrame f = realizeBestFrame(m, kPi / 2);
    CHECK(f.residual < 1e-7);
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4;
        double lhs = f.beta[static_cast<std::size_t>(i)];
        double rhs = f.alpha[static_cast<std::size_t>(j)] + f.tau[static_cast<std::size_t>(i)] +
                     f.zeta[static_cast<std::size_t>(i)];
        CHECK(wrapAbs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("sweep keeps arc lengths and closure") {
    MeshCoeffs m = symmetricMesh();
    std::array<SphericalQuad, 4> sq;
    for (int i = 0; i < 4; ++i) sq[static_cast<std::size_t>(i)] = recoverAngles(m.quads[static_cast<std::size_t>(i)]);
    int frames = 0;
    for (int k = 0; k < 200; ++k) {
        double alpha = -kPi + (k + 0.5) * 2 * kPi / 200;
        LinkageFrame f;
        try {
            f = realizeBestFrame(m, alpha);
        } catch (const NoRealConfigurationError&) {
            continue;
        }
        ++frames;
        CHECK(f.residual < 1e-7);
        for (int i = 0; i < 4; ++i) {
            const RealizedQuad& q = f.quads[static_cast<std::size_t>(i)];
            const SphericalQuad& s = sq[static_cast<std::size_t>(i)];
            CHECK(std::abs(arcLen(q.v[0], q.v[1]) - s.lambda) < 1e-8);
            CHECK(std::abs(arcLen(q.v[1], q.v[2]) - s.delta) < 1e-8);
            CHECK(std::abs(arcLen(q.v[2], q.v[3]) - s.mu) < 1e-8);
            CHECK(std::abs(arcLen(q.v[3], q.v[0]) - s.gamma) < 1e-8);
        }
    }
    CHECK(frames >= 190);
}

TEST_CASE("rigid mesh leaves a large closure residual") {
    MeshCoeffs m = symmetricMesh();
    m.quads[2].e += 0.1;
    LinkageOptions opts;
    opts.tau1 = 0.8; // the perturbed side lengths no longer close a planar face
    int realized = 0, open = 0;
    for (int k = 0; k < 40; ++k) {
        double alpha = 0.3 + k * (2 * kPi - 0.6) / 40;
        try {
            LinkageFrame f = realizeBestFrame(m, alpha, opts);
            ++realized;
            // a rigid mesh may still close at isolated flexion values; the
            // sweep as a whole must stay open
            if (f.residual > 1e-3) ++open;
        } catch (const NoRealConfigurationError&) {
            continue;
        }
    }
    CHECK(realized >= 1);
    CHECK(open * 10 >= realized * 8);
}

TEST_CASE("embedding closes the central face and keeps it rigid") {
    MeshCoeffs m = symmetricMesh();
    LinkageFrame f = realizeBestFrame(m, kPi / 2);
    Mesh3D solid = embedMesh(m, f, f.tau1);
    CHECK(solid.centralClosureResidual < 1e-10);
    for (double l : solid.sideLengths) CHECK(l > 0.0);
    // interior face angle and the recovered arc are complementary
    for (int i = 0; i < 4; ++i) {
        int prev = (i + 3) % 4, next = (i + 1) % 4;
        Vec3 toPrev = normalized(solid.central[static_cast<std::size_t>(prev)] -
                                 solid.central[static_cast<std::size_t>(i)]);
        Vec3 toNext = normalized(solid.central[static_cast<std::size_t>(next)] -
                                 solid.central[static_cast<std::size_t>(i)]);
        double interior = std::acos(std::clamp(dot(toPrev, toNext), -1.0, 1.0));
        double lambda = recoverAngles(m.quads[static_cast<std::size_t>(i)]).lambda;
        CHECK(std::abs(interior + lambda - kPi) < 1e-9);
    }
}

TEST_CASE("edge lengths are constant across the sweep") {
    MeshCoeffs m = symmetricMesh();
    std::map<std::string, std::pair<double, double>> range;
    int frames = 0;
    for (int k = 0; k < 120; ++k) {
        double alpha = -kPi + (k + 0.5) * 2 * kPi / 120;
        try {
            LinkageFrame f = realizeBestFrame(m, alpha);
            if (f.residual > 1e-7) continue;
            Mesh3D solid = embedMesh(m, f, f.tau1);
            ++frames;
            for (const auto& [name, len] : solid.edgeLengths) {
                auto it = range.find(name);
                if (it == range.end()) range[name] = {len, len};
                else {
                    it->second.first = std::min(it->second.first, len);
                    it->second.second = std::max(it->second.second, len);
                }
            }
        } catch (const NoRealConfigurationError&) {
            continue;
        }
    }
    CHECK(frames >= 100);
    for (const auto& [name, mm] : range) CHECK(mm.second - mm.first < 1e-7);
}

TEST_CASE("obj export writes one vertex and face block per frame") {
    MeshCoeffs m = symmetricMesh();
    LinkageFrame f = realizeBestFrame(m, kPi / 2);
    Mesh3D solid = embedMesh(m, f, f.tau1);
    std::ostringstream os;
    writeObj(os, solid);
    std::string text = os.str();
    int vcount = 0, fcount = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++vcount;
        if (line.rfind("f ", 0) == 0) ++fcount;
    }
    CHECK(vcount == 12);
    CHECK(fcount == 14);
}

TEST_CASE("a constructed singular mesh realizes on its real branch") {
    Seed seed;
    seed.value = 11;
    MeshCoeffs m = constructAdjacentSingular(seed, 2);
    int closing = 0;
    for (int k = 0; k < 60; ++k) {
        double alpha = -kPi + (k + 0.5) * 2 * kPi / 60;
        try {
            LinkageFrame f = realizeBestFrame(m, alpha);
            if (f.residual < 1e-7) {
                ++closing;
                // the embedding may legitimately be infeasible; when it is
                // feasible the face must close
                try {
                    Mesh3D solid = embedMesh(m, f, f.tau1);
                    CHECK(solid.centralClosureResidual < 1e-8);
                } catch (const InfeasibleEmbeddingError&) {
                }
            }
        } catch (const NoRealConfigurationError&) {
            continue;
        }
    }
    CHECK(closing >= 1);
}
