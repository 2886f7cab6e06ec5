#include <algorithm>
#include <array>

#include "kokomesh/bricard.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/verify.hpp"

namespace koko {

namespace {

int deltoidSelector(QuadShape s) {
    if (s == QuadShape::DeltoidIII) return 3;
    if (s == QuadShape::DeltoidV) return 5;
    return 0;
}

// reducibility of one mixed deltoid coupling in a normalized mesh
bool couplingReducible(const QuadCoeffs& first, const QuadCoeffs& second, double f) {
    QuadShape s1 = classifyQuad(first).shape;
    if (s1 == QuadShape::DeltoidIII)
        return reducibility35(first, second, f).system != CouplingSystem::Irreducible;
    return reducibility53(first, second, f).system != CouplingSystem::Irreducible;
}

} // namespace

// Structural classes are decided first; meshes that additionally carry a
// constant branch (for example a deltoid pair with a zero hinge) keep
// their structural label, and the purely constant pattern is confirmed by
// the oracle before that label is used.
std::string classifyMesh(const MeshCoeffs& m) {
    if (!std::all_of(m.quads.begin(), m.quads.end(),
                     [](const QuadCoeffs& q) { return validate(q).ok; }))
        return "outside scope";
    auto [norm, rec] = normalize(m);
    std::array<QuadShape, 4> shapes;
    for (int i = 0; i < 4; ++i)
        shapes[static_cast<std::size_t>(i)] = classifyQuad(norm.quads[static_cast<std::size_t>(i)]).shape;

    int isograms = 0, deltoids = 0;
    for (QuadShape s : shapes) {
        if (s == QuadShape::Isogram) ++isograms;
        if (s == QuadShape::DeltoidIII || s == QuadShape::DeltoidV) ++deltoids;
    }
    if (isograms == 4) return "isogonal";

    if (isograms == 2 && deltoids == 2) {
        std::array<bool, 4> iso{};
        for (int i = 0; i < 4; ++i)
            iso[static_cast<std::size_t>(i)] = shapes[static_cast<std::size_t>(i)] == QuadShape::Isogram;
        bool opposite = (iso[0] && iso[2]) || (iso[1] && iso[3]);
        return opposite ? "opposite" : "adjacent";
    }

    if (deltoids == 4) {
        // rotate until both couplings pair a iii-shape with a v-shape
        for (int r = 0; r < 4; ++r) {
            MeshCoeffs rot = rotated(norm, r);
            std::array<int, 4> sel{};
            for (int i = 0; i < 4; ++i)
                sel[static_cast<std::size_t>(i)] =
                    deltoidSelector(classifyQuad(rot.quads[static_cast<std::size_t>(i)]).shape);
            if (sel[0] + sel[1] != 8 || sel[2] + sel[3] != 8) continue; // need {3,5} in each pair
            try {
                bool red1 = couplingReducible(rot.quads[0], rot.quads[1], rot.f[0]);
                bool red2 = couplingReducible(rot.quads[2], rot.quads[3], rot.f[2]);
                return (red1 || red2) ? "deltoidal-reducible" : "deltoidal-irreducible";
            } catch (const ShapeMismatchError&) {
                continue; // degenerate deltoid coefficients
            }
        }
        return "outside scope";
    }

    // constant pattern: some b_i = e_i = 0 and c_j = e_j = 0, i != j,
    // confirmed by a frozen coordinate on the traced branch
    bool pattern = false;
    for (int i = 0; i < 4 && !pattern; ++i) {
        const QuadCoeffs& q = norm.quads[static_cast<std::size_t>(i)];
        if (std::abs(q.b) > 1e-10 || std::abs(q.e) > 1e-10) continue;
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const QuadCoeffs& p = norm.quads[static_cast<std::size_t>(j)];
            if (std::abs(p.c) < 1e-10 && std::abs(p.e) < 1e-10) pattern = true;
        }
    }
    if (pattern) {
        TraceOptions opts;
        opts.samples = 400;
        TraceReport rep = traceOracle(norm, opts);
        if (rep.flexible() && rep.hasConstantBranch()) return "constant";
    }
    return "outside scope";
}

} // namespace koko
