#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>

#include "kokomesh/construct.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/geometry.hpp"
#include "kokomesh/mesh_io.hpp"
#include "kokomesh/verify.hpp"

namespace py = pybind11;
using namespace koko;

namespace {

Seed makeSeed(std::uint64_t value, const std::map<std::string, double>& params,
              const std::optional<std::vector<int>>& signs, int budget) {
    Seed s;
    s.value = value;
    s.params = params;
    s.signs = signs;
    s.retryBudget = budget;
    return s;
}

py::dict traceDict(const TraceReport& rep) {
    py::dict d;
    d["closure_fraction"] = rep.closureFraction;
    d["best_fraction"] = rep.bestFraction;
    d["sweep_rotation"] = rep.sweepRotation;
    d["flexible"] = rep.flexible();
    d["usable"] = rep.usable;
    d["closing"] = rep.closing;
    d["max_residual"] = rep.maxResidual;
    d["median_residual"] = rep.medianResidual;
    py::list frozen;
    for (const auto& [idx, val] : rep.frozenCoords) {
        py::dict f;
        f["coordinate"] = idx;
        if (val.isInfinite()) f["value"] = py::str("inf");
        else f["value"] = val.value();
        frozen.append(f);
    }
    d["frozen"] = frozen;
    py::list hist;
    for (int h : rep.branchHistogram) hist.append(h);
    d["branch_histogram"] = hist;
    return d;
}

} // namespace

PYBIND11_MODULE(kokomesh, m) {
    m.doc() = "Flexible 3x3 quadrilateral meshes with skew faces: construction, "
              "classification, verification and geometric realization.";

    // translators run newest-first, so the base class goes first
    py::register_exception<Error>(m, "KokomeshError");
    py::register_exception<SearchExhaustedError>(m, "SearchExhausted");
    py::register_exception<HypothesisViolatedError>(m, "HypothesisViolated");
    py::register_exception<ParseError>(m, "ParseFailure");

    py::class_<QuadCoeffs>(m, "Quad")
        .def(py::init<>())
        .def(py::init([](double a, double b, double c, double e) {
                 return QuadCoeffs{a, b, c, e};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("e"))
        .def_readwrite("a", &QuadCoeffs::a)
        .def_readwrite("b", &QuadCoeffs::b)
        .def_readwrite("c", &QuadCoeffs::c)
        .def_readwrite("e", &QuadCoeffs::e)
        .def("__repr__", [](const QuadCoeffs& q) {
            return "Quad(a=" + std::to_string(q.a) + ", b=" + std::to_string(q.b) +
                   ", c=" + std::to_string(q.c) + ", e=" + std::to_string(q.e) + ")";
        });

    py::class_<MeshCoeffs>(m, "Mesh")
        .def(py::init<>())
        .def_readwrite("quads", &MeshCoeffs::quads)
        .def_readwrite("f", &MeshCoeffs::f)
        .def_property(
            "class_tag", [](const MeshCoeffs& mm) { return mm.classTag.value_or(""); },
            [](MeshCoeffs& mm, const std::string& v) { mm.classTag = v; })
        .def("constructor_note",
             [](const MeshCoeffs& mm) { return mm.meta ? mm.meta->note : std::string{}; })
        .def("__repr__", [](const MeshCoeffs& mm) {
            return "Mesh(class=" + mm.classTag.value_or("?") + ")";
        });

    m.def(
        "validate",
        [](const QuadCoeffs& q) {
            ValidationReport r = validate(q);
            return py::make_tuple(r.ok, r.violated);
        },
        py::arg("quad"), "Check the two coefficient inequalities; returns (ok, violated).");

    m.def(
        "classify_quad",
        [](const QuadCoeffs& q) {
            QuadClass c = classifyQuad(q);
            py::dict d;
            d["shape"] = shapeName(c.shape);
            d["singular"] = c.singular;
            d["reducible"] = c.reducible;
            return d;
        },
        py::arg("quad"));

    m.def("classify_mesh", &classifyMesh, py::arg("mesh"),
          "Mesh label: isogonal, constant, adjacent, opposite, deltoidal-reducible, "
          "deltoidal-irreducible, or 'outside scope'.");

    m.def(
        "construct",
        [](const std::string& cls, std::uint64_t seed, const std::map<std::string, double>& params,
           const std::optional<std::vector<int>>& signs, int budget) {
            return constructByName(cls, makeSeed(seed, params, signs, budget));
        },
        py::arg("class_name"), py::arg("seed") = 0, py::arg("params") = std::map<std::string, double>{},
        py::arg("signs") = std::nullopt, py::arg("retry_budget") = 10000,
        "Build a flexible mesh of the given class. Extra knobs (j, option, system) "
        "are passed through params.");

    m.def(
        "trace",
        [](const MeshCoeffs& mesh, int samples, double tol, bool allowComplex) {
            TraceOptions o;
            o.samples = samples;
            o.tol = tol;
            o.allowComplex = allowComplex;
            return traceDict(traceOracle(mesh, o));
        },
        py::arg("mesh"), py::arg("samples") = 1000, py::arg("tol") = 1e-7,
        py::arg("allow_complex") = true,
        "Chase the Bricard root branches around the hinge cycle and report closure.");

    m.def(
        "scalar_check",
        [](const MeshCoeffs& mesh) {
            ScalarCheckResult r = scalarCheck(mesh);
            py::dict d;
            d["scalar"] = r.scalar;
            d["signs"] = r.signs;
            d["value"] = r.scalarValue;
            return d;
        },
        py::arg("mesh"), "Scalar matrix test over the sixteen factor-sign combinations.");

    m.def(
        "gcd_check", [](const MeshCoeffs& mesh) { return resultantGcdCheck(mesh); },
        py::arg("mesh"),
        "Common-factor test of the two coupling resultants (needs no constant branch).");

    m.def(
        "normalize",
        [](const MeshCoeffs& mesh) {
            auto [n, rec] = normalize(mesh);
            py::dict d;
            py::list flips;
            for (QuadFlip f : rec.flips)
                flips.append(f == QuadFlip::None ? "none" : (f == QuadFlip::FlipY ? "y" : "x"));
            d["flips"] = flips;
            d["f_before"] = rec.fBefore;
            d["f_after"] = rec.fAfter;
            return py::make_tuple(n, d);
        },
        py::arg("mesh"), "Convert anti-quads away; returns (mesh, transform_record).");

    m.def(
        "recover_angles",
        [](const QuadCoeffs& q) {
            SphericalQuad s = recoverAngles(q);
            return py::make_tuple(s.lambda, s.gamma, s.delta, s.mu);
        },
        py::arg("quad"), "Arc lengths (lambda, gamma, delta, mu) of the spherical quad.");

    m.def(
        "coeffs_from_angles",
        [](double lambda, double gamma, double delta, double mu) {
            return coeffsFromAngles({lambda, gamma, delta, mu});
        },
        py::arg("lambda_"), py::arg("gamma"), py::arg("delta"), py::arg("mu"));

    m.def(
        "solve_half_angle",
        [](double F, bool infinite) {
            return solveHalfAngle(infinite ? ProjPoint::infinity() : ProjPoint(F));
        },
        py::arg("F"), py::arg("infinite") = false);

    m.def("to_json", [](const MeshCoeffs& mesh) { return meshToJson(mesh); }, py::arg("mesh"));
    m.def("from_json", &meshFromJson, py::arg("text"));
    m.def("read_mesh", &readMeshFile, py::arg("path"));
    m.def(
        "write_mesh", [](const std::string& path, const MeshCoeffs& mesh) { writeMeshFile(path, mesh); },
        py::arg("path"), py::arg("mesh"));

    m.def(
        "linkage_frame",
        [](const MeshCoeffs& mesh, double alpha1, double tau1) {
            LinkageOptions o;
            o.tau1 = tau1;
            LinkageFrame f = realizeBestFrame(mesh, alpha1, o);
            py::dict d;
            d["residual"] = f.residual;
            d["alpha"] = f.alpha;
            d["beta"] = f.beta;
            d["tau"] = f.tau;
            d["zeta"] = f.zeta;
            return d;
        },
        py::arg("mesh"), py::arg("alpha1"), py::arg("tau1") = 0.0,
        "Realize the spherical linkage at one flexion value; residual is the "
        "hinge-closure mismatch.");

    m.def(
        "sweep_obj",
        [](const MeshCoeffs& mesh, const std::string& outDir, double tau1, int frames) {
            std::filesystem::create_directories(outDir);
            LinkageOptions o;
            o.tau1 = tau1;
            int written = 0;
            for (int k = 0; k < frames; ++k) {
                double alpha = -3.14159265358979323846 +
                               (k + 0.5) * 2.0 * 3.14159265358979323846 / frames;
                try {
                    LinkageFrame f = realizeBestFrame(mesh, alpha, o);
                    if (f.residual > 1e-6) continue;
                    Mesh3D solid = embedMesh(mesh, f, tau1);
                    char name[64];
                    std::snprintf(name, sizeof name, "frame_%04d.obj", k);
                    std::ofstream obj(std::filesystem::path(outDir) / name);
                    writeObj(obj, solid);
                    ++written;
                } catch (const NoRealConfigurationError&) {
                } catch (const InfeasibleEmbeddingError&) {
                }
            }
            return written;
        },
        py::arg("mesh"), py::arg("out_dir"), py::arg("tau1") = 0.0, py::arg("frames") = 24,
        "Sweep the flexion, embed every closing real frame and write OBJ files; "
        "returns the number of frames written.");
}
