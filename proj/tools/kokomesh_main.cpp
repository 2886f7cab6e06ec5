#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kokomesh/construct.hpp"
#include "kokomesh/errors.hpp"
#include "kokomesh/geometry.hpp"
#include "kokomesh/mesh_io.hpp"
#include "kokomesh/verify.hpp"

namespace {

using namespace koko;

// exit codes: 0 ok, 2 search exhausted, 3 invalid parameters,
// 4 input parse/validation failure, 5 gcd hypothesis violated
constexpr int kExitSearch = 2;
constexpr int kExitParams = 3;
constexpr int kExitInput = 4;
constexpr int kExitHypothesis = 5;

std::map<std::string, double> parseParams(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        auto pos = kv.find('=');
        if (pos == std::string::npos) throw InvalidParamError("expected name=value, got " + kv);
        std::string name = kv.substr(0, pos);
        try {
            out[name] = std::stod(kv.substr(pos + 1));
        } catch (const std::exception&) {
            throw InvalidParamError("cannot parse value in " + kv);
        }
    }
    return out;
}

void checkConstructorParams(const std::string& cls, const std::map<std::string, double>& params) {
    static const std::map<std::string, std::vector<std::string>> known = {
        {"isogonal", {"a1", "e1", "a2", "e2", "a3", "e3", "a4", "f1", "f2"}},
        {"constant", {"j", "a1", "c1", "aj", "bj"}},
        {"adjacent", {"system", "a1", "a2", "b1", "c2", "k", "a3", "e3", "a4", "f1", "f2"}},
        {"opposite", {"a1", "a2", "b2", "a3", "U", "S"}},
        {"deltoidal-reducible",
         {"option", "system", "a1", "a2", "b1", "c2", "k", "a3", "a4", "f1", "f2", "f4"}},
        {"deltoidal-irreducible", {"a1", "a2", "a3"}},
    };
    auto it = known.find(cls);
    if (it == known.end()) throw InvalidParamError("unknown class " + cls);
    for (const auto& [name, value] : params) {
        (void)value;
        if (std::find(it->second.begin(), it->second.end(), name) == it->second.end())
            throw InvalidParamError("parameter " + name + " is not used by class " + cls);
    }
    // nonzero coefficient draws; zero pins can never satisfy them
    for (const char* coef : {"a1", "e1", "a2", "e2", "a3", "e3", "a4", "b1", "b2", "c1", "c2", "k",
                             "aj", "bj", "b3"}) {
        auto p = params.find(coef);
        if (p != params.end() && p->second == 0.0)
            throw InvalidParamError(std::string("parameter ") + coef + " must be nonzero");
    }
}

std::string projToString(const ProjPoint& p) {
    if (p.isInfinite()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", p.realValue());
    return buf;
}

int runVerify(const MeshCoeffs& mesh, const std::string& method, int samples, double tol) {
    TraceOptions opts;
    opts.samples = samples;
    opts.tol = tol;
    TraceReport rep = traceOracle(mesh, opts);
    bool printed = false;
    if (method == "trace" || method == "all") {
        std::printf("trace: %s (closure_fraction=%.6f, samples=%d, max_residual=%.3g)\n",
                    rep.flexible() ? "flexible" : "rigid", rep.closureFraction, rep.usable,
                    rep.maxResidual);
        for (const auto& [idx, val] : rep.frozenCoords)
            std::printf("trace: frozen coordinate x%d = %s\n", idx, projToString(val).c_str());
        printed = true;
    }
    if (method == "gcd" || method == "all") {
        if (rep.hasConstantBranch()) {
            std::printf("gcd: hypothesis violated (constant branch present); use --method trace\n");
            if (method == "gcd") return kExitHypothesis;
        } else {
            bool shared = resultantGcdCheck(mesh, &rep);
            std::printf("gcd: %s\n", shared ? "flexible" : "rigid");
        }
        printed = true;
    }
    if (method == "scalar" || method == "all") {
        bool isogonalMesh = true;
        for (const QuadCoeffs& q : mesh.quads)
            if (classifyQuad(q).shape != QuadShape::Isogram) isogonalMesh = false;
        if (!isogonalMesh) {
            std::printf("scalar: not applicable (mesh is not four isograms)\n");
        } else {
            ScalarCheckResult sc = scalarCheck(mesh);
            if (sc.scalar)
                std::printf("scalar: flexible (signs=%d%d%d%d, value=%.17g)\n", sc.signs[0],
                            sc.signs[1], sc.signs[2], sc.signs[3], std::real(sc.scalarValue));
            else
                std::printf("scalar: rigid (no sign combination is scalar)\n");
        }
        printed = true;
    }
    if (!printed) throw InvalidParamError("unknown method " + method);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flexible 3x3 quadrilateral mesh workbench"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seedValue = 0;
    double tol = 1e-7;
    int samples = 1000;
    std::string format = "auto";
    app.add_option("--seed", seedValue, "random seed")->capture_default_str();
    app.add_option("--tol", tol, "closure tolerance")->capture_default_str();
    app.add_option("--samples", samples, "trace sample count")->capture_default_str();
    app.add_option("--format", format, "output format: json|obj|jsonl")
        ->check(CLI::IsMember({"auto", "json", "obj", "jsonl"}))
        ->capture_default_str();

    // construct
    auto* cmdConstruct = app.add_subcommand("construct", "construct a flexible mesh");
    std::string cls;
    int optionN = 1, jN = 2;
    std::vector<std::string> paramKVs;
    std::string outFile = "mesh.json";
    cmdConstruct->add_option("--class", cls, "mesh class")->required();
    cmdConstruct->add_option("--option", optionN, "constructor option");
    cmdConstruct->add_option("--j", jN, "frozen-coordinate position (constant class)");
    cmdConstruct->add_option("--param", paramKVs, "pinned parameters name=value");
    cmdConstruct->add_option("-o,--out", outFile, "output file")->required();

    // classify
    auto* cmdClassify = app.add_subcommand("classify", "classify a mesh file");
    std::string classifyFile;
    cmdClassify->add_option("file", classifyFile)->required();

    // verify
    auto* cmdVerify = app.add_subcommand("verify", "run flexibility tests");
    std::string verifyFile, method = "all";
    cmdVerify->add_option("file", verifyFile)->required();
    cmdVerify->add_option("--method", method, "trace|gcd|scalar|all")->capture_default_str();

    // trace
    auto* cmdTrace = app.add_subcommand("trace", "sweep the flexion and write frames");
    std::string traceFile, traceOut = "trace.jsonl";
    int frames = 100;
    cmdTrace->add_option("file", traceFile)->required();
    cmdTrace->add_option("--frames", frames, "frame count")->capture_default_str();
    cmdTrace->add_option("-o,--out", traceOut)->required();

    // embed
    auto* cmdEmbed = app.add_subcommand("embed", "embed frames and write OBJ files");
    std::string embedFile, embedDir = "frames";
    double tau1 = 0.0;
    int embedFrames = 24;
    cmdEmbed->add_option("file", embedFile)->required();
    cmdEmbed->add_option("--tau1", tau1, "free central-face parameter")->capture_default_str();
    cmdEmbed->add_option("--frames", embedFrames)->capture_default_str();
    cmdEmbed->add_option("-o,--out", embedDir)->required();

    // normalize
    auto* cmdNormalize = app.add_subcommand("normalize", "convert anti-quads away");
    std::string normFile, normOut = "normalized.json";
    cmdNormalize->add_option("file", normFile)->required();
    cmdNormalize->add_option("-o,--out", normOut)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto requireFormat = [&](const char* wanted) {
            if (format != "auto" && format != wanted)
                throw InvalidParamError(std::string("this command writes ") + wanted +
                                        ", not " + format);
        };
        if (*cmdConstruct) {
            requireFormat("json");
            Seed seed;
            seed.value = seedValue;
            seed.params = parseParams(paramKVs);
            checkConstructorParams(cls, seed.params);
            if (cmdConstruct->count("--j")) seed.params["j"] = jN;
            if (cmdConstruct->count("--option")) seed.params["option"] = optionN;
            MeshCoeffs mesh = constructByName(cls, seed);
            writeMeshFile(outFile, mesh);
            std::printf("config: seed=%llu tol=%.17g samples=%d format=json out=%s\n",
                        static_cast<unsigned long long>(seedValue), tol, samples, outFile.c_str());
            bool valid = true;
            for (const QuadCoeffs& q : mesh.quads) valid = valid && validate(q).ok;
            if (!valid)
                std::fprintf(stderr,
                             "warning: pinned parameters produce quads outside the validity region\n");
            std::printf("wrote %s (class %s, attempts %d)\n", outFile.c_str(),
                        mesh.classTag.value_or("?").c_str(), mesh.meta ? mesh.meta->attempts : 0);
            return 0;
        }
        if (*cmdClassify) {
            MeshCoeffs mesh = readMeshFile(classifyFile);
            validateMeshOrThrow(mesh);
            std::string label = classifyMesh(mesh);
            std::printf("mesh: %s\n", label.c_str());
            for (int i = 0; i < 4; ++i) {
                QuadClass qc = classifyQuad(mesh.quads[static_cast<std::size_t>(i)]);
                std::printf("quad %d: %s, %s, %s\n", i + 1, shapeName(qc.shape).c_str(),
                            qc.singular ? "singular" : "nonsingular",
                            qc.reducible ? "reducible" : "irreducible");
            }
            return 0;
        }
        if (*cmdVerify) {
            MeshCoeffs mesh = readMeshFile(verifyFile);
            validateMeshOrThrow(mesh);
            return runVerify(mesh, method, samples, tol);
        }
        if (*cmdTrace) {
            requireFormat("jsonl");
            MeshCoeffs mesh = readMeshFile(traceFile);
            validateMeshOrThrow(mesh);
            std::printf("config: frames=%d tol=%.17g format=jsonl out=%s\n", frames, tol,
                        traceOut.c_str());
            std::ofstream out(traceOut);
            if (!out) throw Error("cannot write " + traceOut);
            int written = 0;
            for (int k = 0; k < frames; ++k) {
                double alpha = -3.14159265358979323846 + (k + 0.5) * 2.0 * 3.14159265358979323846 / frames;
                try {
                    LinkageFrame f = realizeBestFrame(mesh, alpha);
                    auto num = [](double v) {
                        char buf[40];
                        std::snprintf(buf, sizeof buf, "%.17g", v);
                        return std::string(buf);
                    };
                    auto arr = [&](const std::array<double, 4>& a) {
                        std::string s = "[";
                        for (int i = 0; i < 4; ++i) s += (i ? "," : "") + num(a[i]);
                        return s + "]";
                    };
                    std::string xs = "[";
                    for (int i = 0; i < 4; ++i) {
                        double a = f.alpha[i];
                        xs += (i ? "," : "");
                        if (std::abs(std::cos(a / 2.0)) < 1e-12) xs += "\"inf\"";
                        else xs += num(std::tan(a / 2.0));
                    }
                    xs += "]";
                    out << "{\"alpha\":" << arr(f.alpha) << ",\"beta\":" << arr(f.beta)
                        << ",\"x\":" << xs << ",\"residual\":" << num(f.residual) << "}\n";
                    ++written;
                } catch (const NoRealConfigurationError&) {
                    continue; // complex-only flexion value
                }
            }
            std::printf("wrote %d/%d frames to %s\n", written, frames, traceOut.c_str());
            return 0;
        }
        if (*cmdEmbed) {
            requireFormat("obj");
            MeshCoeffs mesh = readMeshFile(embedFile);
            validateMeshOrThrow(mesh);
            std::printf("config: frames=%d tau1=%.17g format=obj out=%s\n", embedFrames, tau1,
                        embedDir.c_str());
            std::filesystem::create_directories(embedDir);
            LinkageOptions opts;
            opts.tau1 = tau1;
            int written = 0;
            for (int k = 0; k < embedFrames; ++k) {
                double alpha = -3.14159265358979323846 + (k + 0.5) * 2.0 * 3.14159265358979323846 / embedFrames;
                try {
                    LinkageFrame f = realizeBestFrame(mesh, alpha, opts);
                    if (f.residual > 1e-6) continue; // not a closing flexion value
                    Mesh3D solid = embedMesh(mesh, f, tau1);
                    char name[64];
                    std::snprintf(name, sizeof name, "frame_%04d.obj", k);
                    std::ofstream obj(std::filesystem::path(embedDir) / name);
                    writeObj(obj, solid);
                    ++written;
                } catch (const NoRealConfigurationError&) {
                    continue;
                } catch (const InfeasibleEmbeddingError&) {
                    continue;
                }
            }
            std::printf("wrote %d OBJ frames to %s\n", written, embedDir.c_str());
            return 0;
        }
        if (*cmdNormalize) {
            requireFormat("json");
            MeshCoeffs mesh = readMeshFile(normFile);
            validateMeshOrThrow(mesh);
            auto [normMesh, rec] = normalize(mesh);
            writeMeshFile(normOut, normMesh, &rec);
            std::printf("wrote %s (%s)\n", normOut.c_str(),
                        rec.identity() ? "identity" : "converted");
            return 0;
        }
    } catch (const SearchExhaustedError& e) {
        std::fprintf(stderr, "error: %s (attempts: %d)\n", e.what(), e.attempts);
        return kExitSearch;
    } catch (const InvalidParamError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParams;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const HypothesisViolatedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitHypothesis;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
