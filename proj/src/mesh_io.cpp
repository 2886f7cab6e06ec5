#include "kokomesh/mesh_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kokomesh/errors.hpp"

namespace koko {

using nlohmann::json;

namespace {

// all reals carry 17 significant digits
std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string realArray(const std::array<double, 4>& a) {
    std::string out = "[";
    for (int i = 0; i < 4; ++i) out += (i ? ", " : "") + num17(a[static_cast<std::size_t>(i)]);
    return out + "]";
}

} // namespace

std::string meshToJson(const MeshCoeffs& m, const NormalizeRecord* transform) {
    std::string out = "{\n  \"quads\": [\n";
    for (int i = 0; i < 4; ++i) {
        const QuadCoeffs& q = m.quads[static_cast<std::size_t>(i)];
        out += "    {\"a\": " + num17(q.a) + ", \"b\": " + num17(q.b) + ", \"c\": " + num17(q.c) +
               ", \"e\": " + num17(q.e) + "}";
        out += (i < 3) ? ",\n" : "\n";
    }
    out += "  ],\n  \"f\": " + realArray(m.f);
    if (m.classTag) out += ",\n  \"class\": " + json(*m.classTag).dump();
    if (m.meta) {
        out += ",\n  \"meta\": {\"constructor\": " + json(m.meta->constructor).dump() +
               ", \"seed\": " + std::to_string(m.meta->seed) + ", \"signs\": " +
               json(m.meta->signs).dump();
        if (!m.meta->params.empty()) {
            out += ", \"params\": {";
            bool first = true;
            for (const auto& [name, value] : m.meta->params) {
                if (!first) out += ", ";
                first = false;
                out += json(name).dump() + ": " + num17(value);
            }
            out += "}";
        }
        if (!m.meta->note.empty()) out += ", \"note\": " + json(m.meta->note).dump();
        out += ", \"attempts\": " + std::to_string(m.meta->attempts) +
               ", \"tool\": \"kokomesh 0.1.0\"}";
    }
    if (transform && !transform->identity()) {
        out += ",\n  \"transform\": {\"flips\": [";
        for (int i = 0; i < 4; ++i) {
            QuadFlip f = transform->flips[static_cast<std::size_t>(i)];
            out += (i ? ", " : "");
            out += (f == QuadFlip::None ? "\"none\"" : (f == QuadFlip::FlipY ? "\"y\"" : "\"x\""));
        }
        out += "], \"f_before\": " + realArray(transform->fBefore) +
               ", \"f_after\": " + realArray(transform->fAfter) + "}";
    }
    out += "\n}\n";
    return out;
}

MeshCoeffs meshFromJson(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    MeshCoeffs m;
    try {
        if (!j.contains("quads") || !j["quads"].is_array() || j["quads"].size() != 4)
            throw ParseError("mesh file needs exactly four quads");
        for (int i = 0; i < 4; ++i) {
            const json& q = j["quads"][static_cast<std::size_t>(i)];
            m.quads[static_cast<std::size_t>(i)] = {q.at("a").get<double>(), q.at("b").get<double>(),
                                                    q.at("c").get<double>(), q.at("e").get<double>()};
        }
        if (!j.contains("f") || j["f"].size() != 4) throw ParseError("mesh file needs four hinge values");
        for (int i = 0; i < 4; ++i) m.f[static_cast<std::size_t>(i)] = j["f"][static_cast<std::size_t>(i)].get<double>();
        if (j.contains("class")) m.classTag = j["class"].get<std::string>();
        if (j.contains("meta")) {
            MeshMeta meta;
            const json& mm = j["meta"];
            meta.constructor = mm.value("constructor", std::string{});
            meta.seed = mm.value("seed", std::uint64_t{0});
            if (mm.contains("signs")) meta.signs = mm["signs"].get<std::vector<int>>();
            if (mm.contains("params")) meta.params = mm["params"].get<std::map<std::string, double>>();
            meta.note = mm.value("note", std::string{});
            meta.attempts = mm.value("attempts", 0);
            m.meta = meta;
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed mesh file: ") + e.what());
    }
    return m;
}

MeshCoeffs readMeshFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return meshFromJson(ss.str());
}

void writeMeshFile(const std::string& path, const MeshCoeffs& m, const NormalizeRecord* transform) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << meshToJson(m, transform);
}

void validateMeshOrThrow(const MeshCoeffs& m) {
    for (int i = 0; i < 4; ++i) {
        ValidationReport r = validate(m.quads[static_cast<std::size_t>(i)]);
        if (!r.ok)
            throw ParseError("quad " + std::to_string(i + 1) + " violates " + r.violated);
        double f = m.f[static_cast<std::size_t>(i)];
        if (!(f > -1.0 && f <= 1.0))
            throw ParseError("hinge " + std::to_string(i + 1) + " outside (-1, 1]");
    }
}

} // namespace koko
