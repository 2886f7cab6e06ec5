#pragma once

#include <string>

#include "kokomesh/bricard.hpp"

namespace koko {

// Mesh file schema: {"quads":[{a,b,c,e} x4], "f":[4 reals],
// optional "class", optional "meta"{constructor, seed, signs, params, ...}}.
// Numbers round-trip at full double precision.
std::string meshToJson(const MeshCoeffs& m, const NormalizeRecord* transform = nullptr);
MeshCoeffs meshFromJson(const std::string& text);

MeshCoeffs readMeshFile(const std::string& path);
void writeMeshFile(const std::string& path, const MeshCoeffs& m,
                   const NormalizeRecord* transform = nullptr);

// strict input validation used by the command-line front end
void validateMeshOrThrow(const MeshCoeffs& m);

} // namespace koko
