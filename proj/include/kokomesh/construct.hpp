#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kokomesh/bricard.hpp"

namespace koko {

// Reproducible constructor input. `params` pins named free parameters;
// `signs` fixes the branch bits in the documented order for the chosen
// constructor. When absent, sign combinations are enumerated
// lexicographically and the first combination that verifies wins.
// Identical seeds reproduce identical meshes bit for bit.
struct Seed {
    std::uint64_t value = 0;
    std::map<std::string, double> params;
    std::optional<std::vector<int>> signs;
    int retryBudget = 10000;
};

// Sign bit order: [k1, k2, k3, tail-branch].
MeshCoeffs constructIsogonal(const Seed& seed);

// j in {2, 3, 4}: position of the frozen flexion coordinate.
// Sign bits: root choice of each intermediate chain value.
MeshCoeffs constructConstant(const Seed& seed, int j);

// system in 1..4 selects the coefficient pattern of the first two quads.
// Sign bits: [factor choice (system 4), k3, tail-branch].
MeshCoeffs constructAdjacentSingular(const Seed& seed, int system);

// Sign bits: [d, D, p-root, q-root].
MeshCoeffs constructOppositeSingular(const Seed& seed);

// option 1 or 2; the underlying two-quad pattern may be pinned with
// --param system=1..4. Sign bits (option 1): [factor choice, tail-branch];
// (option 2): [factor choice, w-root, z-sign].
MeshCoeffs constructDeltoidalReducible(const Seed& seed, int option);

// Sign bit: [a4 sign]. Records which reading of the radicand produced a
// real branch.
MeshCoeffs constructDeltoidalIrreducibleSpecial(const Seed& seed);

// dispatch by class tag used in files and on the command line
MeshCoeffs constructByName(const std::string& className, const Seed& seed);

} // namespace koko
