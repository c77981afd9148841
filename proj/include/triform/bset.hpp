#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "triform/enumerate.hpp"

namespace triform {

/// Greedy construction state: chosen members plus every prime > 3 their
/// witnesses consume. Any two chosen members have disjoint {p, q, r} triples.
struct BState {
    std::vector<AMember> chosen;
    std::unordered_set<uint64_t> consumed;
    uint64_t rejected = 0;
};

/// Greedy scan over members ascending in p: accept when the witness triple is
/// disjoint from everything consumed so far. Throws std::invalid_argument on
/// an out-of-order stream.
BState build_b(std::span<const AMember> members);

/// Independent re-check that the chosen members are pairwise compatible:
/// triples internally distinct, globally disjoint, and consistent with the
/// consumed set.
bool verify_pairwise(const BState& state);

/// True iff every member outside the selection conflicts with a chosen one
/// (so nothing could be added back).
bool verify_maximality(std::span<const AMember> members, const BState& state);

/// Per-member collision flags against strictly larger members, in the fixed
/// case order (r=r', q=r', p=r', r=q', q=q', p=q').
struct CollisionStats {
    std::array<uint64_t, 6> counts{};
};

CollisionStats collision_stats(std::span<const AMember> members);

} // namespace triform
