#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "triform/checkpoint.hpp"
#include "triform/family.hpp"

namespace triform {

/// A certified member: p prime, p = 2 (mod 3), p + 1 = 2^alpha 3^beta q,
/// p - 1 = 2^gamma r, with q, r primes coprime to 6.
struct AMember {
    uint64_t p;
    uint32_t alpha, beta, gamma;
    uint64_t q, r;

    FamilyKey key() const { return {alpha, beta, gamma}; }
    bool operator==(const AMember&) const = default;

    /// Recomputes p +- 1 from the witness and re-tests every invariant.
    bool validate() const;
};

/// Relaxed member: prime-power cofactors q^mu, r^nu are allowed.
struct AbarMember {
    uint64_t p;
    uint32_t alpha, beta, gamma, mu, nu;
    uint64_t q, r;

    bool operator==(const AbarMember&) const = default;
    bool validate() const;
};

/// Witness for p if p belongs to the strict set; empty otherwise.
/// Assumes p prime.
std::optional<AMember> member_a(uint64_t p);

/// Witness for p in the relaxed set; empty otherwise. Assumes p prime.
std::optional<AbarMember> member_abar(uint64_t p);

struct CountOptions {
    uint64_t segment_size = uint64_t(1) << 26;
    unsigned threads = 1;
    bool collect_members = false;
    bool verify_members = false;
    /// Stop after this many newly processed segments (0 = run to completion).
    uint64_t stop_after_segments = 0;
    /// Resume state; must match limit and segment_size.
    const Checkpoint* resume = nullptr;
    /// If nonempty, a checkpoint is written here after each completed segment.
    std::string checkpoint_path;
};

struct CountResult {
    uint64_t count = 0;
    uint64_t digest = 0;
    bool complete = true;
    Checkpoint checkpoint;
    std::vector<AMember> members; // ascending p, only when collected
};

/// Exact member count up to `limit` by a segmented prime scan.
/// Deterministic for any thread count and segmentation.
CountResult count_a_sieve(uint64_t limit, const CountOptions& options = {});

/// Same count by iterating residue families and their linear forms.
uint64_t count_a_families(uint64_t limit);

/// All members up to `limit` via the family strategy, ascending in p.
std::vector<AMember> enumerate_a_families(uint64_t limit);

/// Members of a single family up to `limit`, ascending.
std::vector<AMember> enumerate_family(const FamilyKey& key, uint64_t limit);

struct AbarDiffResult {
    uint64_t count = 0;
    std::vector<AbarMember> members; // ascending
};

/// Members of the relaxed set that are not strict members (mu or nu >= 2).
AbarDiffResult count_abar_minus_a(uint64_t limit);

/// Order-invariant member digest: sum of mixed p values.
uint64_t member_digest_mix(uint64_t p);

} // namespace triform
