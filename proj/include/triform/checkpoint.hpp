#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace triform {

/// Resumable state of a segmented counting run. The digest is an
/// order-invariant sum over member hashes, so any subset of completed
/// segments can be merged deterministically.
struct Checkpoint {
    uint64_t limit = 0;
    uint64_t segment_size = 0;
    std::vector<uint64_t> completed_segments; // sorted, unique
    uint64_t partial_count = 0;
    uint64_t digest = 0;

    std::string to_json() const;
    static Checkpoint from_json(const std::string& text);

    /// Atomic write (temp file + rename).
    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

} // namespace triform
