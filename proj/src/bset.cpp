#include "triform/bset.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace triform {

BState build_b(std::span<const AMember> members) {
    BState state;
    uint64_t prev = 0;
    for (const AMember& m : members) {
        if (m.p <= prev) throw std::invalid_argument("build_b: stream must be ascending in p");
        prev = m.p;
        if (state.consumed.count(m.p) || state.consumed.count(m.q) || state.consumed.count(m.r)) {
            ++state.rejected;
            continue;
        }
        state.chosen.push_back(m);
        state.consumed.insert(m.p);
        state.consumed.insert(m.q);
        state.consumed.insert(m.r);
    }
    return state;
}

bool verify_pairwise(const BState& state) {
    std::unordered_set<uint64_t> seen;
    seen.reserve(3 * state.chosen.size());
    for (const AMember& m : state.chosen) {
        if (m.p == m.q || m.p == m.r || m.q == m.r) return false;
        for (uint64_t v : {m.p, m.q, m.r}) {
            if (!seen.insert(v).second) return false; // prime shared between members
            if (!state.consumed.count(v)) return false;
        }
    }
    return seen.size() == state.consumed.size() &&
           state.consumed.size() == 3 * state.chosen.size();
}

bool verify_maximality(std::span<const AMember> members, const BState& state) {
    std::unordered_set<uint64_t> chosen_p;
    chosen_p.reserve(state.chosen.size());
    for (const AMember& m : state.chosen) chosen_p.insert(m.p);
    uint64_t outside = 0;
    for (const AMember& m : members) {
        if (chosen_p.count(m.p)) continue;
        ++outside;
        const bool conflicts = state.consumed.count(m.p) || state.consumed.count(m.q) ||
                               state.consumed.count(m.r);
        if (!conflicts) return false;
    }
    return outside == state.rejected;
}

CollisionStats collision_stats(std::span<const AMember> members) {
    uint64_t prev = 0;
    std::unordered_map<uint64_t, uint64_t> max_p_as_q; // value -> largest p with q = value
    std::unordered_map<uint64_t, uint64_t> max_p_as_r;
    max_p_as_q.reserve(members.size());
    max_p_as_r.reserve(members.size());
    for (const AMember& m : members) {
        if (m.p <= prev)
            throw std::invalid_argument("collision_stats: members must be ascending in p");
        prev = m.p;
        auto& mq = max_p_as_q[m.q];
        mq = std::max(mq, m.p);
        auto& mr = max_p_as_r[m.r];
        mr = std::max(mr, m.p);
    }
    auto larger_as_q = [&](uint64_t v, uint64_t p) {
        auto it = max_p_as_q.find(v);
        return it != max_p_as_q.end() && it->second > p;
    };
    auto larger_as_r = [&](uint64_t v, uint64_t p) {
        auto it = max_p_as_r.find(v);
        return it != max_p_as_r.end() && it->second > p;
    };

    CollisionStats stats;
    for (const AMember& m : members) {
        if (larger_as_r(m.r, m.p)) ++stats.counts[0]; // r = r'
        if (larger_as_r(m.q, m.p)) ++stats.counts[1]; // q = r'
        if (larger_as_r(m.p, m.p)) ++stats.counts[2]; // p = r'
        if (larger_as_q(m.r, m.p)) ++stats.counts[3]; // r = q'
        if (larger_as_q(m.q, m.p)) ++stats.counts[4]; // q = q'
        if (larger_as_q(m.p, m.p)) ++stats.counts[5]; // p = q'
    }
    return stats;
}

} // namespace triform
