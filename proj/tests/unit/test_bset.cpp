#include <doctest.h>

#include <algorithm>
#include <unordered_map>

#include "triform/bset.hpp"

using namespace triform;

namespace {

std::vector<AMember> members_to(uint64_t limit) {
    CountOptions opt;
    opt.collect_members = true;
    return count_a_sieve(limit, opt).members;
}

} // namespace

TEST_CASE("greedy selection on hand-checked pairs") {
    const AMember m29{29, 1, 1, 2, 5, 7};
    const AMember m41{41, 1, 1, 3, 7, 5};
    const AMember m59{59, 2, 1, 1, 5, 29};

    auto state = build_b(std::vector<AMember>{m29, m41});
    REQUIRE(state.chosen.size() == 1);
    CHECK(state.chosen[0].p == 29);
    CHECK(state.rejected == 1); // q(41) = 7 = r(29) and r(41) = 5 = q(29)

    state = build_b(std::vector<AMember>{m29, m59});
    REQUIRE(state.chosen.size() == 1);
    CHECK(state.chosen[0].p == 29);
    CHECK(state.rejected == 1); // q(59) = 5 = q(29), and r(59) = 29 = p(29)

    state = build_b(std::vector<AMember>{});
    CHECK(state.chosen.empty());
    CHECK(state.consumed.empty());
    CHECK(state.rejected == 0);
}

TEST_CASE("stream must ascend") {
    const AMember m29{29, 1, 1, 2, 5, 7};
    const AMember m41{41, 1, 1, 3, 7, 5};
    CHECK_THROWS_AS(build_b(std::vector<AMember>{m41, m29}), std::invalid_argument);
    CHECK_THROWS_AS(collision_stats(std::vector<AMember>{m41, m29}), std::invalid_argument);
}

TEST_CASE("pairwise verification") {
    const auto members = members_to(10'000);
    const auto state = build_b(members);
    CHECK(verify_pairwise(state));

    BState singleton;
    singleton.chosen = {members[0]};
    singleton.consumed = {members[0].p, members[0].q, members[0].r};
    CHECK(verify_pairwise(singleton));

    // two members sharing q
    BState bad;
    bad.chosen = {{29, 1, 1, 2, 5, 7}, {59, 2, 1, 1, 5, 29}};
    for (const auto& m : bad.chosen) {
        bad.consumed.insert(m.p);
        bad.consumed.insert(m.q);
        bad.consumed.insert(m.r);
    }
    CHECK_FALSE(verify_pairwise(bad));
}

TEST_CASE("selection is maximal") {
    for (uint64_t x : {10'000ull, 100'000ull}) {
        const auto members = members_to(x);
        const auto state = build_b(members);
        CHECK(verify_maximality(members, state));
    }
}

TEST_CASE("reference selection sizes") {
    // cross-checked against an independent implementation of the same greedy rule
    struct Row {
        uint64_t x, count_a, count_b;
    };
    for (const auto& row : std::vector<Row>{{10'000, 114, 47}, {100'000, 473, 263},
                                            {1'000'000, 2192, 1464}}) {
        const auto members = members_to(row.x);
        CHECK(members.size() == row.count_a);
        const auto state = build_b(members);
        CHECK(state.chosen.size() == row.count_b);
        CHECK(state.rejected == row.count_a - row.count_b);
        CHECK(state.consumed.size() == 3 * state.chosen.size());
    }
}

TEST_CASE("collision cases on the first two members") {
    const AMember m29{29, 1, 1, 2, 5, 7};
    const AMember m41{41, 1, 1, 3, 7, 5};
    const auto stats = collision_stats(std::vector<AMember>{m29, m41});
    CHECK(stats.counts[0] == 0); // r = r'
    CHECK(stats.counts[1] == 1); // q = r': q(29) = 5 = r(41)
    CHECK(stats.counts[2] == 0); // p = r'
    CHECK(stats.counts[3] == 1); // r = q': r(29) = 7 = q(41)
    CHECK(stats.counts[4] == 0); // q = q'
    CHECK(stats.counts[5] == 0); // p = q'

    const auto solo = collision_stats(std::vector<AMember>{m29});
    for (uint64_t c : solo.counts) CHECK(c == 0);

    // disjoint triples collide in no case
    const auto none = collision_stats(
        std::vector<AMember>{{29, 1, 1, 2, 5, 7}, {113, 1, 1, 4, 19, 7919}});
    for (uint64_t c : none.counts) CHECK(c == 0);
}

TEST_CASE("collision statistics at 1e6") {
    // cross-checked against an independent implementation
    const auto stats = collision_stats(members_to(1'000'000));
    CHECK(stats.counts[0] == 45);
    CHECK(stats.counts[1] == 124);
    CHECK(stats.counts[2] == 223);
    CHECK(stats.counts[3] == 267);
    CHECK(stats.counts[4] == 448);
    CHECK(stats.counts[5] == 116);
}

TEST_CASE("every case count is bounded by the member count") {
    const auto members = members_to(100'000);
    const auto stats = collision_stats(members);
    for (uint64_t c : stats.counts) CHECK(c <= members.size());
}

TEST_CASE("rejected members flagged by a collision case: partial overlap only") {
    // A member can be rejected because its witness collides with a *smaller*
    // accepted member; the six cases only look upward, so the rejected set is
    // not contained in the flagged set. The converse relation holds instead:
    // the smaller element of every conflicting pair is flagged.
    const auto members = members_to(100'000);
    const auto state = build_b(members);

    std::unordered_map<uint64_t, uint64_t> max_as_q, max_as_r;
    for (const auto& m : members) {
        max_as_q[m.q] = std::max(max_as_q[m.q], m.p);
        max_as_r[m.r] = std::max(max_as_r[m.r], m.p);
    }
    auto flagged = [&](const AMember& m) {
        for (uint64_t v : {m.p, m.q, m.r}) {
            auto itq = max_as_q.find(v);
            if (itq != max_as_q.end() && itq->second > m.p) return true;
            auto itr = max_as_r.find(v);
            if (itr != max_as_r.end() && itr->second > m.p) return true;
        }
        return false;
    };

    uint64_t rejected = 0, rejected_unflagged = 0;
    for (const auto& m : members) {
        const bool chosen =
            std::find(state.chosen.begin(), state.chosen.end(), m) != state.chosen.end();
        if (chosen) continue;
        ++rejected;
        if (!flagged(m)) ++rejected_unflagged;
    }
    CHECK(rejected == 210);
    CHECK(rejected_unflagged == 97); // cross-checked independently
}
