#include "triform/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "triform/arith.hpp"
#include "triform/errors.hpp"
#include "triform/sieve.hpp"

namespace triform {

namespace {

constexpr uint64_t kMaxCountLimit = 100'000'000'000'000ull; // 1e14

bool coprime6_prime(uint64_t v) { return v >= 5 && is_prime(v); }

} // namespace

uint64_t member_digest_mix(uint64_t p) {
    // splitmix64 finalizer
    uint64_t z = p + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::optional<AMember> member_a(uint64_t p) {
    if (p < 5 || p % 3 != 2) return std::nullopt;

    const auto s2 = strip_factor(p + 1, 2);
    const auto s3 = strip_factor(s2.cofactor, 3);
    const uint64_t q = s3.cofactor;
    if (s2.exponent < 1 || s3.exponent < 1 || q == 1 || !is_prime(q)) return std::nullopt;

    const auto t2 = strip_factor(p - 1, 2);
    const uint64_t r = t2.cofactor;
    if (r == 1 || !is_prime(r)) return std::nullopt;

    return AMember{p, s2.exponent, s3.exponent, t2.exponent, q, r};
}

std::optional<AbarMember> member_abar(uint64_t p) {
    if (p < 5 || p % 3 != 2) return std::nullopt;

    const auto s2 = strip_factor(p + 1, 2);
    const auto s3 = strip_factor(s2.cofactor, 3);
    if (s2.exponent < 1 || s3.exponent < 1 || s3.cofactor == 1) return std::nullopt;
    const auto qp = is_prime_power(s3.cofactor);
    if (!qp) return std::nullopt;

    const auto t2 = strip_factor(p - 1, 2);
    if (t2.cofactor == 1) return std::nullopt;
    const auto rp = is_prime_power(t2.cofactor);
    if (!rp) return std::nullopt;

    return AbarMember{p,       s2.exponent,  s3.exponent, t2.exponent,
                      qp->exponent, rp->exponent, qp->base,    rp->base};
}

bool AMember::validate() const {
    if (!is_prime(p) || p % 3 != 2) return false;
    if (alpha < 1 || beta < 1 || gamma < 1) return false;
    if (q < 5 || r < 5 || q % 2 == 0 || q % 3 == 0 || r % 2 == 0 || r % 3 == 0) return false;
    if (!is_prime(q) || !is_prime(r)) return false;
    const auto p2 = checked_pow(2, alpha);
    const auto p3 = checked_pow(3, beta);
    const auto pg = checked_pow(2, gamma);
    if (!p2 || !p3 || !pg) return false;
    if (u128(*p2) * *p3 * q != u128(p) + 1) return false;
    if (u128(*pg) * r != u128(p) - 1) return false;
    return validate_key(alpha, beta, gamma);
}

bool AbarMember::validate() const {
    if (!is_prime(p) || p % 3 != 2) return false;
    if (alpha < 1 || beta < 1 || gamma < 1 || mu < 1 || nu < 1) return false;
    if (q < 5 || r < 5 || !is_prime(q) || !is_prime(r)) return false;
    const auto p2 = checked_pow(2, alpha);
    const auto p3 = checked_pow(3, beta);
    const auto pg = checked_pow(2, gamma);
    const auto qm = checked_pow(q, mu);
    const auto rn = checked_pow(r, nu);
    if (!p2 || !p3 || !pg || !qm || !rn) return false;
    if (u128(*p2) * *p3 * *qm != u128(p) + 1) return false;
    if (u128(*pg) * *rn != u128(p) - 1) return false;
    return true;
}

namespace {

struct SegmentOutcome {
    uint64_t count = 0;
    uint64_t digest = 0;
    std::vector<AMember> members;
};

SegmentOutcome scan_segment(uint64_t lo, uint64_t hi, std::span<const uint32_t> base,
                            bool collect, bool verify) {
    SegmentOutcome out;
    for_primes_in(lo, hi, base, [&](uint64_t p) {
        auto m = member_a(p);
        if (!m) return;
        if (verify && !m->validate())
            throw std::logic_error("member witness failed re-validation at p=" + std::to_string(p));
        ++out.count;
        out.digest += member_digest_mix(p);
        if (collect) out.members.push_back(*m);
    });
    return out;
}

} // namespace

CountResult count_a_sieve(uint64_t limit, const CountOptions& options) {
    if (limit < 2) throw std::domain_error("count: limit must be >= 2");
    if (limit > kMaxCountLimit)
        throw std::out_of_range("count: limit exceeds supported range (1e14)");
    const uint64_t seg = options.segment_size < 1024 ? 1024 : options.segment_size;
    const uint64_t nseg = limit / seg + 1; // segment s covers [s*seg, (s+1)*seg) intersect [2, limit]

    std::vector<uint8_t> done(nseg, 0);
    uint64_t base_count = 0;
    uint64_t base_digest = 0;
    if (options.resume) {
        const Checkpoint& ck = *options.resume;
        if (ck.limit != limit || ck.segment_size != seg)
            throw CheckpointError("checkpoint does not match requested limit/segment size");
        for (uint64_t s : ck.completed_segments) {
            if (s >= nseg) throw CheckpointError("checkpoint segment index out of range");
            done[s] = 1;
        }
        base_count = ck.partial_count;
        base_digest = ck.digest;
        if (options.collect_members)
            throw CheckpointError("member collection cannot resume from a checkpoint");
    }

    const auto root = uint32_t(std::sqrt((double)limit)) + 2;
    const std::vector<uint32_t> base = small_primes(root);

    std::vector<SegmentOutcome> results(nseg);
    std::vector<uint8_t> fresh(nseg, 0);

    std::atomic<uint64_t> next{0};
    std::atomic<uint64_t> budget{options.stop_after_segments == 0
                                     ? ~uint64_t(0)
                                     : options.stop_after_segments};
    std::mutex ck_mutex;
    Checkpoint live;
    live.limit = limit;
    live.segment_size = seg;
    live.partial_count = base_count;
    live.digest = base_digest;
    for (uint64_t s = 0; s < nseg; ++s)
        if (done[s]) live.completed_segments.push_back(s);

    std::exception_ptr worker_error;

    auto worker = [&]() {
        try {
            for (;;) {
                const uint64_t s = next.fetch_add(1);
                if (s >= nseg) return;
                if (done[s]) continue;
                // claim against the stop budget
                uint64_t b = budget.load();
                do {
                    if (b == 0) return;
                } while (!budget.compare_exchange_weak(b, b - 1));

                const uint64_t lo = std::max<uint64_t>(2, s * seg);
                const uint64_t hi = std::min(limit, (s + 1) * seg - 1);
                SegmentOutcome out;
                if (lo <= hi)
                    out = scan_segment(lo, hi, base, options.collect_members,
                                       options.verify_members);
                {
                    std::lock_guard<std::mutex> lock(ck_mutex);
                    live.partial_count += out.count;
                    live.digest += out.digest;
                    live.completed_segments.push_back(s);
                    if (!options.checkpoint_path.empty()) {
                        auto sorted = live;
                        std::sort(sorted.completed_segments.begin(),
                                  sorted.completed_segments.end());
                        sorted.save(options.checkpoint_path);
                    }
                }
                results[s] = std::move(out);
                fresh[s] = 1;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(ck_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    const unsigned nthreads = std::max(1u, options.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    // reduce in segment-index order
    CountResult result;
    result.count = base_count;
    result.digest = base_digest;
    for (uint64_t s = 0; s < nseg; ++s) {
        if (!fresh[s]) continue;
        result.count += results[s].count;
        result.digest += results[s].digest;
        if (options.collect_members)
            result.members.insert(result.members.end(), results[s].members.begin(),
                                  results[s].members.end());
    }

    result.checkpoint.limit = limit;
    result.checkpoint.segment_size = seg;
    result.checkpoint.partial_count = result.count;
    result.checkpoint.digest = result.digest;
    for (uint64_t s = 0; s < nseg; ++s)
        if (done[s] || fresh[s]) result.checkpoint.completed_segments.push_back(s);
    result.complete = result.checkpoint.completed_segments.size() == nseg;
    if (!result.complete && !options.checkpoint_path.empty())
        result.checkpoint.save(options.checkpoint_path);
    return result;
}

namespace {

// Shared filter for family candidates: all three values prime, q and r
// coprime to 6 (q, r >= 5 suffices for primes).
bool family_member_ok(uint64_t p, uint64_t q, uint64_t r, uint64_t limit) {
    if (p > limit) return false;
    return coprime6_prime(q) && is_prime(p) && coprime6_prime(r);
}

} // namespace

std::vector<AMember> enumerate_family(const FamilyKey& key, uint64_t limit) {
    std::vector<AMember> out;
    if (limit > kMaxCountLimit)
        throw std::out_of_range("count: limit exceeds supported range (1e14)");
    if (!validate_key(key.alpha, key.beta, key.gamma)) return out;
    // 2^48 and 3^31 both exceed the supported limit, so such families are empty
    if (key.alpha >= 48 || key.gamma >= 48 || key.beta >= 31) return out;

    uint64_t pow3 = 1;
    for (uint32_t i = 0; i < key.beta; ++i) pow3 *= 3;

    if (key.gamma == 1) {
        const u128 lead = (u128(1) << key.alpha) * pow3;
        if (lead > u128(limit) + 1) return out;
        const uint64_t a = uint64_t(lead);
        // p = a*n - 1, q = n, r = (a/2)*n - 1; n runs over primes >= 5
        for (uint64_t n = 5; u128(a) * n - 1 <= limit; ++n) {
            const uint64_t p = a * n - 1;
            const uint64_t r = (a >> 1) * n - 1;
            if (family_member_ok(p, n, r, limit))
                out.push_back({p, key.alpha, key.beta, key.gamma, n, r});
        }
    } else {
        const u128 lead = u128(pow3) << key.gamma;
        const u128 k = crt_k(key.beta, key.gamma);
        if (k > limit) return out;
        const uint64_t qc = uint64_t((k + 1) / (2 * u128(pow3)));
        const uint64_t rc = uint64_t((k - 1) >> key.gamma);
        for (uint64_t n = 0; lead * n + k <= limit; ++n) {
            const uint64_t p = uint64_t(lead * n + k);
            const uint64_t q = (uint64_t(1) << (key.gamma - 1)) * n + qc;
            const uint64_t r = pow3 * n + rc;
            if (family_member_ok(p, q, r, limit))
                out.push_back({p, key.alpha, key.beta, key.gamma, q, r});
        }
    }
    return out;
}

std::vector<AMember> enumerate_a_families(uint64_t limit) {
    if (limit < 2) throw std::domain_error("count: limit must be >= 2");
    if (limit > kMaxCountLimit)
        throw std::out_of_range("count: limit exceeds supported range (1e14)");
    std::vector<AMember> all;

    // gamma = 1, alpha >= 2: leading coefficient 2^alpha 3^beta divides p + 1.
    for (uint32_t alpha = 2; (u128(1) << alpha) * 3 <= u128(limit) + 1; ++alpha) {
        u128 lead = (u128(1) << alpha) * 3;
        for (uint32_t beta = 1; lead <= u128(limit) + 1; ++beta, lead *= 3) {
            auto fam = enumerate_family({alpha, beta, 1}, limit);
            all.insert(all.end(), fam.begin(), fam.end());
        }
    }
    // alpha = 1, gamma >= 2: members with p < 3^beta 2^gamma occur at n = 0,
    // so the exponent ranges are bounded by the factor sizes, not the product.
    u128 pow3 = 3;
    for (uint32_t beta = 1; 2 * pow3 <= u128(limit) + 1; ++beta, pow3 *= 3) {
        for (uint32_t gamma = 2; (u128(1) << gamma) <= u128(limit); ++gamma) {
            auto fam = enumerate_family({1, beta, gamma}, limit);
            all.insert(all.end(), fam.begin(), fam.end());
        }
    }

    std::sort(all.begin(), all.end(), [](const AMember& x, const AMember& y) { return x.p < y.p; });
    return all;
}

uint64_t count_a_families(uint64_t limit) {
    return enumerate_a_families(limit).size();
}

AbarDiffResult count_abar_minus_a(uint64_t limit) {
    if (limit < 2) throw std::domain_error("count: limit must be >= 2");
    if (limit > kMaxCountLimit)
        throw std::out_of_range("count: limit exceeds supported range (1e14)");
    AbarDiffResult result;
    const auto root = uint32_t(std::sqrt((double)limit)) + 2;
    const std::vector<uint32_t> base = small_primes(root);
    for_primes_in(2, limit, base, [&](uint64_t p) {
        auto m = member_abar(p);
        if (m && (m->mu > 1 || m->nu > 1)) result.members.push_back(*m);
    });
    result.count = result.members.size();
    return result;
}

} // namespace triform
