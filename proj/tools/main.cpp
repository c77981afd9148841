#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triform/arith.hpp"
#include "triform/bset.hpp"
#include "triform/checkpoint.hpp"
#include "triform/density.hpp"
#include "triform/enumerate.hpp"
#include "triform/errors.hpp"
#include "triform/family.hpp"
#include "triform/singular.hpp"

using nlohmann::json;

namespace {

// exit codes, also listed in the README
constexpr int kExitUsage = 2;
constexpr int kExitRange = 3;
constexpr int kExitPrecision = 4;
constexpr int kExitCheckpoint = 5;

// Exact integer parse of "114", "1e10", "2.5e13". No floating-point rounding.
uint64_t parse_limit(const std::string& text) {
    triform::u128 mantissa = 0;
    int frac_digits = 0;
    bool in_frac = false, any_digit = false;
    size_t i = 0;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + triform::u128(c - '0');
            if (mantissa > (triform::u128(1) << 100))
                throw std::invalid_argument("limit out of range: " + text);
            if (in_frac) ++frac_digits;
            any_digit = true;
        } else if (c == '.' && !in_frac) {
            in_frac = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw std::invalid_argument("malformed limit: " + text);
        }
    }
    int exponent = 0;
    if (i < text.size()) { // exponent part
        ++i;
        if (i < text.size() && text[i] == '+') ++i;
        if (i >= text.size()) throw std::invalid_argument("malformed limit: " + text);
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') throw std::invalid_argument("malformed limit: " + text);
            exponent = exponent * 10 + (c - '0');
            if (exponent > 40) throw std::invalid_argument("limit out of range: " + text);
        }
    }
    if (!any_digit) throw std::invalid_argument("malformed limit: " + text);
    exponent -= frac_digits;
    if (exponent < 0) throw std::invalid_argument("limit is not an integer: " + text);
    for (int k = 0; k < exponent; ++k) {
        mantissa *= 10;
        if (mantissa > ~uint64_t(0)) throw std::out_of_range("limit exceeds 64 bits: " + text);
    }
    if (mantissa > ~uint64_t(0)) throw std::out_of_range("limit exceeds 64 bits: " + text);
    return uint64_t(mantissa);
}

std::vector<uint64_t> parse_limit_list(const std::string& text) {
    std::vector<uint64_t> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) out.push_back(parse_limit(item));
    if (out.empty()) throw std::invalid_argument("empty list: " + text);
    return out;
}

triform::FamilyKey parse_family(const std::string& text) {
    const auto parts = parse_limit_list(text);
    if (parts.size() != 3) throw std::invalid_argument("family key needs three exponents");
    for (uint64_t part : parts)
        if (part < 1 || part > 1000)
            throw std::invalid_argument("family exponent out of range: " + text);
    return {uint32_t(parts[0]), uint32_t(parts[1]), uint32_t(parts[2])};
}

long long parse_integer(const std::string& text) {
    size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("malformed integer: " + text);
    return v;
}

// "12,5;2,1;3,1" -> forms 12n+5, 2n+1, 3n+1 (b may be negative)
triform::LinearSystem parse_forms(const std::string& text) {
    triform::LinearSystem sys;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("form must be 'a,b': " + item);
        const long long a = parse_integer(item.substr(0, comma));
        const long long b = parse_integer(item.substr(comma + 1));
        sys.forms.push_back({triform::i128(a), triform::i128(b)});
        triform::require_primitive(sys.forms.back());
    }
    if (sys.forms.empty()) throw std::invalid_argument("empty form list");
    return sys;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + path);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void emit(const std::string& output_path, const std::string& content) {
    if (output_path.empty())
        std::cout << content;
    else
        write_atomic(output_path, content);
}

std::string members_csv(std::span<const triform::AMember> members) {
    std::string out = "p,alpha,beta,gamma,q,r\n";
    char line[160];
    for (const auto& m : members) {
        std::snprintf(line, sizeof(line), "%" PRIu64 ",%u,%u,%u,%" PRIu64 ",%" PRIu64 "\n", m.p,
                      m.alpha, m.beta, m.gamma, m.q, m.r);
        out += line;
    }
    return out;
}

std::string abar_members_csv(std::span<const triform::AbarMember> members) {
    std::string out = "p,alpha,beta,gamma,mu,nu,q,r\n";
    char line[192];
    for (const auto& m : members) {
        std::snprintf(line, sizeof(line), "%" PRIu64 ",%u,%u,%u,%u,%u,%" PRIu64 ",%" PRIu64 "\n",
                      m.p, m.alpha, m.beta, m.gamma, m.mu, m.nu, m.q, m.r);
        out += line;
    }
    return out;
}

std::string hex_digest(uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, digest);
    return buf;
}

std::string format_ld(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12Lg", v);
    return buf;
}

json series_json(const triform::SingularSeriesResult& r) {
    return json{{"value", (double)r.value},
                {"prime_limit", r.prime_limit},
                {"tail_bound", (double)r.tail_bound}};
}

unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct CommonOpts {
    std::string limit_text;
    unsigned threads = default_threads();
    std::string output;
    std::string format = "text";
};

int run(int argc, char** argv) {
    CLI::App app{"counting engine for primes whose neighbors are {2,3}-smooth"
                 " times one prime"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from a config file (flags win)");

    // count
    auto* count_cmd = app.add_subcommand("count", "count members up to a limit");
    CommonOpts count_opts;
    std::string seg_text = "67108864";
    std::string ck_path;
    uint64_t stop_after = 0;
    bool verify = false;
    std::string strategy = "sieve";
    count_cmd->add_option("--limit", count_opts.limit_text, "upper bound (inclusive)")
        ->required();
    count_cmd->add_option("--threads", count_opts.threads, "worker threads")
        ->envname("TRIFORM_THREADS");
    count_cmd->add_option("--segment-size", seg_text, "candidates per segment");
    count_cmd->add_option("--checkpoint", ck_path, "checkpoint file (resume if present)");
    count_cmd->add_option("--stop-after", stop_after,
                          "process this many segments, checkpoint and exit");
    count_cmd->add_option("--output", count_opts.output, "write the count record as JSON");
    count_cmd->add_option("--strategy", strategy, "sieve | families")
        ->check(CLI::IsMember({"sieve", "families"}));
    count_cmd->add_flag("--verify", verify, "re-validate every member witness");

    // members
    auto* members_cmd = app.add_subcommand("members", "emit the member stream as CSV");
    CommonOpts members_opts;
    std::string family_text;
    bool members_verify = false;
    std::string members_strategy = "sieve";
    members_cmd->add_option("--limit", members_opts.limit_text)->required();
    members_cmd->add_option("--threads", members_opts.threads)->envname("TRIFORM_THREADS");
    members_cmd->add_option("--output", members_opts.output, "CSV path (default stdout)");
    members_cmd->add_option("--family", family_text, "only one family, e.g. 1,1,2");
    members_cmd->add_option("--strategy", members_strategy, "sieve | families")
        ->check(CLI::IsMember({"sieve", "families"}));
    members_cmd->add_flag("--verify", members_verify);

    // abar-diff
    auto* abar_cmd = app.add_subcommand("abar-diff",
                                        "relaxed members that are not strict members");
    CommonOpts abar_opts;
    abar_cmd->add_option("--limit", abar_opts.limit_text)->required();
    abar_cmd->add_option("--output", abar_opts.output, "CSV path");

    // sseries
    auto* ss_cmd = app.add_subcommand("sseries", "singular series of a linear system");
    std::string ss_family, ss_forms, ss_plimit = "100000000", ss_output;
    unsigned ss_threads = default_threads();
    ss_cmd->add_option("--family", ss_family, "family key, e.g. 1,1,2");
    ss_cmd->add_option("--forms", ss_forms, "explicit forms 'a,b;a,b;...'");
    ss_cmd->add_option("--prime-limit", ss_plimit, "Euler product truncation");
    ss_cmd->add_option("--threads", ss_threads)->envname("TRIFORM_THREADS");
    ss_cmd->add_option("--output", ss_output, "write result JSON");

    // sa
    auto* sa_cmd = app.add_subcommand("sa", "three-form family constant");
    std::string sa_plimit = "100000000", sa_output;
    unsigned sa_threads = default_threads();
    sa_cmd->add_option("--prime-limit", sa_plimit);
    sa_cmd->add_option("--threads", sa_threads)->envname("TRIFORM_THREADS");
    sa_cmd->add_option("--output", sa_output);

    // li3
    auto* li3_cmd = app.add_subcommand("li3", "integral of dt/(log t)^3 from 2");
    std::string li3_x;
    li3_cmd->add_option("--x", li3_x)->required();

    // table
    auto* table_cmd = app.add_subcommand("table", "density comparison table");
    std::string table_limits, table_counts, table_output, table_format = "csv";
    unsigned table_threads = default_threads();
    table_cmd->add_option("--limits", table_limits, "comma-separated limits")->required();
    table_cmd->add_option("--counts", table_counts,
                          "precomputed counts (otherwise counted now)");
    table_cmd->add_option("--threads", table_threads)->envname("TRIFORM_THREADS");
    table_cmd->add_option("--output", table_output);
    table_cmd->add_option("--format", table_format)
        ->check(CLI::IsMember({"csv", "text", "json"}));

    // bset
    auto* bset_cmd = app.add_subcommand("bset", "greedy pairwise-coprime subset");
    CommonOpts bset_opts;
    bool bset_verify = false;
    bset_cmd->add_option("--limit", bset_opts.limit_text)->required();
    bset_cmd->add_option("--threads", bset_opts.threads)->envname("TRIFORM_THREADS");
    bset_cmd->add_option("--output", bset_opts.output, "chosen members CSV");
    bset_cmd->add_option("--format", bset_opts.format)->check(CLI::IsMember({"text", "json"}));
    bset_cmd->add_flag("--verify", bset_verify, "re-check pairwise disjointness");

    // collisions
    auto* coll_cmd = app.add_subcommand("collisions", "six-case collision statistics");
    CommonOpts coll_opts;
    coll_cmd->add_option("--limit", coll_opts.limit_text)->required();
    coll_cmd->add_option("--threads", coll_opts.threads)->envname("TRIFORM_THREADS");
    coll_cmd->add_option("--output", coll_opts.output, "stats JSON path");

    // hr-bound
    auto* hr_cmd = app.add_subcommand("hr-bound", "sieve upper-bound main term");
    std::string hr_family, hr_forms, hr_x, hr_plimit = "100000";
    unsigned hr_threads = default_threads();
    hr_cmd->add_option("--family", hr_family);
    hr_cmd->add_option("--forms", hr_forms);
    hr_cmd->add_option("--x", hr_x)->required();
    hr_cmd->add_option("--prime-limit", hr_plimit);
    hr_cmd->add_option("--threads", hr_threads)->envname("TRIFORM_THREADS");

    app.parse(argc, argv);

    auto collect_members = [](uint64_t limit, unsigned threads, bool verify_members) {
        triform::CountOptions opt;
        opt.threads = threads;
        opt.collect_members = true;
        opt.verify_members = verify_members;
        return triform::count_a_sieve(limit, opt).members;
    };

    auto count_record_json = [](uint64_t limit, uint64_t count, uint64_t digest) {
        const long double x = (long double)limit;
        const long double lg = std::log(x);
        json j;
        j["x"] = limit;
        j["count_a"] = count;
        // both predictors are positive only from x = 3 on
        j["ratio_log3"] = limit >= 3 ? (double)((long double)count * lg * lg * lg / x) : 0.0;
        j["ratio_li3"] = limit >= 3 ? (double)((long double)count / triform::li3(x)) : 0.0;
        j["digest"] = hex_digest(digest);
        return j;
    };

    if (*count_cmd) {
        const uint64_t limit = parse_limit(count_opts.limit_text);
        if (strategy == "families") {
            const uint64_t count = triform::count_a_families(limit);
            std::cout << count << "\n";
            if (!count_opts.output.empty()) {
                json j = count_record_json(limit, count, 0);
                j.erase("digest");
                emit(count_opts.output, j.dump(2) + "\n");
            }
            return 0;
        }
        triform::CountOptions opt;
        opt.segment_size = parse_limit(seg_text);
        opt.threads = count_opts.threads;
        opt.verify_members = verify;
        opt.stop_after_segments = stop_after;
        opt.checkpoint_path = ck_path;
        triform::Checkpoint resume;
        if (!ck_path.empty() && std::filesystem::exists(ck_path)) {
            resume = triform::Checkpoint::load(ck_path);
            opt.resume = &resume;
        }
        const auto result = triform::count_a_sieve(limit, opt);
        if (!result.complete) {
            std::cerr << "checkpointed " << result.checkpoint.completed_segments.size()
                      << " segments; rerun the same command to resume\n";
            return 0;
        }
        std::cout << result.count << "\n";
        if (!count_opts.output.empty())
            emit(count_opts.output,
                 count_record_json(limit, result.count, result.digest).dump(2) + "\n");
        return 0;
    }

    if (*members_cmd) {
        const uint64_t limit = parse_limit(members_opts.limit_text);
        std::vector<triform::AMember> members;
        if (!family_text.empty()) {
            members = triform::enumerate_family(parse_family(family_text), limit);
        } else if (members_strategy == "families") {
            members = triform::enumerate_a_families(limit);
        } else {
            members = collect_members(limit, members_opts.threads, members_verify);
        }
        if (members_verify)
            for (const auto& m : members)
                if (!m.validate())
                    throw std::logic_error("member failed validation: p=" + std::to_string(m.p));
        emit(members_opts.output, members_csv(members));
        return 0;
    }

    if (*abar_cmd) {
        const uint64_t limit = parse_limit(abar_opts.limit_text);
        const auto result = triform::count_abar_minus_a(limit);
        std::cout << result.count << "\n";
        if (!result.members.empty())
            std::cerr << "smallest: " << result.members.front().p << "\n";
        if (!abar_opts.output.empty())
            emit(abar_opts.output, abar_members_csv(result.members));
        return 0;
    }

    if (*ss_cmd) {
        triform::LinearSystem sys;
        if (!ss_family.empty())
            sys = triform::forms_for_family(parse_family(ss_family));
        else if (!ss_forms.empty())
            sys = parse_forms(ss_forms);
        else
            throw std::invalid_argument("sseries needs --family or --forms");
        const auto r = triform::singular_series(sys, parse_limit(ss_plimit), ss_threads);
        std::cout << format_ld(r.value) << " (relative tail <= " << format_ld(r.tail_bound)
                  << ")\n";
        if (!ss_output.empty()) emit(ss_output, series_json(r).dump(2) + "\n");
        return 0;
    }

    if (*sa_cmd) {
        const auto r = triform::s_a_constant(parse_limit(sa_plimit), sa_threads);
        std::cout << format_ld(r.value) << " (relative tail <= " << format_ld(r.tail_bound)
                  << ")\n";
        if (!sa_output.empty()) emit(sa_output, series_json(r).dump(2) + "\n");
        return 0;
    }

    if (*li3_cmd) {
        std::cout << format_ld(triform::li3((long double)parse_limit(li3_x))) << "\n";
        return 0;
    }

    if (*table_cmd) {
        const auto limits = parse_limit_list(table_limits);
        std::vector<uint64_t> counts;
        if (!table_counts.empty()) {
            counts = parse_limit_list(table_counts);
        } else {
            triform::CountOptions opt;
            opt.threads = table_threads;
            for (uint64_t x : limits) counts.push_back(triform::count_a_sieve(x, opt).count);
        }
        const auto records = triform::build_table(limits, counts);
        std::string content;
        if (table_format == "csv") {
            content = triform::table_csv(records);
        } else if (table_format == "text") {
            content = triform::table_text(records);
        } else {
            json j = json::array();
            for (const auto& r : records)
                j.push_back({{"x", r.x},
                             {"count_a", r.count_a},
                             {"ratio_log3", (double)r.ratio_log3},
                             {"ratio_li3", (double)r.ratio_li3}});
            content = j.dump(2) + "\n";
        }
        emit(table_output, content);
        return 0;
    }

    if (*bset_cmd) {
        const uint64_t limit = parse_limit(bset_opts.limit_text);
        const auto members = collect_members(limit, bset_opts.threads, false);
        const auto state = triform::build_b(members);
        if (bset_verify && !triform::verify_pairwise(state))
            throw std::logic_error("pairwise verification failed");
        const double ratio =
            members.empty() ? 0.0 : double(state.chosen.size()) / double(members.size());
        if (bset_opts.format == "json") {
            json j{{"limit", limit},
                   {"count_a", members.size()},
                   {"count_b", state.chosen.size()},
                   {"rejected", state.rejected},
                   {"ratio", ratio}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "A: " << members.size() << "  B: " << state.chosen.size()
                      << "  ratio: " << ratio << "\n";
        }
        if (!bset_opts.output.empty()) emit(bset_opts.output, members_csv(state.chosen));
        return 0;
    }

    if (*coll_cmd) {
        const uint64_t limit = parse_limit(coll_opts.limit_text);
        const auto members = collect_members(limit, coll_opts.threads, false);
        const auto stats = triform::collision_stats(members);
        json j{{"r_eq_r", stats.counts[0]}, {"q_eq_r", stats.counts[1]},
               {"p_eq_r", stats.counts[2]}, {"r_eq_q", stats.counts[3]},
               {"q_eq_q", stats.counts[4]}, {"p_eq_q", stats.counts[5]}};
        const std::string content = j.dump(2) + "\n";
        if (coll_opts.output.empty())
            std::cout << content;
        else
            emit(coll_opts.output, content);
        return 0;
    }

    if (*hr_cmd) {
        triform::LinearSystem sys;
        if (!hr_family.empty())
            sys = triform::forms_for_family(parse_family(hr_family));
        else if (!hr_forms.empty())
            sys = parse_forms(hr_forms);
        else
            throw std::invalid_argument("hr-bound needs --family or --forms");
        const long double x = (long double)parse_limit(hr_x);
        std::cout << format_ld(
                         triform::hr_upper_bound(sys, x, parse_limit(hr_plimit), hr_threads))
                  << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        std::cerr << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const triform::PrecisionError& e) {
        std::cerr << "error[precision]: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const triform::CheckpointError& e) {
        std::cerr << "error[checkpoint]: " << e.what() << "\n";
        return kExitCheckpoint;
    } catch (const std::out_of_range& e) {
        std::cerr << "error[range]: " << e.what() << "\n";
        return kExitRange;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}
