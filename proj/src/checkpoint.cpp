#include "triform/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "triform/errors.hpp"

namespace triform {

namespace {
constexpr int kVersion = 1;
}

std::string Checkpoint::to_json() const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["limit"] = limit;
    j["segment_size"] = segment_size;
    j["completed_segments"] = completed_segments;
    j["partial_count"] = partial_count;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)digest);
    j["digest"] = hex;
    return j.dump(2);
}

Checkpoint Checkpoint::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint parse failure: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kVersion)
            throw CheckpointError("unsupported checkpoint version");
        Checkpoint ck;
        ck.limit = j.at("limit").get<uint64_t>();
        ck.segment_size = j.at("segment_size").get<uint64_t>();
        ck.completed_segments = j.at("completed_segments").get<std::vector<uint64_t>>();
        ck.partial_count = j.at("partial_count").get<uint64_t>();
        const std::string hex = j.at("digest").get<std::string>();
        ck.digest = std::stoull(hex, nullptr, 16);
        return ck;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("checkpoint field failure: ") + e.what());
    }
}

void Checkpoint::save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint file: " + tmp);
        out << to_json() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot read checkpoint file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace triform
