#include <wleng/workload.hpp>

#include <wleng/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace wleng {

WorkloadSpec generate_workload(Rng& rng, const Topology& topology, const WorkloadGeneratorConfig& config) {
    WorkloadSpec w;
    w.vcpus = kVcpuChoices[rng.uniform_index(3)];
    w.memory_gb = kMemoryChoices[rng.uniform_index(3)];
    w.storage_gb = kStorageChoices[rng.uniform_index(3)];
    w.demand_bw = kDemandChoices[rng.uniform_index(3)];

    std::vector<NodeIndex> pool = topology.access_nodes();
    const std::size_t a = pool.size();
    std::size_t k = config.selection == AccessSelection::RandomSize
                        ? 1 + static_cast<std::size_t>(rng.uniform_index(a))
                        : std::clamp<std::size_t>(config.fixed_k, 1, a);
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + rng.uniform_index(a - i)]);
    }
    w.access_pops.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(w.access_pops.begin(), w.access_pops.end());
    w.l_max_ms = config.l_max_ms;
    return w;
}

WorkloadStream generate_stream(std::uint64_t seed, std::size_t count, const Topology& topology,
                               const WorkloadGeneratorConfig& config) {
    if (count < 1) throw ValidationError("generate_stream: count must be >= 1");
    Rng rng(seed);
    WorkloadStream stream{seed, {}};
    stream.workloads.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        stream.workloads.push_back(generate_workload(rng, topology, config));
    }
    return stream;
}

std::string save_stream(const WorkloadStream& stream, const Topology& topology) {
    std::string out;
    nlohmann::ordered_json header;
    header["seed"] = stream.seed;
    header["count"] = stream.workloads.size();
    out += header.dump() + "\n";
    for (const auto& w : stream.workloads) {
        nlohmann::ordered_json j;
        j["vcpus"] = w.vcpus;
        j["memory_gb"] = w.memory_gb;
        j["storage_gb"] = w.storage_gb;
        j["access_pops"] = nlohmann::ordered_json::array();
        for (NodeIndex p : w.access_pops) j["access_pops"].push_back(topology.node(p).id);
        j["demand_bw_bps"] = w.demand_bw;
        if (w.l_max_ms) {
            j["l_max_ms"] = *w.l_max_ms;
        } else {
            j["l_max_ms"] = nullptr;
        }
        out += j.dump() + "\n";
    }
    return out;
}

namespace {

std::int64_t positive_int(const nlohmann::json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer() || it->get<std::int64_t>() <= 0) {
        throw ValidationError("stream schema: " + where + " needs positive integer \"" + key + "\"");
    }
    return it->get<std::int64_t>();
}

} // namespace

WorkloadStream load_stream(std::string_view text, const Topology& topology) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto parse = [&](const std::string& where) {
        try {
            return nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("stream schema: " + where + " is not valid JSON: " + e.what());
        }
    };

    while (std::getline(in, line) && line.empty()) ++line_no;
    if (line.empty()) throw ValidationError("stream schema: missing header line");
    ++line_no;
    const auto header = parse("header");
    if (!header.is_object() || !header.contains("seed") || !header["seed"].is_number_unsigned() ||
        !header.contains("count") || !header["count"].is_number_unsigned()) {
        throw ValidationError("stream schema: header must carry unsigned \"seed\" and \"count\"");
    }
    WorkloadStream stream;
    stream.seed = header["seed"].get<std::uint64_t>();
    const auto count = header["count"].get<std::uint64_t>();

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        const auto j = parse(where);
        if (!j.is_object()) throw ValidationError("stream schema: " + where + " must be an object");
        WorkloadSpec w;
        w.vcpus = positive_int(j, "vcpus", where);
        w.memory_gb = positive_int(j, "memory_gb", where);
        w.storage_gb = positive_int(j, "storage_gb", where);
        w.demand_bw = positive_int(j, "demand_bw_bps", where);
        auto pops = j.find("access_pops");
        if (pops == j.end() || !pops->is_array() || pops->empty()) {
            throw ValidationError("stream schema: " + where + " needs a non-empty \"access_pops\" list");
        }
        for (const auto& p : *pops) {
            if (!p.is_string()) throw ValidationError("stream schema: " + where + " access_pops must be strings");
            const auto id = p.get<std::string>();
            auto idx = topology.find_node(id);
            if (!idx) throw ValidationError("stream: " + where + " references unknown access node '" + id + "'");
            if (topology.node(*idx).role == NodeRole::Transit) {
                throw ValidationError("stream: " + where + " uses transit node '" + id + "' as an access POP");
            }
            w.access_pops.push_back(*idx);
        }
        std::sort(w.access_pops.begin(), w.access_pops.end());
        if (std::adjacent_find(w.access_pops.begin(), w.access_pops.end()) != w.access_pops.end()) {
            throw ValidationError("stream schema: " + where + " lists an access POP twice");
        }
        auto lmax = j.find("l_max_ms");
        if (lmax != j.end() && !lmax->is_null()) {
            if (!lmax->is_number()) throw ValidationError("stream schema: " + where + " l_max_ms must be a number or null");
            w.l_max_ms = lmax->get<double>();
        }
        stream.workloads.push_back(std::move(w));
    }
    if (stream.workloads.empty()) throw ValidationError("stream: workload list is empty");
    if (stream.workloads.size() != count) {
        throw ValidationError("stream: header count " + std::to_string(count) + " but " +
                              std::to_string(stream.workloads.size()) + " workloads present");
    }
    return stream;
}

WorkloadStream load_stream_file(const std::string& path, const Topology& topology) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open stream file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_stream(buf.str(), topology);
}

} // namespace wleng
