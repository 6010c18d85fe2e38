#include <wleng/topology.hpp>

#include <wleng/error.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace wleng {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError("topology schema: " + where + " is missing \"" + key + "\"");
    }
    return *it;
}

} // namespace

Topology load_topology(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("topology schema: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("topology schema: top level must be an object");
    }
    const json& jnodes = require(doc, "nodes", "top level");
    const json& jlinks = require(doc, "links", "top level");
    if (!jnodes.is_array()) throw ValidationError("topology schema: \"nodes\" must be a list");
    if (!jlinks.is_array()) throw ValidationError("topology schema: \"links\" must be a list");

    std::vector<Node> nodes;
    for (std::size_t i = 0; i < jnodes.size(); ++i) {
        const json& jn = jnodes[i];
        const std::string where = "nodes[" + std::to_string(i) + "]";
        if (!jn.is_object()) throw ValidationError("topology schema: " + where + " must be an object");
        const json& id = require(jn, "id", where);
        const json& role = require(jn, "role", where);
        if (!id.is_string()) throw ValidationError("topology schema: " + where + ".id must be a string");
        if (!role.is_string()) throw ValidationError("topology schema: " + where + ".role must be a string");
        Node node;
        node.id = id.get<std::string>();
        auto parsed = parse_node_role(role.get<std::string>());
        if (!parsed) {
            throw ValidationError("topology schema: node '" + node.id + "' has unknown role '" +
                                  role.get<std::string>() + "'");
        }
        node.role = *parsed;
        auto slots = jn.find("slots");
        if (node.role == NodeRole::Dc) {
            if (slots == jn.end() || !slots->is_number_integer()) {
                throw ValidationError("topology schema: dc node '" + node.id + "' needs integer \"slots\"");
            }
            node.slots = slots->get<std::int64_t>();
        } else if (slots != jn.end()) {
            throw ValidationError("topology schema: node '" + node.id + "' has \"slots\" but role is not dc");
        }
        nodes.push_back(std::move(node));
    }

    std::vector<LinkSpec> links;
    for (std::size_t i = 0; i < jlinks.size(); ++i) {
        const json& jl = jlinks[i];
        const std::string where = "links[" + std::to_string(i) + "]";
        if (!jl.is_object()) throw ValidationError("topology schema: " + where + " must be an object");
        const json& a = require(jl, "a", where);
        const json& b = require(jl, "b", where);
        const json& cap = require(jl, "capacity_bps", where);
        const json& lat = require(jl, "latency_ms", where);
        if (!a.is_string() || !b.is_string()) {
            throw ValidationError("topology schema: " + where + " endpoints must be strings");
        }
        if (!cap.is_number_integer()) {
            throw ValidationError("topology schema: " + where + ".capacity_bps must be an integer");
        }
        if (!lat.is_number()) {
            throw ValidationError("topology schema: " + where + ".latency_ms must be a number");
        }
        links.push_back(LinkSpec{a.get<std::string>(), b.get<std::string>(), cap.get<Bandwidth>(),
                                 latency_from_ms(lat.get<double>())});
    }
    return Topology(std::move(nodes), std::move(links));
}

Topology load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open topology file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_topology(buf.str());
}

std::string save_topology(const Topology& topology) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const Node& n : topology.nodes()) {
        nlohmann::ordered_json jn;
        jn["id"] = n.id;
        jn["role"] = std::string(to_string(n.role));
        if (n.role == NodeRole::Dc) jn["slots"] = n.slots;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["links"] = nlohmann::ordered_json::array();
    for (const Link& l : topology.links()) {
        nlohmann::ordered_json jl;
        jl["a"] = topology.node(l.a).id;
        jl["b"] = topology.node(l.b).id;
        jl["capacity_bps"] = l.capacity;
        jl["latency_ms"] = latency_to_ms(l.latency);
        doc["links"].push_back(std::move(jl));
    }
    return doc.dump(2) + "\n";
}

} // namespace wleng
