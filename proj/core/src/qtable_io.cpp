#include <wleng/rl.hpp>

#include <wleng/error.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace wleng {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view scope_name(RewardScope s) { return s == RewardScope::Global ? "global" : "workload"; }

template <typename T>
T field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(std::string("qtable schema: missing \"") + key + "\"");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("qtable schema: \"") + key + "\" has the wrong type");
    }
}

} // namespace

std::string save_qtable(const QTable& q) {
    const Hyperparams& hp = q.hyperparams();
    ordered_json doc;
    ordered_json h;
    h["alpha"] = hp.alpha;
    h["gamma"] = hp.gamma;
    h["epsilon_start"] = hp.epsilon_start;
    h["epsilon_end"] = hp.epsilon_end;
    if (hp.epsilon_decay_steps) {
        h["epsilon_decay_steps"] = *hp.epsilon_decay_steps;
    } else {
        h["epsilon_decay_steps"] = nullptr;
    }
    h["reward_scope"] = std::string(scope_name(hp.reward_scope));
    h["fallback_policy"] = std::string(to_string(hp.fallback));
    doc["hyperparams"] = std::move(h);
    doc["bins"] = {{"util_bins", hp.state.util_bins}, {"slot_bins", hp.state.slot_bins}};
    doc["workload_features"] = hp.state.workload_features;
    doc["dc_nodes"] = q.dc_ids();
    doc["actions"] = ordered_json::array();
    for (Policy p : kActions) doc["actions"].push_back(std::string(to_string(p)));
    ordered_json entries = ordered_json::array();
    for (const auto& [state, e] : q.entries()) {
        entries.push_back(ordered_json::array({state, e.values, e.visits}));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(1) + "\n";
}

QTable load_qtable(std::string_view text, const QTableExpectation& expect) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("qtable schema: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("qtable schema: top level must be an object");

    const auto h = field<json>(doc, "hyperparams");
    const auto bins = field<json>(doc, "bins");
    Hyperparams hp;
    hp.alpha = field<double>(h, "alpha");
    hp.gamma = field<double>(h, "gamma");
    hp.epsilon_start = field<double>(h, "epsilon_start");
    hp.epsilon_end = field<double>(h, "epsilon_end");
    if (auto it = h.find("epsilon_decay_steps"); it != h.end() && !it->is_null()) {
        hp.epsilon_decay_steps = field<std::uint64_t>(h, "epsilon_decay_steps");
    }
    const auto scope = field<std::string>(h, "reward_scope");
    if (scope == "global") {
        hp.reward_scope = RewardScope::Global;
    } else if (scope == "workload") {
        hp.reward_scope = RewardScope::Workload;
    } else {
        throw ValidationError("qtable schema: unknown reward_scope '" + scope + "'");
    }
    const auto fallback = parse_policy(field<std::string>(h, "fallback_policy"));
    if (!fallback) throw ValidationError("qtable schema: unknown fallback_policy");
    hp.fallback = *fallback;
    hp.state.util_bins = field<std::int32_t>(bins, "util_bins");
    hp.state.slot_bins = field<std::int32_t>(bins, "slot_bins");
    hp.state.workload_features = field<bool>(doc, "workload_features");
    validate(hp);
    auto dc_ids = field<std::vector<std::string>>(doc, "dc_nodes");

    if (expect.util_bins && *expect.util_bins != hp.state.util_bins) {
        throw ValidationError("qtable: util_bins " + std::to_string(hp.state.util_bins) + " in file, expected " +
                              std::to_string(*expect.util_bins));
    }
    if (expect.slot_bins && *expect.slot_bins != hp.state.slot_bins) {
        throw ValidationError("qtable: slot_bins " + std::to_string(hp.state.slot_bins) + " in file, expected " +
                              std::to_string(*expect.slot_bins));
    }
    if (expect.workload_features && *expect.workload_features != hp.state.workload_features) {
        throw ValidationError("qtable: workload-feature flag does not match");
    }
    if (expect.dc_ids && *expect.dc_ids != dc_ids) {
        throw ValidationError("qtable: trained on " + std::to_string(dc_ids.size()) +
                              " dc nodes that do not match the evaluation topology's " +
                              std::to_string(expect.dc_ids->size()));
    }

    const std::size_t key_len = 2 * dc_ids.size() + (hp.state.workload_features ? 2 : 0);
    QTable q(hp, std::move(dc_ids));
    const auto entries = field<json>(doc, "entries");
    if (!entries.is_array()) throw ValidationError("qtable schema: \"entries\" must be a list");
    for (const auto& row : entries) {
        if (!row.is_array() || row.size() != 3) {
            throw ValidationError("qtable schema: each entry must be [state, values, visits]");
        }
        if (!row[1].is_array() || row[1].size() != kActionCount) {
            throw ValidationError("qtable schema: each entry needs exactly three action values");
        }
        QTable::Entry e;
        StateKey state;
        try {
            state = row[0].get<StateKey>();
            e.values = row[1].get<std::array<double, kActionCount>>();
            e.visits = row[2].get<std::uint64_t>();
        } catch (const json::exception& ex) {
            throw ValidationError(std::string("qtable schema: malformed entry: ") + ex.what());
        }
        if (state.size() != key_len) {
            throw ValidationError("qtable schema: state of length " + std::to_string(state.size()) + ", expected " +
                                  std::to_string(key_len));
        }
        q.set(state, e);
    }
    return q;
}

QTable load_qtable_file(const std::string& path, const QTableExpectation& expect) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open qtable file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_qtable(buf.str(), expect);
}

} // namespace wleng
