#include <wleng/rl.hpp>

#include <wleng/error.hpp>

#include <algorithm>
#include <cmath>

namespace wleng {

void validate(const Hyperparams& hp) {
    if (!(hp.alpha > 0.0 && hp.alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
    if (!(hp.gamma >= 0.0 && hp.gamma < 1.0)) throw ValidationError("gamma must lie in [0, 1)");
    auto unit = [](double e) { return e >= 0.0 && e <= 1.0; };
    if (!unit(hp.epsilon_start) || !unit(hp.epsilon_end)) throw ValidationError("epsilon must lie in [0, 1]");
    if (hp.state.util_bins < 1 || hp.state.slot_bins < 1) throw ValidationError("bin counts must be >= 1");
    if (hp.fallback == Policy::Random) throw ValidationError("fallback policy must be one of the three actions");
}

std::int32_t bin_fraction(double value, std::int32_t bins) {
    if (!(value > 0.0)) return 0;
    const auto b = static_cast<std::int32_t>(std::floor(value * bins));
    return std::min(b, bins - 1);
}

QTable::QTable(Hyperparams hp, std::vector<std::string> dc_ids) : hp_(hp), dc_ids_(std::move(dc_ids)) {}

const QTable::Entry* QTable::find(const StateKey& s) const {
    auto it = table_.find(s);
    return it == table_.end() ? nullptr : &it->second;
}

std::array<double, kActionCount> QTable::values(const StateKey& s) const {
    const Entry* e = find(s);
    return e ? e->values : std::array<double, kActionCount>{};
}

double QTable::max_value(const StateKey& s) const {
    const auto v = values(s);
    return *std::max_element(v.begin(), v.end());
}

StateKey encode_state(const Environment& env, const WorkloadSpec& workload, const StateConfig& config,
                      const SlotQuantum& quantum) {
    const auto& dcs = env.topology.dc_nodes();
    StateKey key;
    key.reserve(2 * dcs.size() + 2);
    for (NodeIndex dc : dcs) {
        double worst = 0.0;
        for (const PathSet& ps : env.routing->toward(dc)) {
            worst = std::max(worst, env.topology.max_path_utilization(ps, 0));
        }
        key.push_back(bin_fraction(worst, config.util_bins));
    }
    for (NodeIndex dc : dcs) {
        key.push_back(bin_fraction(free_fraction(env.inventory.cluster(dc)), config.slot_bins));
    }
    if (config.workload_features) {
        std::int32_t demand_class = 0;
        while (demand_class < 2 && workload.demand_bw > kDemandChoices[demand_class]) ++demand_class;
        key.push_back(demand_class);
        key.push_back(static_cast<std::int32_t>(workload.slots(quantum)));
    }
    return key;
}

double global_max_path_utilization(const Environment& env) {
    double worst = 0.0;
    for (NodeIndex dc : env.topology.dc_nodes()) {
        for (const PathSet& ps : env.routing->toward(dc)) {
            worst = std::max(worst, env.topology.max_path_utilization(ps, 0));
        }
    }
    return worst;
}

double reward(const PlacementOutcome& outcome, const Environment& env, RewardScope scope,
              const WorkloadSpec* workload) {
    const auto* placed = std::get_if<Placed>(&outcome);
    if (!placed) return kInfeasibleReward;
    double max_util = 0.0;
    if (scope == RewardScope::Global || workload == nullptr) {
        max_util = global_max_path_utilization(env);
    } else {
        for (NodeIndex pop : workload->access_pops) {
            max_util = std::max(max_util,
                                env.topology.max_path_utilization(env.routing->paths(pop, placed->dc_node), 0));
        }
    }
    auto score = [](double x) { return std::clamp(x, 0.0, 1.0); };
    return score(1.0 - max_util) + score(env.inventory.slots_free_fraction());
}

namespace {

std::size_t argmax(const std::array<double, kActionCount>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

} // namespace

std::size_t select_action(const QTable& q, const StateKey& s, double epsilon, Rng& rng) {
    if (rng.bernoulli(epsilon)) {
        return static_cast<std::size_t>(rng.uniform_index(kActionCount));
    }
    return argmax(q.values(s));
}

void q_update(QTable& q, const StateKey& s, std::size_t a, double r, const StateKey& s_next, bool terminal) {
    if (a >= kActionCount) throw ValidationError("q_update: action index out of range");
    const Hyperparams& hp = q.hyperparams();
    const double bootstrap = terminal ? 0.0 : hp.gamma * q.max_value(s_next);
    QTable::Entry& e = q.entry(s);
    e.values[a] = (1.0 - hp.alpha) * e.values[a] + hp.alpha * (r + bootstrap);
    ++e.visits;
}

Policy act_greedy(const QTable& q, const StateKey& s) {
    const QTable::Entry* e = q.find(s);
    if (!e) return q.hyperparams().fallback;
    return kActions[argmax(e->values)];
}

double epsilon_at(const Hyperparams& hp, std::uint64_t step, std::uint64_t total_steps) {
    const std::uint64_t decay = hp.epsilon_decay_steps.value_or(
        static_cast<std::uint64_t>(0.8 * static_cast<double>(total_steps)));
    if (decay == 0 || step >= decay) return hp.epsilon_end;
    const double progress = static_cast<double>(step) / static_cast<double>(decay);
    return hp.epsilon_start + (hp.epsilon_end - hp.epsilon_start) * progress;
}

std::vector<std::string> dc_ids_of(const Topology& topology) {
    std::vector<std::string> ids;
    for (NodeIndex dc : topology.dc_nodes()) ids.push_back(topology.node(dc).id);
    return ids;
}

TrainingResult train(const Environment& env_template, std::uint64_t workload_count, const Hyperparams& hp,
                     std::uint64_t seed, const ControllerConfig& controller,
                     const WorkloadGeneratorConfig& workloads) {
    if (workload_count < 1) throw ValidationError("train: workload_count must be >= 1");
    validate(hp);
    validate(controller);

    Hyperparams resolved = hp;
    resolved.epsilon_decay_steps = hp.epsilon_decay_steps.value_or(
        static_cast<std::uint64_t>(0.8 * static_cast<double>(workload_count)));

    TrainingResult result{QTable(resolved, dc_ids_of(env_template.topology)), {}};
    QTable& q = result.qtable;
    Environment env = env_template;
    env.reset();

    Rng workload_rng(derive_seed(seed, 0));
    Rng explore_rng(derive_seed(seed, 1));
    Rng policy_rng(derive_seed(seed, 2));

    WorkloadSpec current = generate_workload(workload_rng, env.topology, workloads);
    StateKey state = encode_state(env, current, resolved.state, controller.quantum);

    for (std::uint64_t step = 0; step < workload_count; ++step) {
        const double epsilon = epsilon_at(resolved, step, workload_count);
        const std::size_t action = select_action(q, state, epsilon, explore_rng);
        const PlacementOutcome outcome = place(env, current, kActions[action], controller, policy_rng);
        const double r = reward(outcome, env, resolved.reward_scope, &current);

        const std::size_t window = static_cast<std::size_t>(step / kRewardWindow);
        if (result.reward_log.size() <= window) result.reward_log.push_back(RewardWindow{window, 0.0, 0});
        result.reward_log.back().total_reward += r;

        WorkloadSpec next = generate_workload(workload_rng, env.topology, workloads);
        if (is_placed(outcome)) {
            StateKey next_state = encode_state(env, next, resolved.state, controller.quantum);
            q_update(q, state, action, r, next_state, false);
            state = std::move(next_state);
        } else {
            ++result.reward_log.back().placements_failed;
            q_update(q, state, action, r, {}, true);
            env.reset();
            state = encode_state(env, next, resolved.state, controller.quantum);
        }
        current = std::move(next);
    }
    return result;
}

QTableExpectation expectation_for(const Topology& topology) {
    QTableExpectation e;
    e.dc_ids = dc_ids_of(topology);
    return e;
}

} // namespace wleng
