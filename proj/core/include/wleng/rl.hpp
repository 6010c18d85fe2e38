#pragma once

#include <wleng/controller.hpp>
#include <wleng/environment.hpp>
#include <wleng/rng.hpp>
#include <wleng/workload.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wleng {

/// The agent's action set, indexed 0..2.
inline constexpr std::array<Policy, 3> kActions = {Policy::DataCentreOpt, Policy::PathUtilOpt,
                                                   Policy::LatencyOpt};
inline constexpr std::size_t kActionCount = kActions.size();

/// Per-DC utilisation bins, per-DC slots-free bins, then (optionally) the
/// workload's demand class and slot count.
using StateKey = std::vector<std::int32_t>;

struct StateConfig {
    std::int32_t util_bins = 4;
    std::int32_t slot_bins = 4;
    bool workload_features = false;

    bool operator==(const StateConfig&) const = default;
};

/// Which paths the reward's max-path-utilisation term looks at.
enum class RewardScope {
    Global,  ///< every (access POP, DC) path set in the topology
    Workload ///< only the placed workload's legs
};

struct Hyperparams {
    double alpha = 0.02;
    double gamma = 0.95;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    /// Steps over which epsilon decays linearly; unset means 80% of the
    /// training run.
    std::optional<std::uint64_t> epsilon_decay_steps;
    StateConfig state{};
    RewardScope reward_scope = RewardScope::Global;
    /// Used by act_greedy for states never seen in training.
    Policy fallback = Policy::PathUtilOpt;

    bool operator==(const Hyperparams&) const = default;
};

/// Throws ValidationError for out-of-domain values.
void validate(const Hyperparams& hp);

/// Bucket of a fraction on [0, 1] into `bins` equal-width bins; 1.0 (and
/// anything above) lands in the top bin.
std::int32_t bin_fraction(double value, std::int32_t bins);

/// Sparse action-value table. Unvisited states read as all zeros.
class QTable {
public:
    struct Entry {
        std::array<double, kActionCount> values{};
        std::uint64_t visits = 0;

        bool operator==(const Entry&) const = default;
    };

    QTable() = default;
    QTable(Hyperparams hp, std::vector<std::string> dc_ids);

    [[nodiscard]] const Hyperparams& hyperparams() const { return hp_; }
    [[nodiscard]] const std::vector<std::string>& dc_ids() const { return dc_ids_; }

    [[nodiscard]] const Entry* find(const StateKey& s) const;
    [[nodiscard]] std::array<double, kActionCount> values(const StateKey& s) const;
    [[nodiscard]] double max_value(const StateKey& s) const;
    Entry& entry(const StateKey& s) { return table_[s]; }
    void set(const StateKey& s, Entry e) { table_[s] = e; }

    [[nodiscard]] std::size_t size() const { return table_.size(); }
    [[nodiscard]] const std::map<StateKey, Entry>& entries() const { return table_; }

    bool operator==(const QTable&) const = default;

private:
    Hyperparams hp_{};
    std::vector<std::string> dc_ids_;
    std::map<StateKey, Entry> table_;
};

StateKey encode_state(const Environment& env, const WorkloadSpec& workload, const StateConfig& config,
                      const SlotQuantum& quantum = {});

/// score(1 - max path util) + score(slots-free fraction) once placed,
/// exactly -1000 otherwise. score clips to [0, 1].
double reward(const PlacementOutcome& outcome, const Environment& env,
              RewardScope scope = RewardScope::Global, const WorkloadSpec* workload = nullptr);

inline constexpr double kInfeasibleReward = -1000.0;

/// Global maximum of current path utilisation over every (access, dc) path set.
double global_max_path_utilization(const Environment& env);

/// Epsilon-greedy over the three actions; greedy ties go to the lowest index.
std::size_t select_action(const QTable& q, const StateKey& s, double epsilon, Rng& rng);

/// One-step Q-learning update of the single cell (s, a).
void q_update(QTable& q, const StateKey& s, std::size_t a, double r, const StateKey& s_next, bool terminal);

/// Greedy policy for evaluation; falls back to the configured policy on
/// unseen states.
Policy act_greedy(const QTable& q, const StateKey& s);

double epsilon_at(const Hyperparams& hp, std::uint64_t step, std::uint64_t total_steps);

struct RewardWindow {
    std::size_t index = 0;
    double total_reward = 0.0;
    std::size_t placements_failed = 0;

    bool operator==(const RewardWindow&) const = default;
};

struct TrainingResult {
    QTable qtable;
    std::vector<RewardWindow> reward_log;
};

inline constexpr std::size_t kRewardWindow = 1000;

/// Trains on `workload_count` generated workloads. An infeasible placement
/// earns -1000, ends the episode, and clears the environment.
TrainingResult train(const Environment& env_template, std::uint64_t workload_count, const Hyperparams& hp,
                     std::uint64_t seed, const ControllerConfig& controller = {},
                     const WorkloadGeneratorConfig& workloads = {});

/// Constraints a loaded Q-table must satisfy; unset fields are not checked.
struct QTableExpectation {
    std::optional<std::vector<std::string>> dc_ids;
    std::optional<std::int32_t> util_bins;
    std::optional<std::int32_t> slot_bins;
    std::optional<bool> workload_features;
};

QTableExpectation expectation_for(const Topology& topology);
std::vector<std::string> dc_ids_of(const Topology& topology);

std::string save_qtable(const QTable& q);
/// Throws ValidationError on schema violations or a mismatch with `expect`.
QTable load_qtable(std::string_view text, const QTableExpectation& expect = {});
QTable load_qtable_file(const std::string& path, const QTableExpectation& expect = {});

} // namespace wleng
