#pragma once

#include <wleng/resources.hpp>
#include <wleng/rng.hpp>
#include <wleng/topology.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wleng {

/// A workload: DC resource triple plus one traffic leg per access POP, each
/// leg carrying demand_bw toward whichever DC hosts the workload.
struct WorkloadSpec {
    std::int64_t vcpus = 0;
    std::int64_t memory_gb = 0;
    std::int64_t storage_gb = 0;
    std::vector<NodeIndex> access_pops; ///< ascending; the A-ends
    Bandwidth demand_bw = 0;            ///< per leg
    std::optional<double> l_max_ms;

    [[nodiscard]] std::int64_t slots(const SlotQuantum& q) const {
        return slots_required(vcpus, memory_gb, storage_gb, q);
    }

    bool operator==(const WorkloadSpec&) const = default;
};

inline constexpr std::int64_t kVcpuChoices[] = {2, 4, 8};
inline constexpr std::int64_t kMemoryChoices[] = {4, 8, 16};
inline constexpr std::int64_t kStorageChoices[] = {256, 512, 1024};
inline constexpr Bandwidth kDemandChoices[] = {128 * kMbps, 256 * kMbps, 512 * kMbps};

enum class AccessSelection {
    RandomSize, ///< k uniform in 1..A, then a uniform k-subset
    FixedSize   ///< uniform subset of exactly fixed_k (clamped to A)
};

struct WorkloadGeneratorConfig {
    AccessSelection selection = AccessSelection::RandomSize;
    std::size_t fixed_k = 1;
    std::optional<double> l_max_ms;
};

WorkloadSpec generate_workload(Rng& rng, const Topology& topology,
                               const WorkloadGeneratorConfig& config = {});

struct WorkloadStream {
    std::uint64_t seed = 0;
    std::vector<WorkloadSpec> workloads;

    bool operator==(const WorkloadStream&) const = default;
};

WorkloadStream generate_stream(std::uint64_t seed, std::size_t count, const Topology& topology,
                               const WorkloadGeneratorConfig& config = {});

/// Line-delimited JSON: a {"seed","count"} header, then one workload per line.
std::string save_stream(const WorkloadStream& stream, const Topology& topology);
/// Throws ValidationError on schema violations, unknown or non-access POP
/// ids, a count mismatch, or an empty workload list.
WorkloadStream load_stream(std::string_view text, const Topology& topology);
WorkloadStream load_stream_file(const std::string& path, const Topology& topology);

} // namespace wleng
