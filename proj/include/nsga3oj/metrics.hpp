#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nsga3oj/ojzj.hpp"

namespace nsga3oj {

/// c(v) for every v in `target_front`; vectors absent from the population map
/// to 0. Individuals whose fitness is not in the target are ignored.
std::map<ObjectiveVector, std::size_t> cover_numbers(std::span<const Individual> population,
                                                     std::span<const ObjectiveVector> target_front);

/// Distinct r-vectors of the Pareto-optimal individuals, sorted.
std::vector<RVector> r_class_coverage(std::span<const Individual> population, const OjzjInstance& instance);

/// Largest alpha for which cover numbers are guaranteed to be retained:
/// floor(mu / (2 * (2n/m + 1)^(m/2))).
std::size_t cover_cap(const OjzjInstance& instance, std::size_t mu);

/// Offspring counters accumulated by the engine. A jump event is an offspring
/// with some block all-ones or all-zeros whose pre-mutation block was neither.
/// A valley jump is the subset where that pre-mutation block sat exactly k
/// bits away from the boundary it reached.
struct JumpCounters {
    std::uint64_t jump_events = 0;
    std::uint64_t valley_jumps = 0;
};

struct GenerationRecord {
    std::size_t t = 0;
    std::size_t covered_front_count = 0;
    /// Minimum c(v) over covered front vectors; 0 when nothing is covered.
    std::size_t min_cover = 0;
    /// min over the whole front of min(c(v), cap).
    std::size_t capped_min_cover = 0;
    std::vector<RVector> r_classes;
    /// Cumulative since initialization.
    JumpCounters jumps;
};

/// Builds the record for population P_t.
GenerationRecord observe_generation(const OjzjInstance& instance, std::span<const ObjectiveVector> target_front,
                                    std::span<const Individual> population, std::size_t t, std::size_t cap,
                                    JumpCounters jumps);

class Trajectory {
public:
    /// Throws UsageError unless record.t exceeds the previous index.
    void record(GenerationRecord record);

    const std::vector<GenerationRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

private:
    std::vector<GenerationRecord> records_;
};

void record_generation(Trajectory& trajectory, GenerationRecord record);

/// Steps at which a retention property was broken (each counts one step).
struct MonotonicityReport {
    std::size_t capped_min_cover_decreases = 0;
    std::size_t covered_count_decreases = 0;
    std::size_t r_class_losses = 0;

    bool clean() const noexcept
    {
        return capped_min_cover_decreases == 0 && covered_count_decreases == 0 && r_class_losses == 0;
    }
};

MonotonicityReport check_monotonicity(const Trajectory& trajectory);

} // namespace nsga3oj
