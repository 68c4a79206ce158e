#include "nsga3oj/metrics.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "nsga3oj/errors.hpp"

namespace nsga3oj {

std::map<ObjectiveVector, std::size_t> cover_numbers(std::span<const Individual> population,
                                                     std::span<const ObjectiveVector> target_front)
{
    std::map<ObjectiveVector, std::size_t> covers;
    for (const auto& v : target_front) {
        covers.emplace(v, 0);
    }
    for (const auto& ind : population) {
        if (auto it = covers.find(ind.fitness); it != covers.end()) {
            ++it->second;
        }
    }
    return covers;
}

std::vector<RVector> r_class_coverage(std::span<const Individual> population, const OjzjInstance& instance)
{
    std::set<RVector> classes;
    for (const auto& ind : population) {
        if (auto r = genome_class(instance, ind.genome)) {
            classes.insert(std::move(*r));
        }
    }
    return {classes.begin(), classes.end()};
}

std::size_t cover_cap(const OjzjInstance& instance, std::size_t mu)
{
    std::size_t incomparable_bound = 1;
    for (std::size_t j = 0; j < instance.blocks(); ++j) {
        incomparable_bound *= instance.block_len() + 1;
    }
    return mu / (2 * incomparable_bound);
}

GenerationRecord observe_generation(const OjzjInstance& instance, std::span<const ObjectiveVector> target_front,
                                    std::span<const Individual> population, std::size_t t, std::size_t cap,
                                    JumpCounters jumps)
{
    GenerationRecord rec;
    rec.t = t;
    rec.jumps = jumps;

    const auto covers = cover_numbers(population, target_front);
    std::size_t min_covered = std::numeric_limits<std::size_t>::max();
    std::size_t capped = std::numeric_limits<std::size_t>::max();
    for (const auto& [v, c] : covers) {
        if (c > 0) {
            ++rec.covered_front_count;
            min_covered = std::min(min_covered, c);
        }
        capped = std::min(capped, std::min(c, cap));
    }
    rec.min_cover = rec.covered_front_count > 0 ? min_covered : 0;
    rec.capped_min_cover = covers.empty() ? 0 : capped;
    rec.r_classes = r_class_coverage(population, instance);
    return rec;
}

void Trajectory::record(GenerationRecord record)
{
    if (!records_.empty() && record.t <= records_.back().t) {
        throw UsageError("Trajectory::record: generation " + std::to_string(record.t) +
                         " does not follow " + std::to_string(records_.back().t));
    }
    records_.push_back(std::move(record));
}

void record_generation(Trajectory& trajectory, GenerationRecord record)
{
    trajectory.record(std::move(record));
}

MonotonicityReport check_monotonicity(const Trajectory& trajectory)
{
    MonotonicityReport report;
    const auto& recs = trajectory.records();
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& prev = recs[i - 1];
        const auto& cur = recs[i];
        if (cur.capped_min_cover < prev.capped_min_cover) {
            ++report.capped_min_cover_decreases;
        }
        if (cur.covered_front_count < prev.covered_front_count) {
            ++report.covered_count_decreases;
        }
        // both lists are sorted
        if (!std::includes(cur.r_classes.begin(), cur.r_classes.end(), prev.r_classes.begin(),
                           prev.r_classes.end())) {
            ++report.r_class_losses;
        }
    }
    return report;
}

} // namespace nsga3oj
