#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nsga3oj {

using Objective = int;

/// Fitness vector (f_1, ..., f_m). Maximization throughout.
using ObjectiveVector = std::vector<Objective>;

/// u_i >= v_i for all i. Throws UsageError on dimension mismatch.
bool weakly_dominates(const ObjectiveVector& u, const ObjectiveVector& v);

/// Weak dominance plus u != v.
bool dominates(const ObjectiveVector& u, const ObjectiveVector& v);

struct RankedPopulation {
    /// layers[0] is the non-dominated layer. Each layer lists input indices in
    /// ascending (input) order.
    std::vector<std::vector<std::size_t>> layers;
    /// rank_of[i] is the 1-based layer number of input i.
    std::vector<std::size_t> rank_of;
};

/// Partitions `vectors` into layers of mutually non-dominating fitness
/// vectors. Identical vectors always share a layer.
RankedPopulation non_dominated_sort(std::span<const ObjectiveVector> vectors);

} // namespace nsga3oj
