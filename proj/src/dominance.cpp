#include "nsga3oj/dominance.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "nsga3oj/errors.hpp"

namespace nsga3oj {

namespace {

void check_dims(const ObjectiveVector& u, const ObjectiveVector& v)
{
    if (u.size() != v.size()) {
        throw UsageError("dominance: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
    }
}

} // namespace

bool weakly_dominates(const ObjectiveVector& u, const ObjectiveVector& v)
{
    check_dims(u, v);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < v[i]) {
            return false;
        }
    }
    return true;
}

bool dominates(const ObjectiveVector& u, const ObjectiveVector& v)
{
    check_dims(u, v);
    bool strict = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < v[i]) {
            return false;
        }
        strict = strict || u[i] > v[i];
    }
    return strict;
}

// Deb's fast non-dominated sort over the distinct vectors; duplicates are
// folded into one node so they share a rank by construction.
RankedPopulation non_dominated_sort(std::span<const ObjectiveVector> vectors)
{
    RankedPopulation result;
    if (vectors.empty()) {
        return result;
    }
    const std::size_t m = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != m) {
            throw UsageError("non_dominated_sort: vectors have differing dimensions");
        }
    }

    std::map<ObjectiveVector, std::size_t> node_of;
    std::vector<std::size_t> node(vectors.size());
    std::vector<const ObjectiveVector*> unique;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto [it, inserted] = node_of.try_emplace(vectors[i], unique.size());
        if (inserted) {
            unique.push_back(&vectors[i]);
        }
        node[i] = it->second;
    }

    const std::size_t u = unique.size();
    std::vector<std::vector<std::size_t>> dominated_by(u);
    std::vector<std::size_t> domination_count(u, 0);
    for (std::size_t a = 0; a < u; ++a) {
        for (std::size_t b = a + 1; b < u; ++b) {
            if (weakly_dominates(*unique[a], *unique[b])) {
                dominated_by[a].push_back(b);
                ++domination_count[b];
            } else if (weakly_dominates(*unique[b], *unique[a])) {
                dominated_by[b].push_back(a);
                ++domination_count[a];
            }
        }
    }

    std::vector<std::size_t> node_rank(u, 0);
    std::vector<std::size_t> current;
    for (std::size_t a = 0; a < u; ++a) {
        if (domination_count[a] == 0) {
            current.push_back(a);
        }
    }
    std::size_t rank = 1;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto a : current) {
            node_rank[a] = rank;
            for (auto b : dominated_by[a]) {
                if (--domination_count[b] == 0) {
                    next.push_back(b);
                }
            }
        }
        current = std::move(next);
        ++rank;
    }

    result.layers.resize(rank - 1);
    result.rank_of.resize(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const std::size_t r = node_rank[node[i]];
        result.rank_of[i] = r;
        result.layers[r - 1].push_back(i);
    }
    return result;
}

} // namespace nsga3oj
