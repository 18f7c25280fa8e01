#pragma once

// Linear orderings and everything derived from them: fill-in
// construction, perfect elimination schemes, chordality testing, the
// treewidth of an ordering, maximal cliques of chordal graphs, and
// junction trees.

#include <map>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "tripre/graph.hpp"

namespace tripre {

/// Bijection between a vertex set and ranks 1..n. Rank 1 is eliminated
/// first.
class LinearOrdering {
public:
    LinearOrdering() = default;

    explicit LinearOrdering(std::vector<VertexId> elimination_order)
        : order_(std::move(elimination_order)) {
        rank_.reserve(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) {
            detail::require_positive_id(order_[i]);
            auto [_, fresh] = rank_.emplace(order_[i], static_cast<int>(i) + 1);
            if (!fresh)
                throw GraphError("ordering repeats vertex " +
                                 std::to_string(order_[i]));
        }
    }

    int size() const { return static_cast<int>(order_.size()); }
    bool contains(VertexId v) const { return rank_.contains(v); }

    /// 1-based rank of v; error if v is not ordered.
    int rank_of(VertexId v) const {
        auto it = rank_.find(v);
        if (it == rank_.end())
            throw GraphError("vertex " + std::to_string(v) + " not in ordering");
        return it->second;
    }

    /// Vertex at 1-based rank.
    VertexId vertex_at(int rank) const {
        if (rank < 1 || rank > size())
            throw GraphError("ordering rank " + std::to_string(rank) +
                             " out of range");
        return order_[static_cast<std::size_t>(rank) - 1];
    }

    /// Vertices in elimination order (rank 1 first).
    const std::vector<VertexId>& order() const { return order_; }

    bool operator==(const LinearOrdering& other) const {
        return order_ == other.order_;
    }

private:
    std::vector<VertexId> order_;
    std::unordered_map<VertexId, int> rank_;
};

/// Puts v at rank 1 and shifts every other vertex up by one.
inline LinearOrdering prepend(const LinearOrdering& f, VertexId v) {
    if (f.contains(v))
        throw GraphError("prepend: vertex " + std::to_string(v) +
                         " already ordered");
    std::vector<VertexId> order;
    order.reserve(static_cast<std::size_t>(f.size()) + 1);
    order.push_back(v);
    order.insert(order.end(), f.order().begin(), f.order().end());
    return LinearOrdering(std::move(order));
}

/// The unique minimal chordal supergraph admitting f as a perfect
/// elimination scheme, plus the edges added and the width achieved.
struct FillIn {
    UGraph chordal_graph;
    std::vector<Edge> fill_edges;  // normalised, sorted, disjoint from base
    int width = 0;                 // max clique size of chordal_graph minus 1
};

namespace detail {

inline void require_orders_exactly(const UGraph& g, const LinearOrdering& f) {
    if (f.size() != g.num_vertices())
        throw GraphError("ordering covers " + std::to_string(f.size()) +
                         " vertices, graph has " +
                         std::to_string(g.num_vertices()));
    for (VertexId v : f.order())
        if (!g.has_vertex(v)) throw_unknown_vertex(v);
}

}  // namespace detail

/// Simulates elimination in f-order, turning each vertex's not-yet-
/// eliminated neighbours into a clique. Edges absent from g are the fill;
/// the width is the largest such neighbourhood encountered.
inline FillIn fill_in(const UGraph& g, const LinearOrdering& f) {
    detail::require_orders_exactly(g, f);
    FillIn out{g, {}, 0};
    UGraph work = g;
    for (int rank = 1; rank <= f.size(); ++rank) {
        VertexId v = f.vertex_at(rank);
        auto higher = work.sorted_neighbors(v);  // eliminated ones are gone
        out.width = std::max(out.width, static_cast<int>(higher.size()));
        for (std::size_t i = 0; i < higher.size(); ++i)
            for (std::size_t j = i + 1; j < higher.size(); ++j)
                if (work.add_edge(higher[i], higher[j])) {
                    out.chordal_graph.add_edge(higher[i], higher[j]);
                    out.fill_edges.push_back(make_edge(higher[i], higher[j]));
                }
        work.remove_vertex(v);
    }
    std::sort(out.fill_edges.begin(), out.fill_edges.end());
    return out;
}

/// True iff every vertex's higher-ordered neighbours form a clique in g,
/// i.e. fill_in(g, f) adds no edges.
inline bool is_perfect_elimination(const UGraph& g, const LinearOrdering& f) {
    detail::require_orders_exactly(g, f);
    for (int rank = 1; rank <= f.size(); ++rank) {
        VertexId v = f.vertex_at(rank);
        std::vector<VertexId> higher;
        for (VertexId w : g.neighbors(v))
            if (f.rank_of(w) > rank) higher.push_back(w);
        for (std::size_t i = 0; i < higher.size(); ++i)
            for (std::size_t j = i + 1; j < higher.size(); ++j)
                if (!g.adjacent(higher[i], higher[j])) return false;
    }
    return true;
}

namespace detail {

/// Maximum cardinality search visit order: repeatedly take the vertex
/// with the most visited neighbours, ties to the lowest id, seeded at
/// start. Shared by the chordality test and the MCS heuristic.
inline std::vector<VertexId> mcs_visit_order(const UGraph& g, VertexId start) {
    if (!g.has_vertex(start)) throw_unknown_vertex(start);
    std::vector<VertexId> verts = g.vertices();
    std::unordered_map<VertexId, int> weight;
    std::unordered_set<VertexId> visited;
    for (VertexId v : verts) weight[v] = 0;
    std::vector<VertexId> order;
    order.reserve(verts.size());
    for (std::size_t step = 0; step < verts.size(); ++step) {
        VertexId pick = 0;
        if (step == 0) {
            pick = start;
        } else {
            int best = -1;
            for (VertexId v : verts) {
                if (visited.contains(v)) continue;
                if (weight[v] > best) {
                    best = weight[v];
                    pick = v;
                }
            }
        }
        visited.insert(pick);
        order.push_back(pick);
        for (VertexId w : g.neighbors(pick))
            if (!visited.contains(w)) ++weight[w];
    }
    return order;
}

}  // namespace detail

/// Returns a perfect elimination scheme if g is chordal, absent
/// otherwise. Runs maximum cardinality search from the lowest vertex and
/// verifies that the reversed visit order eliminates without fill.
inline std::optional<LinearOrdering> chordality_check(const UGraph& g) {
    if (g.empty()) return LinearOrdering{};
    auto visit = detail::mcs_visit_order(g, g.min_vertex_id());
    std::reverse(visit.begin(), visit.end());
    LinearOrdering f(std::move(visit));
    if (is_perfect_elimination(g, f)) return f;
    return std::nullopt;
}

/// Maximal cliques of a chordal graph, given a perfect elimination
/// scheme. Each clique is the vertex plus its higher-ordered neighbours;
/// the set is emitted in elimination order with non-maximal candidates
/// dropped. A candidate at v is non-maximal exactly when it is contained
/// in the higher neighbourhood of some lower-ordered neighbour of v.
inline std::vector<std::vector<VertexId>> maximal_cliques_chordal(
    const UGraph& g, const LinearOrdering& f) {
    if (!is_perfect_elimination(g, f))
        throw GraphError("maximal_cliques_chordal: ordering is not a perfect "
                         "elimination scheme");
    int n = f.size();
    std::vector<std::vector<VertexId>> higher(static_cast<std::size_t>(n) + 1);
    for (int rank = 1; rank <= n; ++rank) {
        VertexId v = f.vertex_at(rank);
        for (VertexId w : g.neighbors(v))
            if (f.rank_of(w) > rank)
                higher[static_cast<std::size_t>(rank)].push_back(w);
        std::sort(higher[static_cast<std::size_t>(rank)].begin(),
                  higher[static_cast<std::size_t>(rank)].end());
    }
    std::vector<std::vector<VertexId>> cliques;
    for (int rank = 1; rank <= n; ++rank) {
        VertexId v = f.vertex_at(rank);
        const auto& hv = higher[static_cast<std::size_t>(rank)];
        bool maximal = true;
        for (VertexId u : g.neighbors(v)) {
            int ru = f.rank_of(u);
            if (ru >= rank) continue;
            const auto& hu = higher[static_cast<std::size_t>(ru)];
            // contained iff {v} ∪ hv ⊆ hu
            if (hu.size() < hv.size() + 1) continue;
            bool subset = std::binary_search(hu.begin(), hu.end(), v);
            for (std::size_t i = 0; subset && i < hv.size(); ++i)
                subset = std::binary_search(hu.begin(), hu.end(), hv[i]);
            if (subset) {
                maximal = false;
                break;
            }
        }
        if (maximal) {
            std::vector<VertexId> clique;
            clique.reserve(hv.size() + 1);
            clique.push_back(v);
            clique.insert(clique.end(), hv.begin(), hv.end());
            std::sort(clique.begin(), clique.end());
            cliques.push_back(std::move(clique));
        }
    }
    return cliques;
}

/// Tree (forest, for disconnected inputs) over a chordal graph's maximal
/// cliques with the running-intersection property.
struct JunctionTree {
    struct TreeEdge {
        int a = 0, b = 0;  // node indices, a < b
        std::vector<VertexId> separator;
    };
    std::vector<std::vector<VertexId>> nodes;  // sorted cliques
    std::vector<TreeEdge> edges;               // sorted by (a, b)
    int components = 0;
};

/// Builds a maximum-weight spanning forest of the clique graph, weights
/// being intersection sizes; for chordal inputs this satisfies the
/// running-intersection property. Ties go to the lexicographically
/// first node-index pair.
inline JunctionTree build_junction_tree(
    const std::vector<std::vector<VertexId>>& cliques) {
    JunctionTree jt;
    jt.nodes.reserve(cliques.size());
    for (const auto& c : cliques) {
        auto sorted = c;
        std::sort(sorted.begin(), sorted.end());
        jt.nodes.push_back(std::move(sorted));
    }
    int k = static_cast<int>(jt.nodes.size());
    struct Cand {
        int weight;
        int a, b;
    };
    std::vector<Cand> cands;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            std::vector<VertexId> inter;
            std::set_intersection(jt.nodes[static_cast<std::size_t>(i)].begin(),
                                  jt.nodes[static_cast<std::size_t>(i)].end(),
                                  jt.nodes[static_cast<std::size_t>(j)].begin(),
                                  jt.nodes[static_cast<std::size_t>(j)].end(),
                                  std::back_inserter(inter));
            if (!inter.empty())
                cands.push_back({static_cast<int>(inter.size()), i, j});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<int> parent(static_cast<std::size_t>(k));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& c : cands) {
        int ra = find(c.a), rb = find(c.b);
        if (ra == rb) continue;
        parent[static_cast<std::size_t>(ra)] = rb;
        std::vector<VertexId> sep;
        std::set_intersection(jt.nodes[static_cast<std::size_t>(c.a)].begin(),
                              jt.nodes[static_cast<std::size_t>(c.a)].end(),
                              jt.nodes[static_cast<std::size_t>(c.b)].begin(),
                              jt.nodes[static_cast<std::size_t>(c.b)].end(),
                              std::back_inserter(sep));
        jt.edges.push_back({c.a, c.b, std::move(sep)});
    }
    std::sort(jt.edges.begin(), jt.edges.end(),
              [](const JunctionTree::TreeEdge& x, const JunctionTree::TreeEdge& y) {
                  return std::pair{x.a, x.b} < std::pair{y.a, y.b};
              });
    jt.components = k - static_cast<int>(jt.edges.size());
    return jt;
}

/// Width of the fill-in given f: the treewidth this ordering certifies.
inline int treewidth_of_ordering(const UGraph& g, const LinearOrdering& f) {
    return fill_in(g, f).width;
}

}  // namespace tripre
