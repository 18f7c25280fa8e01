#pragma once

// Undirected and directed graph primitives: stable 1-based vertex ids,
// constant-expected-time adjacency queries, moralisation of directed
// acyclic graphs, and the simpliciality predicates the reduction rules
// are built on.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tripre {

using VertexId = int;

/// Unordered edge, normalised so that first < second.
using Edge = std::pair<VertexId, VertexId>;

inline Edge make_edge(VertexId u, VertexId v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

// Simpliciality checks skip vertices above this degree unless the caller
// overrides the cap; rules simply do not fire on capped vertices.
inline constexpr int kDefaultDegreeCap = 64;
inline constexpr int kNoDegreeCap = std::numeric_limits<int>::max();

namespace detail {

[[noreturn]] inline void throw_unknown_vertex(VertexId v) {
    throw GraphError("unknown vertex id " + std::to_string(v));
}

inline void require_positive_id(VertexId v) {
    if (v < 1)
        throw GraphError("vertex ids are 1-based; got " + std::to_string(v));
}

}  // namespace detail

/// Undirected simple graph. Vertex ids are assigned once and never
/// recycled: removing a vertex does not renumber the survivors.
/// Adjacency is a per-vertex hash set, so membership tests are expected
/// O(1) and clique checks on a degree-d vertex cost O(d^2).
class UGraph {
public:
    UGraph() = default;

    /// Graph with vertices 1..n and no edges.
    explicit UGraph(int num_vertices) {
        for (VertexId v = 1; v <= num_vertices; ++v) add_vertex(v);
    }

    void add_vertex(VertexId v) {
        detail::require_positive_id(v);
        if (static_cast<std::size_t>(v) >= present_.size()) {
            present_.resize(static_cast<std::size_t>(v) + 1, 0);
            adj_.resize(static_cast<std::size_t>(v) + 1);
        }
        if (present_[static_cast<std::size_t>(v)])
            throw GraphError("vertex " + std::to_string(v) + " already present");
        present_[static_cast<std::size_t>(v)] = 1;
        ++n_;
    }

    bool has_vertex(VertexId v) const {
        return v >= 1 && static_cast<std::size_t>(v) < present_.size() &&
               present_[static_cast<std::size_t>(v)];
    }

    /// Adds the edge and returns true, or returns false if it is already
    /// present. Self-loops and unknown endpoints are errors.
    bool add_edge(VertexId u, VertexId v) {
        require_vertex(u);
        require_vertex(v);
        if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
        if (adj_[static_cast<std::size_t>(u)].contains(v)) return false;
        adj_[static_cast<std::size_t>(u)].insert(v);
        adj_[static_cast<std::size_t>(v)].insert(u);
        ++m_;
        return true;
    }

    /// Removes v together with all incident edges. The id stays retired.
    void remove_vertex(VertexId v) {
        require_vertex(v);
        auto& nbrs = adj_[static_cast<std::size_t>(v)];
        for (VertexId w : nbrs) {
            adj_[static_cast<std::size_t>(w)].erase(v);
            --m_;
        }
        nbrs.clear();
        present_[static_cast<std::size_t>(v)] = 0;
        --n_;
    }

    bool adjacent(VertexId u, VertexId v) const {
        require_vertex(u);
        require_vertex(v);
        return adj_[static_cast<std::size_t>(u)].contains(v);
    }

    /// Unordered neighbour set; do not rely on its iteration order.
    const std::unordered_set<VertexId>& neighbors(VertexId v) const {
        require_vertex(v);
        return adj_[static_cast<std::size_t>(v)];
    }

    std::vector<VertexId> sorted_neighbors(VertexId v) const {
        const auto& s = neighbors(v);
        std::vector<VertexId> out(s.begin(), s.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    int degree(VertexId v) const {
        return static_cast<int>(neighbors(v).size());
    }

    int num_vertices() const { return n_; }
    long long num_edges() const { return m_; }
    bool empty() const { return n_ == 0; }

    /// Present vertex ids in ascending order.
    std::vector<VertexId> vertices() const {
        std::vector<VertexId> out;
        out.reserve(static_cast<std::size_t>(n_));
        for (std::size_t v = 1; v < present_.size(); ++v)
            if (present_[v]) out.push_back(static_cast<VertexId>(v));
        return out;
    }

    VertexId max_vertex_id() const {
        for (std::size_t v = present_.size(); v-- > 1;)
            if (present_[v]) return static_cast<VertexId>(v);
        return 0;
    }

    VertexId min_vertex_id() const {
        for (std::size_t v = 1; v < present_.size(); ++v)
            if (present_[v]) return static_cast<VertexId>(v);
        return 0;
    }

    /// Edges as normalised pairs, sorted lexicographically.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(m_));
        for (std::size_t v = 1; v < present_.size(); ++v) {
            if (!present_[v]) continue;
            for (VertexId w : adj_[v])
                if (static_cast<VertexId>(v) < w)
                    out.emplace_back(static_cast<VertexId>(v), w);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Full consistency audit: symmetric adjacency, no self-loops, edge
    /// count equal to half the neighbour-set total. Throws on violation.
    void audit() const {
        long long half_sum = 0;
        int count = 0;
        for (std::size_t v = 1; v < present_.size(); ++v) {
            if (!present_[v]) {
                if (!adj_[v].empty())
                    throw GraphError("audit: retired vertex keeps neighbours");
                continue;
            }
            ++count;
            for (VertexId w : adj_[v]) {
                if (w == static_cast<VertexId>(v))
                    throw GraphError("audit: self-loop at " + std::to_string(w));
                if (!has_vertex(w) ||
                    !adj_[static_cast<std::size_t>(w)].contains(static_cast<VertexId>(v)))
                    throw GraphError("audit: asymmetric adjacency at " + std::to_string(w));
            }
            half_sum += static_cast<long long>(adj_[v].size());
        }
        if (count != n_) throw GraphError("audit: vertex count mismatch");
        if (half_sum != 2 * m_) throw GraphError("audit: edge count mismatch");
    }

    bool operator==(const UGraph& other) const {
        return vertices() == other.vertices() && edges() == other.edges();
    }

private:
    void require_vertex(VertexId v) const {
        if (!has_vertex(v)) detail::throw_unknown_vertex(v);
    }

    std::vector<char> present_;
    std::vector<std::unordered_set<VertexId>> adj_;
    int n_ = 0;
    long long m_ = 0;
};

/// Directed graph intended to stay acyclic. Self-arcs and parallel arcs
/// are rejected on insertion; acyclicity is verified by the file parser
/// (and re-checked by moralize) via find_back_arc.
class Dag {
public:
    Dag() = default;

    explicit Dag(int num_vertices) {
        for (VertexId v = 1; v <= num_vertices; ++v) add_vertex(v);
    }

    void add_vertex(VertexId v) {
        detail::require_positive_id(v);
        if (static_cast<std::size_t>(v) >= present_.size()) {
            present_.resize(static_cast<std::size_t>(v) + 1, 0);
            children_.resize(static_cast<std::size_t>(v) + 1);
            parents_.resize(static_cast<std::size_t>(v) + 1);
        }
        if (present_[static_cast<std::size_t>(v)])
            throw GraphError("vertex " + std::to_string(v) + " already present");
        present_[static_cast<std::size_t>(v)] = 1;
        ++n_;
    }

    bool has_vertex(VertexId v) const {
        return v >= 1 && static_cast<std::size_t>(v) < present_.size() &&
               present_[static_cast<std::size_t>(v)];
    }

    void add_arc(VertexId from, VertexId to) {
        require_vertex(from);
        require_vertex(to);
        if (from == to)
            throw GraphError("self-arc at vertex " + std::to_string(from));
        if (children_[static_cast<std::size_t>(from)].contains(to))
            throw GraphError("parallel arc " + std::to_string(from) + " -> " +
                             std::to_string(to));
        children_[static_cast<std::size_t>(from)].insert(to);
        parents_[static_cast<std::size_t>(to)].insert(from);
        ++a_;
    }

    bool has_arc(VertexId from, VertexId to) const {
        require_vertex(from);
        require_vertex(to);
        return children_[static_cast<std::size_t>(from)].contains(to);
    }

    std::vector<VertexId> sorted_children(VertexId v) const {
        require_vertex(v);
        std::vector<VertexId> out(children_[static_cast<std::size_t>(v)].begin(),
                                  children_[static_cast<std::size_t>(v)].end());
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<VertexId> sorted_parents(VertexId v) const {
        require_vertex(v);
        std::vector<VertexId> out(parents_[static_cast<std::size_t>(v)].begin(),
                                  parents_[static_cast<std::size_t>(v)].end());
        std::sort(out.begin(), out.end());
        return out;
    }

    int in_degree(VertexId v) const {
        require_vertex(v);
        return static_cast<int>(parents_[static_cast<std::size_t>(v)].size());
    }

    int out_degree(VertexId v) const {
        require_vertex(v);
        return static_cast<int>(children_[static_cast<std::size_t>(v)].size());
    }

    int num_vertices() const { return n_; }
    long long num_arcs() const { return a_; }

    std::vector<VertexId> vertices() const {
        std::vector<VertexId> out;
        out.reserve(static_cast<std::size_t>(n_));
        for (std::size_t v = 1; v < present_.size(); ++v)
            if (present_[v]) out.push_back(static_cast<VertexId>(v));
        return out;
    }

    /// Arcs as (from, to), sorted.
    std::vector<std::pair<VertexId, VertexId>> arcs() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        out.reserve(static_cast<std::size_t>(a_));
        for (std::size_t v = 1; v < present_.size(); ++v) {
            if (!present_[v]) continue;
            for (VertexId w : children_[v])
                out.emplace_back(static_cast<VertexId>(v), w);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Finds an arc that closes a directed cycle, if any. Deterministic:
    /// DFS from the lowest root, children visited in ascending order.
    std::optional<std::pair<VertexId, VertexId>> find_back_arc() const {
        enum : char { White, Gray, Black };
        std::vector<char> color(present_.size(), White);
        for (std::size_t root = 1; root < present_.size(); ++root) {
            if (!present_[root] || color[root] != White) continue;
            // Stack entries: (vertex, index into sorted children).
            std::vector<std::pair<VertexId, std::size_t>> stack;
            std::vector<std::vector<VertexId>> child_lists;
            stack.emplace_back(static_cast<VertexId>(root), 0);
            child_lists.push_back(sorted_children(static_cast<VertexId>(root)));
            color[root] = Gray;
            while (!stack.empty()) {
                auto& [v, idx] = stack.back();
                const auto& kids = child_lists.back();
                if (idx == kids.size()) {
                    color[static_cast<std::size_t>(v)] = Black;
                    stack.pop_back();
                    child_lists.pop_back();
                    continue;
                }
                VertexId w = kids[idx++];
                if (color[static_cast<std::size_t>(w)] == Gray)
                    return std::make_pair(v, w);
                if (color[static_cast<std::size_t>(w)] == White) {
                    color[static_cast<std::size_t>(w)] = Gray;
                    stack.emplace_back(w, 0);
                    child_lists.push_back(sorted_children(w));
                }
            }
        }
        return std::nullopt;
    }

    bool is_acyclic() const { return !find_back_arc().has_value(); }

private:
    void require_vertex(VertexId v) const {
        if (!has_vertex(v)) detail::throw_unknown_vertex(v);
    }

    std::vector<char> present_;
    std::vector<std::unordered_set<VertexId>> children_;
    std::vector<std::unordered_set<VertexId>> parents_;
    int n_ = 0;
    long long a_ = 0;
};

/// Moralisation: marry every pair of non-adjacent co-parents, then drop
/// arc directions. Vertex ids carry over unchanged.
inline UGraph moralize(const Dag& g) {
    if (auto back = g.find_back_arc())
        throw GraphError("moralize: input is cyclic (back arc " +
                         std::to_string(back->first) + " -> " +
                         std::to_string(back->second) + ")");
    UGraph m;
    for (VertexId v : g.vertices()) m.add_vertex(v);
    for (VertexId v : g.vertices()) {
        auto parents = g.sorted_parents(v);
        for (VertexId p : parents) m.add_edge(p, v);
        for (std::size_t i = 0; i < parents.size(); ++i)
            for (std::size_t j = i + 1; j < parents.size(); ++j)
                m.add_edge(parents[i], parents[j]);
    }
    return m;
}

namespace detail {

/// Deduplicated ascending copy of a vertex pack; validates membership.
inline std::vector<VertexId> sorted_vertex_set(const UGraph& g,
                                               std::span<const VertexId> w) {
    std::vector<VertexId> out(w.begin(), w.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (VertexId v : out)
        if (!g.has_vertex(v)) throw_unknown_vertex(v);
    return out;
}

}  // namespace detail

/// True iff every pair of distinct vertices in w is adjacent. Vacuously
/// true for |w| <= 1.
inline bool is_clique(const UGraph& g, std::span<const VertexId> w) {
    auto verts = detail::sorted_vertex_set(g, w);
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (!g.adjacent(verts[i], verts[j])) return false;
    return true;
}

/// True iff the neighbours of v form a clique. Vertices of degree above
/// degree_cap report false without scanning.
inline bool is_simplicial(const UGraph& g, VertexId v,
                          int degree_cap = kDefaultDegreeCap) {
    int d = g.degree(v);
    if (d <= 1) return true;
    if (d > degree_cap) return false;
    auto nbrs = g.sorted_neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
        for (std::size_t j = i + 1; j < nbrs.size(); ++j)
            if (!g.adjacent(nbrs[i], nbrs[j])) return false;
    return true;
}

/// Finds a neighbour w of v such that the remaining neighbours form a
/// clique (the almost-simplicial witness), preferring the lowest id.
/// Degree-0 vertices have no witness; capped vertices report absent.
///
/// Any witness must be an endpoint of some non-adjacent neighbour pair,
/// so one such pair narrows the candidates to two vertices.
inline std::optional<VertexId> almost_simplicial_witness(
    const UGraph& g, VertexId v, int degree_cap = kDefaultDegreeCap) {
    int d = g.degree(v);
    if (d == 0) return std::nullopt;
    if (d > degree_cap) return std::nullopt;
    auto nbrs = g.sorted_neighbors(v);
    VertexId a = 0, b = 0;
    for (std::size_t i = 0; i < nbrs.size() && a == 0; ++i)
        for (std::size_t j = i + 1; j < nbrs.size(); ++j)
            if (!g.adjacent(nbrs[i], nbrs[j])) {
                a = nbrs[i];
                b = nbrs[j];
                break;
            }
    if (a == 0) return nbrs.front();  // simplicial: any neighbour works
    for (VertexId w : {a, b}) {
        bool ok = true;
        for (std::size_t i = 0; i < nbrs.size() && ok; ++i) {
            if (nbrs[i] == w) continue;
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (nbrs[j] == w) continue;
                if (!g.adjacent(nbrs[i], nbrs[j])) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return w;
    }
    return std::nullopt;
}

/// Subgraph induced by w; vertex ids are preserved.
inline UGraph induced_subgraph(const UGraph& g, std::span<const VertexId> w) {
    auto verts = detail::sorted_vertex_set(g, w);
    UGraph out;
    for (VertexId v : verts) out.add_vertex(v);
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (g.adjacent(verts[i], verts[j])) out.add_edge(verts[i], verts[j]);
    return out;
}

}  // namespace tripre
