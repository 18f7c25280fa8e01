#pragma once

// Safe reduction rules. Each rule removes one or more vertices from the
// working graph while maintaining the invariant
//
//     max(treewidth(original), low) == max(treewidth(current), low)
//
// so a triangulation of the reduced graph can be turned back into one of
// the original graph, with `low` a certified lower bound throughout.

#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <set>
#include <string_view>

#include "tripre/graph.hpp"

namespace tripre {

/// Rule kinds in detection-priority order: the cheap degree-indexed
/// rules first, the quadratic simpliciality scans last. Islet/Twig are
/// the degree-0/1 fast paths of Simplicial; Series/Triangle the
/// degree-2/3 fast paths of AlmostSimplicial.
enum class RuleKind : std::uint8_t {
    Islet = 0,
    Twig,
    Series,
    Triangle,
    Buddy,
    Cube,
    Simplicial,
    AlmostSimplicial,
};

inline constexpr int kRuleKindCount = 8;

inline constexpr std::array<RuleKind, kRuleKindCount> kRulePriority = {
    RuleKind::Islet,  RuleKind::Twig, RuleKind::Series,     RuleKind::Triangle,
    RuleKind::Buddy,  RuleKind::Cube, RuleKind::Simplicial, RuleKind::AlmostSimplicial,
};

inline constexpr const char* rule_name(RuleKind k) {
    switch (k) {
        case RuleKind::Islet: return "islet";
        case RuleKind::Twig: return "twig";
        case RuleKind::Series: return "series";
        case RuleKind::Triangle: return "triangle";
        case RuleKind::Buddy: return "buddy";
        case RuleKind::Cube: return "cube";
        case RuleKind::Simplicial: return "simplicial";
        case RuleKind::AlmostSimplicial: return "almost_simplicial";
    }
    return "?";
}

/// Set of enabled rule kinds with the named presets.
class RuleSet {
public:
    constexpr RuleSet() = default;

    static constexpr RuleSet of(std::initializer_list<RuleKind> kinds) {
        RuleSet rs;
        for (RuleKind k : kinds) rs.bits_ |= bit(k);
        return rs;
    }

    static constexpr RuleSet none() { return RuleSet{}; }
    static constexpr RuleSet simplicial_only() {
        return of({RuleKind::Simplicial});
    }
    static constexpr RuleSet pr1() { return of({RuleKind::Islet, RuleKind::Twig}); }
    static constexpr RuleSet pr2() { return pr1().united(of({RuleKind::Series})); }
    static constexpr RuleSet pr3() {
        return pr2().united(of({RuleKind::Triangle, RuleKind::Buddy, RuleKind::Cube}));
    }
    static constexpr RuleSet pr4() { return pr3().united(simplicial_only()); }
    static constexpr RuleSet all() {
        return pr4().united(of({RuleKind::AlmostSimplicial}));
    }

    /// Accepts S, PR1..PR4 (with or without hyphen, any case), ALL, NONE.
    static std::optional<RuleSet> parse(std::string_view name) {
        std::string up;
        for (char c : name)
            if (c != '-') up.push_back(static_cast<char>(std::toupper(c)));
        if (up == "S") return simplicial_only();
        if (up == "PR1") return pr1();
        if (up == "PR2") return pr2();
        if (up == "PR3") return pr3();
        if (up == "PR4") return pr4();
        if (up == "ALL") return all();
        if (up == "NONE") return none();
        return std::nullopt;
    }

    constexpr bool contains(RuleKind k) const { return bits_ & bit(k); }
    constexpr bool contains_all(RuleSet o) const {
        return (bits_ & o.bits_) == o.bits_;
    }
    constexpr RuleSet united(RuleSet o) const {
        RuleSet rs;
        rs.bits_ = bits_ | o.bits_;
        return rs;
    }
    constexpr bool operator==(const RuleSet&) const = default;

private:
    static constexpr std::uint8_t bit(RuleKind k) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
    }
    std::uint8_t bits_ = 0;
};

/// One vertex elimination, in removal order on the stack. The neighbour
/// snapshot is for diagnostics and tests.
struct EliminationRecord {
    VertexId vertex = 0;
    RuleKind rule = RuleKind::Islet;
    int degree_at_removal = 0;
    std::vector<VertexId> neighbors_at_removal;
};

using RuleCounts = std::array<std::int64_t, kRuleKindCount>;

inline std::int64_t& count_for(RuleCounts& c, RuleKind k) {
    return c[static_cast<std::size_t>(k)];
}
inline std::int64_t count_for(const RuleCounts& c, RuleKind k) {
    return c[static_cast<std::size_t>(k)];
}

/// Working graph, the lower bound `low`, the elimination stack (bottom =
/// first removed) and per-rule elimination counters.
struct ReductionState {
    UGraph graph;
    int low = 1;
    std::vector<EliminationRecord> stack;
    RuleCounts rule_counts{};
    int escalations = 0;  // diagnostics: how often low was bumped when stuck
};

inline ReductionState make_reduction_state(UGraph g, int low0 = 1) {
    if (low0 < 1)
        throw GraphError("initial lower bound must be at least 1, got " +
                         std::to_string(low0));
    ReductionState st;
    st.graph = std::move(g);
    st.low = low0;
    return st;
}

namespace detail {

/// Vertices whose neighbourhood changed during a rule application:
/// surviving neighbours of removed vertices plus endpoints of added
/// edges. Used to re-seed the incremental worklists.
using TouchedLog = std::vector<VertexId>;

inline void complete_into_clique(UGraph& g, std::span<const VertexId> verts,
                                 TouchedLog* touched) {
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (g.add_edge(verts[i], verts[j]) && touched) {
                touched->push_back(verts[i]);
                touched->push_back(verts[j]);
            }
}

inline void push_and_remove(ReductionState& st, VertexId v, RuleKind rule,
                            TouchedLog* touched) {
    EliminationRecord rec;
    rec.vertex = v;
    rec.rule = rule;
    rec.neighbors_at_removal = st.graph.sorted_neighbors(v);
    rec.degree_at_removal = static_cast<int>(rec.neighbors_at_removal.size());
    if (touched)
        touched->insert(touched->end(), rec.neighbors_at_removal.begin(),
                        rec.neighbors_at_removal.end());
    st.graph.remove_vertex(v);
    count_for(st.rule_counts, rule) += 1;
    st.stack.push_back(std::move(rec));
}

struct CubeMatch {
    VertexId hub = 0;
    std::array<VertexId, 3> corners{};    // ascending
    std::array<VertexId, 3> externals{};  // ascending
};

/// Cube configuration keyed at its hub: the hub and its three
/// neighbours all have degree 3, the three corner vertices attach to
/// exactly two external vertices each, and the three externals are
/// pairwise shared so that completing {hub} ∪ externals into a clique
/// absorbs the corners.
inline std::optional<CubeMatch> match_cube_at_hub(const UGraph& g, VertexId hub) {
    if (g.degree(hub) != 3) return std::nullopt;
    auto corners = g.sorted_neighbors(hub);
    for (VertexId c : corners)
        if (g.degree(c) != 3) return std::nullopt;
    std::array<std::array<VertexId, 2>, 3> ext{};
    std::vector<VertexId> all_ext;
    for (std::size_t i = 0; i < 3; ++i) {
        std::size_t k = 0;
        for (VertexId w : g.sorted_neighbors(corners[i])) {
            if (w == hub) continue;
            if (w == corners[0] || w == corners[1] || w == corners[2])
                return std::nullopt;  // corners may not attach to each other
            if (k == 2) return std::nullopt;
            ext[i][k++] = w;
        }
        if (k != 2) return std::nullopt;
        all_ext.push_back(ext[i][0]);
        all_ext.push_back(ext[i][1]);
    }
    std::sort(all_ext.begin(), all_ext.end());
    // exactly three distinct externals, each shared by two corners
    if (all_ext[0] == hub || all_ext[0] < 1) return std::nullopt;
    if (all_ext[0] != all_ext[1] || all_ext[2] != all_ext[3] ||
        all_ext[4] != all_ext[5])
        return std::nullopt;
    if (all_ext[1] == all_ext[2] || all_ext[3] == all_ext[4]) return std::nullopt;
    CubeMatch m;
    m.hub = hub;
    m.corners = {corners[0], corners[1], corners[2]};
    m.externals = {all_ext[0], all_ext[2], all_ext[4]};
    return m;
}

inline void fire_cube(ReductionState& st, const CubeMatch& m, TouchedLog* touched) {
    for (VertexId c : m.corners) push_and_remove(st, c, RuleKind::Cube, touched);
    std::array<VertexId, 4> k4 = {m.hub, m.externals[0], m.externals[1],
                                  m.externals[2]};
    complete_into_clique(st.graph, k4, touched);
    st.low = std::max(st.low, 3);
}

/// Lowest-id degree-3 partner sharing v's exact neighbour set, if any.
inline std::optional<VertexId> buddy_partner(const UGraph& g, VertexId v) {
    if (g.degree(v) != 3) return std::nullopt;
    auto nbrs = g.sorted_neighbors(v);
    for (VertexId w : g.sorted_neighbors(nbrs[0])) {
        if (w == v || g.degree(w) != 3) continue;
        if (g.adjacent(w, nbrs[1]) && g.adjacent(w, nbrs[2])) return w;
    }
    return std::nullopt;
}

}  // namespace detail

/// Simplicial vertex rule: remove a simplicial vertex of degree d and
/// raise low to max(low, d). Degree-0/1 removals are recorded as Islet /
/// Twig. Returns whether the rule fired.
inline bool apply_simplicial(ReductionState& st, VertexId v,
                             int degree_cap = kDefaultDegreeCap,
                             detail::TouchedLog* touched = nullptr) {
    if (!st.graph.has_vertex(v)) detail::throw_unknown_vertex(v);
    if (!is_simplicial(st.graph, v, degree_cap)) return false;
    int d = st.graph.degree(v);
    RuleKind k = d == 0   ? RuleKind::Islet
                 : d == 1 ? RuleKind::Twig
                          : RuleKind::Simplicial;
    detail::push_and_remove(st, v, k, touched);
    st.low = std::max(st.low, d);
    return true;
}

/// Almost-simplicial vertex rule: when a witness exists and low >= deg(v),
/// complete the whole neighbourhood into a clique and remove v. Degree-2
/// and degree-3 removals are recorded as Series / Triangle. Fully
/// simplicial vertices are declined here; apply_simplicial owns them and
/// its low update. Returns whether the rule fired.
inline bool apply_almost_simplicial(ReductionState& st, VertexId v,
                                    int degree_cap = kDefaultDegreeCap,
                                    detail::TouchedLog* touched = nullptr) {
    if (!st.graph.has_vertex(v)) detail::throw_unknown_vertex(v);
    int d = st.graph.degree(v);
    if (d == 0) return false;
    if (is_simplicial(st.graph, v, degree_cap)) return false;
    auto witness = almost_simplicial_witness(st.graph, v, degree_cap);
    if (!witness) return false;
    if (st.low < d) return false;
    RuleKind k = d == 2   ? RuleKind::Series
                 : d == 3 ? RuleKind::Triangle
                          : RuleKind::AlmostSimplicial;
    auto nbrs = st.graph.sorted_neighbors(v);
    detail::complete_into_clique(st.graph, nbrs, touched);
    detail::push_and_remove(st, v, k, touched);
    return true;
}

/// Buddy rule: two degree-3 vertices with identical neighbour sets are
/// both removed after their shared neighbourhood is completed into a
/// triangle; requires low >= 3. v is pushed before w, so the reversal
/// eliminates v first. Returns whether the rule fired.
inline bool apply_buddy(ReductionState& st, VertexId v, VertexId w,
                        detail::TouchedLog* touched = nullptr) {
    if (!st.graph.has_vertex(v)) detail::throw_unknown_vertex(v);
    if (!st.graph.has_vertex(w)) detail::throw_unknown_vertex(w);
    if (v == w)
        throw GraphError("buddy rule needs two distinct vertices");
    if (st.graph.degree(v) != 3 || st.graph.degree(w) != 3) return false;
    auto nv = st.graph.sorted_neighbors(v);
    auto nw = st.graph.sorted_neighbors(w);
    if (nv != nw) return false;
    if (st.low < 3) return false;
    detail::complete_into_clique(st.graph, nv, touched);
    detail::push_and_remove(st, v, RuleKind::Buddy, touched);
    detail::push_and_remove(st, w, RuleKind::Buddy, touched);
    return true;
}

/// Cube rule: the four internal vertices of a cube-like configuration
/// (a hub joined to three degree-3 corners, each corner attached to two
/// of three shared external vertices) are reduced by removing the
/// corners and completing hub+externals into a K4. The configuration
/// contains a K4 minor, so low is raised to max(low, 3) unconditionally.
/// Returns whether the rule fired.
inline bool apply_cube(ReductionState& st, std::span<const VertexId> internal,
                       detail::TouchedLog* touched = nullptr) {
    auto verts = detail::sorted_vertex_set(st.graph, internal);
    if (internal.size() != 4 || verts.size() != 4)
        throw GraphError("cube rule needs exactly 4 distinct internal vertices");
    for (VertexId hub : verts) {
        auto m = detail::match_cube_at_hub(st.graph, hub);
        if (!m) continue;
        std::array<VertexId, 4> found = {m->hub, m->corners[0], m->corners[1],
                                         m->corners[2]};
        std::sort(found.begin(), found.end());
        if (!std::equal(found.begin(), found.end(), verts.begin())) continue;
        detail::fire_cube(st, *m, touched);
        return true;
    }
    return false;
}

namespace detail {

/// Applies rule kind k at site v if its firing condition holds. The
/// degree-indexed fast paths follow the literal rule statements (a
/// degree-2 vertex with low >= 2 is a series site whether or not it is
/// also simplicial; the low raise would be a no-op there anyway), which
/// keeps the PR-style presets complete on their treewidth classes.
inline bool try_apply_kind(ReductionState& st, RuleKind k, VertexId v,
                           int degree_cap, TouchedLog* touched) {
    UGraph& g = st.graph;
    switch (k) {
        case RuleKind::Islet:
            if (g.degree(v) != 0) return false;
            push_and_remove(st, v, RuleKind::Islet, touched);
            return true;
        case RuleKind::Twig:
            if (g.degree(v) != 1) return false;
            push_and_remove(st, v, RuleKind::Twig, touched);
            return true;
        case RuleKind::Series: {
            if (g.degree(v) != 2 || st.low < 2) return false;
            auto nbrs = g.sorted_neighbors(v);
            complete_into_clique(g, nbrs, touched);
            push_and_remove(st, v, RuleKind::Series, touched);
            return true;
        }
        case RuleKind::Triangle: {
            if (g.degree(v) != 3 || st.low < 3) return false;
            auto nbrs = g.sorted_neighbors(v);
            bool some_pair = g.adjacent(nbrs[0], nbrs[1]) ||
                             g.adjacent(nbrs[0], nbrs[2]) ||
                             g.adjacent(nbrs[1], nbrs[2]);
            if (!some_pair) return false;
            complete_into_clique(g, nbrs, touched);
            push_and_remove(st, v, RuleKind::Triangle, touched);
            return true;
        }
        case RuleKind::Buddy: {
            if (st.low < 3) return false;
            auto w = buddy_partner(g, v);
            if (!w) return false;
            return apply_buddy(st, v, *w, touched);
        }
        case RuleKind::Cube: {
            auto m = match_cube_at_hub(g, v);
            if (!m) return false;
            fire_cube(st, *m, touched);
            return true;
        }
        case RuleKind::Simplicial:
            return apply_simplicial(st, v, degree_cap, touched);
        case RuleKind::AlmostSimplicial:
            return apply_almost_simplicial(st, v, degree_cap, touched);
    }
    return false;
}

}  // namespace detail

/// Reference stepper: scans kinds in priority order and sites in
/// ascending id, applies the first applicable rule, and reports which
/// kind fired. The incremental engine in reduce_to_fixpoint reproduces
/// this selection exactly.
inline std::optional<RuleKind> apply_one(ReductionState& st, RuleSet rules,
                                         int degree_cap = kDefaultDegreeCap) {
    for (RuleKind k : kRulePriority) {
        if (!rules.contains(k)) continue;
        for (VertexId v : st.graph.vertices())
            if (detail::try_apply_kind(st, k, v, degree_cap, nullptr))
                return k;
    }
    return std::nullopt;
}

/// Bumps low by one when the graph is non-empty, low < 4, and the
/// enabled rules form a completeness cover for the current level:
/// {islet, twig} at low 1, plus series at low 2, plus triangle, buddy
/// and cube at low 3. A set containing both the simplicial and the
/// almost-simplicial rule covers the islet/twig/series gates it
/// subsumes; either rule alone grants nothing. Returns whether low rose.
inline bool escalate_low(ReductionState& st, RuleSet rules) {
    if (st.graph.empty() || st.low >= 4) return false;
    RuleSet eff = rules;
    if (rules.contains(RuleKind::Simplicial) &&
        rules.contains(RuleKind::AlmostSimplicial))
        eff = eff.united(RuleSet::pr2());
    RuleSet need;
    switch (st.low) {
        case 1: need = RuleSet::pr1(); break;
        case 2: need = RuleSet::pr2(); break;
        default: need = RuleSet::pr3(); break;
    }
    if (!eff.contains_all(need)) return false;
    ++st.low;
    ++st.escalations;
    return true;
}

namespace detail {

/// Incremental fixpoint engine. Per-kind candidate sets stay supersets
/// of the truly applicable sites: after each application every vertex
/// within distance 2 of the modified region is re-enqueued (buddy and
/// cube applicability reach that far), and any change of low re-seeds
/// the low-gated kinds. A full re-seed precedes every escalation.
class ReductionEngine {
public:
    ReductionEngine(const UGraph& g, RuleSet rules, int low0, int degree_cap)
        : rules_(rules), cap_(degree_cap) {
        st_ = make_reduction_state(g, low0);
    }

    ReductionState run() {
        seed_all();
        for (;;) {
            while (apply_step()) {
            }
            seed_all();  // full rescan before concluding we are stuck
            if (apply_step()) continue;
            if (escalate_low(st_, rules_)) {
                seed_all();
                continue;
            }
            break;
        }
        return std::move(st_);
    }

private:
    static std::size_t idx(RuleKind k) { return static_cast<std::size_t>(k); }

    void seed_all() {
        for (RuleKind k : kRulePriority) {
            if (!rules_.contains(k)) continue;
            auto& c = cand_[idx(k)];
            c.clear();
            for (VertexId v : st_.graph.vertices()) c.insert(v);
        }
    }

    void seed_low_gated() {
        for (RuleKind k : {RuleKind::Series, RuleKind::Triangle, RuleKind::Buddy,
                           RuleKind::AlmostSimplicial}) {
            if (!rules_.contains(k)) continue;
            auto& c = cand_[idx(k)];
            for (VertexId v : st_.graph.vertices()) c.insert(v);
        }
    }

    void enqueue_ball2(const TouchedLog& touched) {
        std::unordered_set<VertexId> ball;
        for (VertexId t : touched) {
            if (!st_.graph.has_vertex(t)) continue;
            ball.insert(t);
            for (VertexId u : st_.graph.neighbors(t)) {
                ball.insert(u);
                for (VertexId w : st_.graph.neighbors(u)) ball.insert(w);
            }
        }
        for (RuleKind k : kRulePriority) {
            if (!rules_.contains(k)) continue;
            auto& c = cand_[idx(k)];
            for (VertexId v : ball) c.insert(v);
        }
    }

    bool apply_step() {
        for (RuleKind k : kRulePriority) {
            if (!rules_.contains(k)) continue;
            auto& c = cand_[idx(k)];
            auto it = c.begin();
            while (it != c.end()) {
                VertexId v = *it;
                if (!st_.graph.has_vertex(v)) {
                    it = c.erase(it);
                    continue;
                }
                TouchedLog touched;
                int low_before = st_.low;
                if (try_apply_kind(st_, k, v, cap_, &touched)) {
                    c.erase(v);
                    enqueue_ball2(touched);
                    if (st_.low != low_before) seed_low_gated();
                    return true;
                }
                it = c.erase(it);
            }
        }
        return false;
    }

    ReductionState st_;
    RuleSet rules_;
    int cap_;
    std::array<std::set<VertexId>, kRuleKindCount> cand_;
};

}  // namespace detail

/// Applies the enabled rules to exhaustion, interleaving lower-bound
/// escalation whenever no rule fires, and stops when neither is
/// possible. Deterministic: matches a repeated apply_one / escalate_low
/// loop exactly.
inline ReductionState reduce_to_fixpoint(const UGraph& g, RuleSet rules,
                                         int low0 = 1,
                                         int degree_cap = kDefaultDegreeCap) {
    return detail::ReductionEngine(g, rules, low0, degree_cap).run();
}

}  // namespace tripre
