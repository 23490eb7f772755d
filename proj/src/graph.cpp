#include "fgm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fgm {

namespace {

// Maximum cardinality search. Returns the visit order, or an empty vector if
// the graph fails the Tarjan-Yannakakis chordality check. Ties broken by
// lowest node index so the order is deterministic.
std::vector<int> mcs_order(int p, const std::vector<char>& adj, bool* chordal) {
    std::vector<int> order;
    order.reserve(p);
    std::vector<int> weight(p, 0);
    std::vector<int> pos(p, -1);
    std::vector<char> numbered(p, 0);
    *chordal = true;

    for (int step = 0; step < p; ++step) {
        int best = -1;
        for (int v = 0; v < p; ++v) {
            if (!numbered[v] && (best < 0 || weight[v] > weight[best])) best = v;
        }
        numbered[best] = 1;
        pos[best] = step;
        order.push_back(best);

        // earlier neighbors of `best` must form a clique with their
        // latest-numbered member adjacent to all others
        int u = -1;
        for (int w : order) {
            if (w != best && adj[best * p + w] && (u < 0 || pos[w] > pos[u])) u = w;
        }
        if (u >= 0) {
            for (int w : order) {
                if (w == best || w == u || !adj[best * p + w]) continue;
                if (!adj[u * p + w]) {
                    *chordal = false;
                    return {};
                }
            }
        }
        for (int v = 0; v < p; ++v) {
            if (!numbered[v] && adj[best * p + v]) ++weight[v];
        }
    }
    return order;
}

JunctionSequence build_junction(int p, const std::vector<char>& adj,
                                const std::vector<int>& order) {
    std::vector<int> pos(p);
    for (int i = 0; i < p; ++i) pos[order[i]] = i;

    // candidate cliques: each vertex with its earlier neighbors
    std::vector<std::vector<int>> cand(p);
    for (int i = 0; i < p; ++i) {
        int v = order[i];
        auto& c = cand[i];
        c.push_back(v);
        for (int j = 0; j < i; ++j) {
            int w = order[j];
            if (adj[v * p + w]) c.push_back(w);
        }
        std::sort(c.begin(), c.end());
    }

    // keep the maximal ones, in discovery order (gives a perfect ordering)
    JunctionSequence js;
    for (int i = 0; i < p; ++i) {
        bool maximal = true;
        for (int j = 0; j < p && maximal; ++j) {
            if (j == i) continue;
            if (cand[j].size() < cand[i].size()) continue;
            if (cand[j].size() == cand[i].size() && j > i) continue;
            maximal = !std::includes(cand[j].begin(), cand[j].end(),
                                     cand[i].begin(), cand[i].end());
        }
        if (maximal) js.cliques.push_back(cand[i]);
    }

    std::vector<char> seen(p, 0);
    for (std::size_t t = 0; t < js.cliques.size(); ++t) {
        if (t > 0) {
            std::vector<int> sep;
            for (int v : js.cliques[t])
                if (seen[v]) sep.push_back(v);
            js.separators.push_back(std::move(sep));
        }
        for (int v : js.cliques[t]) seen[v] = 1;
    }
    return js;
}

void check_edges(int p, const std::vector<Edge>& edges) {
    if (p < 1) throw BadIndexError("node count must be >= 1");
    for (const auto& e : edges) {
        if (e.a < 0 || e.b >= p) throw BadIndexError("edge index out of range");
        if (e.a == e.b) throw BadIndexError("self-loop");
    }
}

}  // namespace

DecomposableGraph::DecomposableGraph(int p, const std::vector<Edge>& edges) : p_(p) {
    check_edges(p, edges);
    adj_.assign(static_cast<std::size_t>(p) * p, 0);
    for (const auto& e : edges) {
        if (!adj_[e.a * p + e.b]) ++n_edges_;
        adj_[e.a * p + e.b] = adj_[e.b * p + e.a] = 1;
    }
    bool chordal = false;
    auto order = mcs_order(p_, adj_, &chordal);
    if (!chordal) throw NonChordalError("graph contains a chordless cycle of length >= 4");
    junction_ = build_junction(p_, adj_, order);
}

bool DecomposableGraph::has_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= p_ || j >= p_) throw BadIndexError("node index out of range");
    return i != j && adj_[i * p_ + j] != 0;
}

std::vector<Edge> DecomposableGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(n_edges_);
    for (int i = 0; i < p_; ++i)
        for (int j = i + 1; j < p_; ++j)
            if (adj_[i * p_ + j]) out.emplace_back(i, j);
    return out;
}

DecomposableGraph DecomposableGraph::with_toggled(const Edge& e) const {
    auto es = edges();
    if (has_edge(e.a, e.b)) {
        std::erase(es, e);
    } else {
        es.push_back(e);
    }
    return DecomposableGraph(p_, es);
}

std::vector<EdgeMove> DecomposableGraph::legal_moves() const {
    std::vector<EdgeMove> moves;
    std::vector<char> work = adj_;
    std::vector<int> comp(p_, -1);
    {
        auto comps = connected_components();
        for (std::size_t c = 0; c < comps.size(); ++c)
            for (int v : comps[c]) comp[v] = static_cast<int>(c);
    }
    for (int i = 0; i < p_; ++i) {
        for (int j = i + 1; j < p_; ++j) {
            const bool present = adj_[i * p_ + j] != 0;
            work[i * p_ + j] = work[j * p_ + i] = present ? 0 : 1;
            bool chordal = false;
            mcs_order(p_, work, &chordal);
            if (chordal) {
                EdgeMove m;
                m.pair = Edge(i, j);
                m.kind = present ? EdgeMove::Kind::Delete : EdgeMove::Kind::Add;
                if (!present) {
                    m.case_tag = (comp[i] != comp[j]) ? EdgeMove::CaseTag::CrossComponent
                                                      : EdgeMove::CaseTag::WithinComponent;
                }
                moves.push_back(m);
            }
            work[i * p_ + j] = work[j * p_ + i] = present ? 1 : 0;
        }
    }
    return moves;
}

std::vector<std::vector<int>> DecomposableGraph::connected_components() const {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(p_, 0);
    for (int s = 0; s < p_; ++s) {
        if (seen[s]) continue;
        std::vector<int> comp;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w = 0; w < p_; ++w) {
                if (!seen[w] && adj_[v * p_ + w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

std::uint64_t DecomposableGraph::edge_mask() const {
    if (p_ * (p_ - 1) / 2 > 64) throw TooLargeError("edge_mask requires p(p-1)/2 <= 64");
    std::uint64_t mask = 0;
    int bit = 0;
    for (int i = 0; i < p_; ++i)
        for (int j = i + 1; j < p_; ++j, ++bit)
            if (adj_[i * p_ + j]) mask |= (std::uint64_t{1} << bit);
    return mask;
}

bool is_decomposable(int p, const std::vector<Edge>& edges) {
    check_edges(p, edges);
    std::vector<char> adj(static_cast<std::size_t>(p) * p, 0);
    for (const auto& e : edges) adj[e.a * p + e.b] = adj[e.b * p + e.a] = 1;
    bool chordal = false;
    mcs_order(p, adj, &chordal);
    return chordal;
}

std::vector<DecomposableGraph> enumerate_decomposable(int p, int p_enum_max) {
    if (p > p_enum_max) throw TooLargeError("enumeration bound exceeded");
    const int n_pairs = p * (p - 1) / 2;
    std::vector<Edge> all_pairs;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) all_pairs.emplace_back(i, j);

    std::vector<DecomposableGraph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_pairs); ++mask) {
        std::vector<Edge> edges;
        for (int b = 0; b < n_pairs; ++b)
            if (mask & (std::uint64_t{1} << b)) edges.push_back(all_pairs[b]);
        if (is_decomposable(p, edges)) out.emplace_back(p, edges);
    }
    return out;
}

std::string to_dot(const DecomposableGraph& g) {
    std::ostringstream os;
    os << "graph G {\n";
    for (int v = 0; v < g.node_count(); ++v) os << "  " << (v + 1) << ";\n";
    for (const auto& e : g.edges()) os << "  " << (e.a + 1) << " -- " << (e.b + 1) << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace fgm
