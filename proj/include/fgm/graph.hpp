#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fgm {

struct NonChordalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadIndexError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Unordered node pair with i < j, 0-based.
struct Edge {
    int a = 0;
    int b = 0;
    Edge() = default;
    Edge(int i, int j) : a(i < j ? i : j), b(i < j ? j : i) {}
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Perfectly ordered clique/separator sequence (running intersection
/// property). separators[i] pairs with cliques[i+1]; cliques[0] has none.
struct JunctionSequence {
    std::vector<std::vector<int>> cliques;     // sorted node lists
    std::vector<std::vector<int>> separators;  // size = cliques.size() - 1
};

struct EdgeMove {
    enum class Kind { Add, Delete };
    enum class CaseTag { None, CrossComponent, WithinComponent };
    Edge pair;
    Kind kind = Kind::Add;
    CaseTag case_tag = CaseTag::None;
};

/// Labeled undirected chordal graph. Immutable after construction; the
/// junction sequence is computed once and cached.
class DecomposableGraph {
public:
    DecomposableGraph() = default;

    /// Builds the graph and verifies chordality. Throws NonChordalError or
    /// BadIndexError.
    DecomposableGraph(int p, const std::vector<Edge>& edges);

    int node_count() const { return p_; }
    int edge_count() const { return n_edges_; }
    bool has_edge(int i, int j) const;
    std::vector<Edge> edges() const;
    const JunctionSequence& junction() const { return junction_; }

    /// Applies a single-edge toggle; throws NonChordalError if the result is
    /// not chordal.
    DecomposableGraph with_toggled(const Edge& e) const;

    /// All single-edge adds/deletes that keep the graph chordal. Checked by
    /// applying the toggle and re-running the MCS chordality test.
    std::vector<EdgeMove> legal_moves() const;

    /// Partition of V by reachability, each block sorted, blocks ordered by
    /// smallest member.
    std::vector<std::vector<int>> connected_components() const;

    friend bool operator==(const DecomposableGraph& x, const DecomposableGraph& y) {
        return x.p_ == y.p_ && x.adj_ == y.adj_;
    }

    /// Canonical bitmask of the upper-triangular adjacency, for hashing and
    /// exact-posterior bookkeeping (requires p*(p-1)/2 <= 64).
    std::uint64_t edge_mask() const;

private:
    int p_ = 0;
    int n_edges_ = 0;
    std::vector<char> adj_;  // p_ x p_ row-major
    JunctionSequence junction_;

    friend bool is_decomposable(int p, const std::vector<Edge>& edges);
    friend class GraphEnumerator;
};

/// Chordality test via maximum cardinality search. Throws BadIndexError on
/// out-of-range nodes.
bool is_decomposable(int p, const std::vector<Edge>& edges);

/// All chordal labeled graphs on p nodes. Throws TooLargeError beyond
/// p_enum_max.
std::vector<DecomposableGraph> enumerate_decomposable(int p, int p_enum_max = 6);

std::string to_dot(const DecomposableGraph& g);

}  // namespace fgm
