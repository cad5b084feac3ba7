#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optree/common.hpp"

namespace optree {

/// Position j of a cell within its level under binary numbering: the
/// children of (h, j) are (h+1, 2j) and (h+1, 2j+1). Stored as a bit string
/// so deep trees do not overflow a machine word.
class CellIndex {
public:
    CellIndex() = default;
    explicit CellIndex(std::uint64_t value);

    CellIndex child(unsigned bit) const;

    /// Value as an integer when it fits in 64 bits.
    std::optional<std::uint64_t> to_u64() const;

    /// Decimal when it fits in 64 bits, hexadecimal ("0x...") otherwise.
    std::string to_string() const;

    std::strong_ordering operator<=>(const CellIndex& other) const;
    bool operator==(const CellIndex& other) const;

private:
    void normalize();

    // Little-endian 64-bit limbs, no trailing zero limbs.
    std::vector<std::uint64_t> limbs_;
};

/// Axis-aligned box X_{h,j} inside [0,1]^D.
struct Cell {
    int level = 0;
    CellIndex index;
    Point lower;
    Point upper;

    std::size_t dim() const noexcept { return lower.size(); }
    Point center() const;
    double volume() const;
    double max_side() const;
};

/// Raised when a split would produce sides shorter than kMinSide.
class PartitionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kMinSide = 1e-15;

/// The root cell (0, 0) = [0,1]^dim. Throws std::invalid_argument for dim 0.
Cell root_cell(std::size_t dim);

/// Halves `parent` along its longest side (lowest axis on ties). The left
/// half gets index 2j.
std::pair<Cell, Cell> split_cell(const Cell& parent);

/// Partition tree with a value g and an evaluated flag stored per node.
/// Nodes are never removed; ids are stable insertion indices.
class Tree {
public:
    using NodeId = std::size_t;

    struct Node {
        Cell cell;
        Point center;
        double g = 0.0;
        bool evaluated = false;
        std::optional<NodeId> parent;
        std::optional<std::pair<NodeId, NodeId>> children;

        bool is_leaf() const noexcept { return !children.has_value(); }
    };

    explicit Tree(std::size_t dim);

    /// Root node with payload; must be called exactly once, first.
    NodeId set_root(double g, bool evaluated);

    /// Adds the two children of leaf `id`, with payloads, turning it into an
    /// internal node. The children cells must come from split_cell(node(id).cell).
    std::pair<NodeId, NodeId> expand(NodeId id, std::pair<Cell, Cell> cells,
                                     std::pair<double, double> g,
                                     std::pair<bool, bool> evaluated);

    /// Leaf at level h with the largest g; ties go to the smallest index.
    std::optional<NodeId> leaf_argmax_at_level(int h) const;

    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return nodes_.empty(); }

    /// Maximum level present.
    int depth() const noexcept { return depth_; }

    /// Number of expanded (internal) nodes.
    std::size_t expansion_count() const noexcept { return expansions_; }

    const std::vector<NodeId>& leaves_at_level(int h) const;
    std::size_t leaf_count() const;

    /// One line per node in id order:
    /// `level index evaluated g lower_0 upper_0 ... lower_{D-1} upper_{D-1}`.
    std::string dump() const;

private:
    std::size_t dim_;
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> leaves_by_level_;
    int depth_ = 0;
    std::size_t expansions_ = 0;
};

std::optional<Tree::NodeId> leaf_argmax_at_level(const Tree& tree, int h);

}  // namespace optree
