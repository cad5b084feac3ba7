#include "optree/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace optree {

CellIndex::CellIndex(std::uint64_t value) {
    if (value != 0) limbs_.push_back(value);
}

void CellIndex::normalize() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

CellIndex CellIndex::child(unsigned bit) const {
    CellIndex out;
    out.limbs_.reserve(limbs_.size() + 1);
    std::uint64_t carry = bit & 1u;
    for (std::uint64_t limb : limbs_) {
        out.limbs_.push_back((limb << 1) | carry);
        carry = limb >> 63;
    }
    if (carry != 0) out.limbs_.push_back(carry);
    out.normalize();
    return out;
}

std::optional<std::uint64_t> CellIndex::to_u64() const {
    if (limbs_.empty()) return 0;
    if (limbs_.size() == 1) return limbs_[0];
    return std::nullopt;
}

std::string CellIndex::to_string() const {
    if (auto v = to_u64()) return std::to_string(*v);
    std::string out = "0x";
    char buf[17];
    std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(limbs_.back()));
    out += buf;
    for (auto it = std::next(limbs_.rbegin()); it != limbs_.rend(); ++it) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(*it));
        out += buf;
    }
    return out;
}

std::strong_ordering CellIndex::operator<=>(const CellIndex& other) const {
    if (limbs_.size() != other.limbs_.size()) return limbs_.size() <=> other.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
    }
    return std::strong_ordering::equal;
}

bool CellIndex::operator==(const CellIndex& other) const { return limbs_ == other.limbs_; }

Point Cell::center() const {
    Point c(lower.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
    return c;
}

double Cell::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
    return v;
}

double Cell::max_side() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) s = std::max(s, upper[i] - lower[i]);
    return s;
}

Cell root_cell(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("root_cell: dimension must be at least 1");
    return Cell{0, CellIndex{}, Point(dim, 0.0), Point(dim, 1.0)};
}

std::pair<Cell, Cell> split_cell(const Cell& parent) {
    std::size_t axis = 0;
    double longest = -1.0;
    for (std::size_t i = 0; i < parent.dim(); ++i) {
        const double side = parent.upper[i] - parent.lower[i];
        if (side > longest) {
            longest = side;
            axis = i;
        }
    }
    if (longest / 2.0 < kMinSide) {
        throw PartitionExhausted("split_cell: cell (" + std::to_string(parent.level) + ", " +
                                 parent.index.to_string() + ") is too small to split");
    }
    const double mid = 0.5 * (parent.lower[axis] + parent.upper[axis]);
    Cell left{parent.level + 1, parent.index.child(0), parent.lower, parent.upper};
    Cell right{parent.level + 1, parent.index.child(1), parent.lower, parent.upper};
    left.upper[axis] = mid;
    right.lower[axis] = mid;
    return {std::move(left), std::move(right)};
}

Tree::Tree(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("Tree: dimension must be at least 1");
}

Tree::NodeId Tree::set_root(double g, bool evaluated) {
    if (!nodes_.empty()) throw std::logic_error("Tree::set_root: root already set");
    Node root;
    root.cell = root_cell(dim_);
    root.center = root.cell.center();
    root.g = g;
    root.evaluated = evaluated;
    nodes_.push_back(std::move(root));
    leaves_by_level_.assign(1, {0});
    depth_ = 0;
    return 0;
}

std::pair<Tree::NodeId, Tree::NodeId> Tree::expand(NodeId id, std::pair<Cell, Cell> cells,
                                                   std::pair<double, double> g,
                                                   std::pair<bool, bool> evaluated) {
    Node& parent = nodes_.at(id);
    if (!parent.is_leaf()) throw std::logic_error("Tree::expand: node is already expanded");
    const int h = parent.cell.level;
    if (cells.first.level != h + 1 || cells.second.level != h + 1) {
        throw std::logic_error("Tree::expand: children must sit one level below the parent");
    }

    auto& level_leaves = leaves_by_level_[static_cast<std::size_t>(h)];
    level_leaves.erase(std::find(level_leaves.begin(), level_leaves.end(), id));

    const NodeId left = nodes_.size();
    const NodeId right = left + 1;
    parent.children = std::make_pair(left, right);

    auto make = [&](Cell&& cell, double value, bool was_evaluated) {
        Node child;
        child.center = cell.center();
        child.cell = std::move(cell);
        child.g = value;
        child.evaluated = was_evaluated;
        child.parent = id;
        nodes_.push_back(std::move(child));
    };
    make(std::move(cells.first), g.first, evaluated.first);
    make(std::move(cells.second), g.second, evaluated.second);

    if (static_cast<std::size_t>(h + 1) >= leaves_by_level_.size()) {
        leaves_by_level_.resize(static_cast<std::size_t>(h + 2));
    }
    leaves_by_level_[static_cast<std::size_t>(h + 1)].push_back(left);
    leaves_by_level_[static_cast<std::size_t>(h + 1)].push_back(right);
    depth_ = std::max(depth_, h + 1);
    ++expansions_;
    return {left, right};
}

std::optional<Tree::NodeId> Tree::leaf_argmax_at_level(int h) const {
    if (h < 0 || static_cast<std::size_t>(h) >= leaves_by_level_.size()) return std::nullopt;
    std::optional<NodeId> best;
    for (NodeId id : leaves_by_level_[static_cast<std::size_t>(h)]) {
        if (!best) {
            best = id;
            continue;
        }
        const Node& cand = nodes_[id];
        const Node& cur = nodes_[*best];
        if (cand.g > cur.g || (cand.g == cur.g && cand.cell.index < cur.cell.index)) best = id;
    }
    return best;
}

const std::vector<Tree::NodeId>& Tree::leaves_at_level(int h) const {
    static const std::vector<NodeId> kEmpty;
    if (h < 0 || static_cast<std::size_t>(h) >= leaves_by_level_.size()) return kEmpty;
    return leaves_by_level_[static_cast<std::size_t>(h)];
}

std::size_t Tree::leaf_count() const {
    std::size_t n = 0;
    for (const auto& level : leaves_by_level_) n += level.size();
    return n;
}

std::string Tree::dump() const {
    std::ostringstream os;
    os.precision(17);
    for (const Node& n : nodes_) {
        os << n.cell.level << ' ' << n.cell.index.to_string() << ' ' << (n.evaluated ? 1 : 0)
           << ' ' << n.g;
        for (std::size_t i = 0; i < dim_; ++i) os << ' ' << n.cell.lower[i] << ' ' << n.cell.upper[i];
        os << '\n';
    }
    return os.str();
}

std::optional<Tree::NodeId> leaf_argmax_at_level(const Tree& tree, int h) {
    return tree.leaf_argmax_at_level(h);
}

}  // namespace optree
