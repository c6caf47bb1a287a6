#pragma once

#include "etc/num/linalg.hpp"

#include <cstddef>
#include <vector>

namespace etc::models {

struct NodeSpan {
    std::size_t offset = 0;
    std::size_t width = 0;

    friend bool operator==(const NodeSpan&, const NodeSpan&) = default;
};

/// Disjoint contiguous slices covering [0, total_dim), one per sensor or
/// actuator node.
class NodePartition {
public:
    NodePartition() = default;
    NodePartition(std::vector<NodeSpan> spans, std::size_t total_dim);

    static NodePartition from_widths(const std::vector<std::size_t>& widths);
    static NodePartition singletons(std::size_t n);

    std::size_t node_count() const noexcept { return spans_.size(); }
    std::size_t total_dim() const noexcept { return total_; }
    const NodeSpan& span(std::size_t node) const;
    const std::vector<NodeSpan>& spans() const noexcept { return spans_; }
    std::vector<std::size_t> widths() const;

    num::Vec slice(const num::Vec& v, std::size_t node) const;

    friend bool operator==(const NodePartition&, const NodePartition&) = default;

private:
    std::vector<NodeSpan> spans_;
    std::size_t total_ = 0;
};

}  // namespace etc::models
