#include "etc/models/partition.hpp"

#include "etc/error.hpp"

#include <fmt/format.h>

namespace etc::models {

NodePartition::NodePartition(std::vector<NodeSpan> spans, std::size_t total_dim)
    : spans_(std::move(spans)), total_(total_dim) {
    if (total_ == 0) fail(ErrorCode::ValidationError, "partition over an empty vector");
    std::size_t next = 0;
    for (const auto& s : spans_) {
        if (s.width == 0) fail(ErrorCode::ValidationError, "node width must be >= 1");
        if (s.offset != next) {
            fail(ErrorCode::ValidationError,
                 fmt::format("node spans must be contiguous: expected offset {}, got {}", next, s.offset));
        }
        next += s.width;
    }
    if (next != total_) {
        fail(ErrorCode::ValidationError, fmt::format("node spans cover {} of {} entries", next, total_));
    }
}

NodePartition NodePartition::from_widths(const std::vector<std::size_t>& widths) {
    std::vector<NodeSpan> spans;
    std::size_t offset = 0;
    for (std::size_t w : widths) {
        spans.push_back({offset, w});
        offset += w;
    }
    return NodePartition(std::move(spans), offset);
}

NodePartition NodePartition::singletons(std::size_t n) {
    return from_widths(std::vector<std::size_t>(n, 1));
}

const NodeSpan& NodePartition::span(std::size_t node) const {
    if (node >= spans_.size()) fail(ErrorCode::DimensionMismatch, fmt::format("no node {}", node));
    return spans_[node];
}

std::vector<std::size_t> NodePartition::widths() const {
    std::vector<std::size_t> w;
    w.reserve(spans_.size());
    for (const auto& s : spans_) w.push_back(s.width);
    return w;
}

num::Vec NodePartition::slice(const num::Vec& v, std::size_t node) const {
    const auto& s = span(node);
    return v.slice(s.offset, s.width);
}

}  // namespace etc::models
