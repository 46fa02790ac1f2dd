#include "min_cost_flow.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ddr::detail {

MinCostFlow::MinCostFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

int MinCostFlow::add_arc(int from, int to, std::int64_t capacity, double cost) {
  if (cost < 0.0) throw std::invalid_argument("min cost flow: negative arc cost");
  auto& out = graph_[static_cast<std::size_t>(from)];
  auto& in = graph_[static_cast<std::size_t>(to)];
  out.push_back({to, static_cast<int>(in.size()), capacity, cost});
  in.push_back({from, static_cast<int>(out.size()) - 1, 0, -cost});
  arc_index_.emplace_back(from, static_cast<int>(out.size()) - 1);
  original_cap_.push_back(capacity);
  return static_cast<int>(arc_index_.size()) - 1;
}

std::int64_t MinCostFlow::flow_on(int arc) const {
  const auto [node, slot] = arc_index_[static_cast<std::size_t>(arc)];
  return original_cap_[static_cast<std::size_t>(arc)] -
         graph_[static_cast<std::size_t>(node)][static_cast<std::size_t>(slot)].cap;
}

std::int64_t MinCostFlow::solve(int source, int sink, std::int64_t limit) {
  const auto n = graph_.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(n, 0.0);
  std::vector<double> dist(n);
  std::vector<int> prev_node(n);
  std::vector<int> prev_arc(n);
  std::vector<char> done(n);
  std::int64_t sent = 0;

  while (sent < limit) {
    // Dense Dijkstra: graphs here are small and nearly complete.
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    dist[static_cast<std::size_t>(source)] = 0.0;
    for (;;) {
      int u = -1;
      for (std::size_t v = 0; v < n; ++v) {
        if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[static_cast<std::size_t>(u)])) {
          u = static_cast<int>(v);
        }
      }
      if (u < 0) break;
      const auto uu = static_cast<std::size_t>(u);
      done[uu] = 1;
      for (std::size_t k = 0; k < graph_[uu].size(); ++k) {
        const Arc& a = graph_[uu][k];
        if (a.cap <= 0) continue;
        const auto vv = static_cast<std::size_t>(a.to);
        // Reduced costs are nonnegative up to rounding; clamp the noise.
        const double reduced = std::max(0.0, a.cost + potential[uu] - potential[vv]);
        if (dist[uu] + reduced < dist[vv]) {
          dist[vv] = dist[uu] + reduced;
          prev_node[vv] = u;
          prev_arc[vv] = static_cast<int>(k);
        }
      }
    }
    const auto s = static_cast<std::size_t>(sink);
    if (dist[s] == inf) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] < inf) potential[v] += dist[v];
    }
    std::int64_t push = limit - sent;
    for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
      const auto vv = static_cast<std::size_t>(v);
      const Arc& a = graph_[static_cast<std::size_t>(prev_node[vv])][static_cast<std::size_t>(prev_arc[vv])];
      push = std::min(push, a.cap);
    }
    for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
      const auto vv = static_cast<std::size_t>(v);
      Arc& a = graph_[static_cast<std::size_t>(prev_node[vv])][static_cast<std::size_t>(prev_arc[vv])];
      a.cap -= push;
      graph_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += push;
      cost_ += static_cast<double>(push) * a.cost;
    }
    sent += push;
  }
  return sent;
}

}  // namespace ddr::detail
