#pragma once

#include <cstdint>
#include <vector>

namespace ddr::detail {

/// Successive-shortest-path min-cost flow with Dijkstra on reduced costs.
/// Integral capacities, real nonnegative arc costs.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes);

  /// Returns the index of the forward arc.
  int add_arc(int from, int to, std::int64_t capacity, double cost);

  /// Pushes up to `limit` units from source to sink; returns the amount sent.
  std::int64_t solve(int source, int sink, std::int64_t limit);

  std::int64_t flow_on(int arc) const;
  double total_cost() const { return cost_; }

 private:
  struct Arc {
    int to;
    int rev;
    std::int64_t cap;
    double cost;
  };
  std::vector<std::vector<Arc>> graph_;
  std::vector<std::pair<int, int>> arc_index_;
  std::vector<std::int64_t> original_cap_;
  double cost_ = 0.0;
};

}  // namespace ddr::detail
