#pragma once

#include <cstddef>
#include <vector>

namespace phlab {

/// Primal network simplex for uncapacitated min-cost flow with equality
/// supplies, after the spanning-tree scheme of LEMON's NetworkSimplex
/// (thread/succ_num tree indices, block-search pivoting, strongly feasible
/// leaving-arc rule).
///
/// Arcs can be appended after a solve and the solve resumed from the current
/// basis, which is how sparse candidate sets are grown until the duals
/// certify optimality on the full arc set.
class NetworkSimplex {
 public:
  /// `supply[u]` > 0 for sources, < 0 for sinks; must sum to zero.
  /// `art_cost` must exceed any path cost in the final network.
  NetworkSimplex(std::vector<double> supply, double art_cost, double tolerance);

  /// Appends an uncapacitated arc; returns its index.
  std::size_t add_arc(int source, int target, double cost);

  /// Pivots until no arc has reduced cost below -tolerance.
  void solve();

  /// Recomputes the potentials from the tree, dropping drift accumulated by
  /// the incremental updates.
  void refresh_potentials();

  std::size_t node_count() const { return node_num_; }
  std::size_t arc_count() const { return source_.size() - node_num_; }
  /// Flow on real arc a (0-based, in order of add_arc).
  double flow(std::size_t a) const { return flow_[node_num_ + a]; }
  int arc_source(std::size_t a) const { return source_[node_num_ + a]; }
  int arc_target(std::size_t a) const { return target_[node_num_ + a]; }
  double arc_cost(std::size_t a) const { return cost_[node_num_ + a]; }
  /// Node potentials; reduced cost of arc (u, v) is cost + pi[u] - pi[v].
  const std::vector<double>& potentials() const { return pi_; }
  /// Total flow left on artificial arcs (nonzero means infeasible).
  double artificial_flow() const;
  std::size_t pivots() const { return pivots_; }

 private:
  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  static constexpr int kLower = 1;
  static constexpr int kTree = 0;
  static constexpr int kDirUp = 1;
  static constexpr int kDirDown = -1;

  std::size_t node_num_;
  int root_;
  double tol_;

  // Arc data; indices [0, node_num_) are the artificial arcs.
  std::vector<int> source_, target_;
  std::vector<double> cost_, flow_;
  std::vector<signed char> state_;

  // Spanning tree, one entry per node plus the root.
  std::vector<int> parent_, pred_, thread_, rev_thread_, succ_num_, last_succ_;
  std::vector<signed char> pred_dir_;
  std::vector<int> dirty_revs_;
  std::vector<double> pi_;

  // Pivot state.
  std::size_t next_arc_ = 0;
  std::size_t block_size_ = 10;
  int in_arc_ = -1, join_ = -1, u_in_ = -1, v_in_ = -1, u_out_ = -1, v_out_ = -1;
  double delta_ = 0.0;
  std::size_t pivots_ = 0;
};

}  // namespace phlab
