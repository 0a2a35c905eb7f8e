#include "phlab/transport/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phlab/common/error.hpp"

namespace phlab {

NetworkSimplex::NetworkSimplex(std::vector<double> supply, double art_cost, double tolerance)
    : node_num_(supply.size()), root_(static_cast<int>(supply.size())), tol_(tolerance) {
  if (node_num_ == 0) throw InvalidArgument("network simplex: empty network");
  const std::size_t n = node_num_;
  parent_.assign(n + 1, -1);
  pred_.assign(n + 1, -1);
  thread_.assign(n + 1, 0);
  rev_thread_.assign(n + 1, 0);
  succ_num_.assign(n + 1, 0);
  last_succ_.assign(n + 1, 0);
  pred_dir_.assign(n + 1, 0);
  pi_.assign(n + 1, 0.0);

  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = static_cast<int>(n) + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0.0;

  source_.resize(n);
  target_.resize(n);
  cost_.resize(n);
  flow_.resize(n);
  state_.resize(n);
  for (std::size_t ui = 0; ui < n; ++ui) {
    const int u = static_cast<int>(ui);
    const int e = u;
    parent_[u] = root_;
    pred_[u] = e;
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    state_[e] = kTree;
    if (supply[u] >= 0) {
      pred_dir_[u] = kDirUp;
      pi_[u] = 0.0;
      source_[e] = u;
      target_[e] = root_;
      flow_[e] = supply[u];
      cost_[e] = 0.0;
    } else {
      pred_dir_[u] = kDirDown;
      pi_[u] = art_cost;
      source_[e] = root_;
      target_[e] = u;
      flow_[e] = -supply[u];
      cost_[e] = art_cost;
    }
  }
  next_arc_ = n;
}

std::size_t NetworkSimplex::add_arc(int source, int target, double cost) {
  const int n = static_cast<int>(node_num_);
  if (source < 0 || source >= n || target < 0 || target >= n) throw InvalidArgument("network simplex: bad arc");
  source_.push_back(source);
  target_.push_back(target);
  cost_.push_back(cost);
  flow_.push_back(0.0);
  state_.push_back(kLower);
  return source_.size() - 1 - node_num_;
}

double NetworkSimplex::artificial_flow() const {
  double f = 0.0;
  for (std::size_t e = 0; e < node_num_; ++e) f += flow_[e];
  return f;
}

bool NetworkSimplex::find_entering_arc() {
  // Block search over the real arcs only; artificial arcs never re-enter.
  const std::size_t first = node_num_, end = source_.size();
  if (end == first) return false;
  if (next_arc_ < first || next_arc_ >= end) next_arc_ = first;
  double min = -tol_;
  int best = -1;
  std::size_t cnt = block_size_;
  std::size_t e = next_arc_;
  for (std::size_t visited = 0; visited < end - first; ++visited) {
    const double c = state_[e] * (cost_[e] + pi_[source_[e]] - pi_[target_[e]]);
    if (c < min) {
      min = c;
      best = static_cast<int>(e);
    }
    if (++e == end) e = first;
    if (--cnt == 0) {
      if (best >= 0) break;
      cnt = block_size_;
    }
  }
  if (best < 0) return false;
  in_arc_ = best;
  next_arc_ = e;
  return true;
}

void NetworkSimplex::find_join_node() {
  int u = source_[in_arc_];
  int v = target_[in_arc_];
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) u = parent_[u];
    else v = parent_[v];
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving_arc() {
  // Entering arcs are always at their lower bound (uncapacitated).
  const int first = source_[in_arc_];
  const int second = target_[in_arc_];
  delta_ = std::numeric_limits<double>::infinity();
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    if (pred_dir_[u] == kDirDown) continue;  // flow increases, no limit
    const double d = flow_[pred_[u]];
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    if (pred_dir_[u] == kDirUp) continue;
    const double d = flow_[pred_[u]];
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow() {
  if (delta_ > 0.0) {
    const double val = delta_;
    flow_[in_arc_] += val;
    for (int u = source_[in_arc_]; u != join_; u = parent_[u]) flow_[pred_[u]] -= pred_dir_[u] * val;
    for (int u = target_[in_arc_]; u != join_; u = parent_[u]) flow_[pred_[u]] += pred_dir_[u] * val;
  }
  state_[in_arc_] = kTree;
  const int out = pred_[u_out_];
  state_[out] = kLower;
  flow_[out] = 0.0;
}

void NetworkSimplex::update_tree_structure() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  v_out_ = parent_[u_out_];

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;
    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread is v_in, join and v_out coincide.
    const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem nodes between u_in and u_out.
    int stem = u_in_;
    int par_stem = v_in_;
    int next_stem;
    int last = last_succ_[u_in_];
    int before, after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }
    for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) last_succ_[u] = last_succ_out;

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
      last_succ_[u] = old_rev_thread;
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u])
      last_succ_[u] = last_succ_out;
  }

  for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const double sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * cost_[in_arc_];
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

void NetworkSimplex::refresh_potentials() {
  pi_[root_] = 0.0;
  for (int u = thread_[root_]; u != root_; u = thread_[u]) {
    const int e = pred_[u];
    pi_[u] = pred_dir_[u] == kDirUp ? pi_[parent_[u]] - cost_[e] : pi_[parent_[u]] + cost_[e];
  }
}

void NetworkSimplex::solve() {
  const std::size_t search = source_.size() - node_num_;
  block_size_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(search))));
  while (find_entering_arc()) {
    find_join_node();
    if (!find_leaving_arc()) throw NumericalError("network simplex: unbounded cycle");
    change_flow();
    update_tree_structure();
    update_potential();
    ++pivots_;
  }
}

}  // namespace phlab
