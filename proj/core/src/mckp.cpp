/*
 * Copyright 2026 The lqdec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lqdec/mckp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lqdec/error.hpp"

namespace lqdec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Item {
  double cost;
  std::int64_t weight;
  std::size_t index;
};

struct Segment {
  double slope;
  std::size_t cls;
  std::int64_t dw;
  double dc;
  std::size_t to;  // hull position reached after taking this segment
};

// Integer weights on a common denominator plus the budget in the same units.
struct Scaled {
  std::vector<std::vector<std::int64_t>> weight;
  std::int64_t capacity = 0;
  std::int64_t denom = 1;
};

Scaled scale_weights(const MckpInstance& inst, double budget_bits) {
  Scaled s;
  for (const auto& row : inst.weight) {
    for (const auto& w : row) s.denom = lcm_checked(s.denom, w.den());
  }
  const long double limit = static_cast<long double>(std::numeric_limits<std::int64_t>::max()) / 4;
  long double max_total = 0;
  s.weight.resize(inst.weight.size());
  for (std::size_t i = 0; i < inst.weight.size(); ++i) {
    long double row_max = 0;
    for (const auto& w : inst.weight[i]) {
      const long double v = static_cast<long double>(w.num()) * (s.denom / w.den());
      if (v > limit) throw NumericalError("mckp: storage weights overflow 64-bit integers");
      s.weight[i].push_back(static_cast<std::int64_t>(v));
      row_max = std::max(row_max, v);
    }
    max_total += row_max;
  }
  if (max_total > limit) throw NumericalError("mckp: total storage overflows 64-bit integers");
  const long double cap = std::floor(static_cast<long double>(budget_bits) * s.denom);
  s.capacity = cap > limit ? static_cast<std::int64_t>(limit) : static_cast<std::int64_t>(cap);
  return s;
}

void check_budget(double budget_bits) {
  if (!(budget_bits > 0.0) || !std::isfinite(budget_bits)) {
    throw ArgumentError("budget must be a positive finite number of bits");
  }
}

[[noreturn]] void throw_infeasible(const MckpInstance& inst, double budget_bits) {
  const double min_bits = min_total_weight(inst).to_double();
  throw InfeasibleError("budget of " + std::to_string(budget_bits) +
                            " bits is below the minimal achievable storage of " + std::to_string(min_bits) + " bits",
                        min_bits);
}

AllocSolution finish(const MckpInstance& inst, std::vector<std::size_t> assignment, double budget_bits) {
  AllocSolution sol;
  sol.assignment = std::move(assignment);
  sol.budget_bits = budget_bits;
  for (std::size_t i = 0; i < sol.assignment.size(); ++i) {
    sol.total_error += inst.cost[i][sol.assignment[i]];
    sol.total_storage_bits += inst.weight[i][sol.assignment[i]];
  }
  return sol;
}

class BranchAndBound {
 public:
  BranchAndBound(const MckpInstance& inst, const Scaled& sc, const MckpOptions& opts)
      : inst_(inst), sc_(sc), opts_(opts), n_(inst.num_classes()) {
    items_.resize(n_);
    hull_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) build_class(i);
    std::sort(segments_.begin(), segments_.end(), [](const Segment& a, const Segment& b) {
      if (a.slope != b.slope) return a.slope < b.slope;
      if (a.cls != b.cls) return a.cls < b.cls;
      return a.to < b.to;
    });
    suffix_w_.assign(n_ + 1, 0);
    suffix_c_.assign(n_ + 1, 0.0);
    for (std::size_t i = n_; i-- > 0;) {
      suffix_w_[i] = suffix_w_[i + 1] + hull_[i].front().weight;
      suffix_c_[i] = suffix_c_[i + 1] + hull_[i].front().cost;
    }
    double scale = 0.0;
    for (const auto& row : inst_.cost) scale += *std::max_element(row.begin(), row.end());
    tol_ = 1e-12 * std::max(1.0, scale);

    // Lagrangian suffix bounds sum_{i>=k} min_j (c_ij + lambda w_ij); any
    // lambda >= 0 gives a valid bound, the LP multiplier gives the tightest.
    lambda_ = multiplier();
    lagrange_.assign(n_ + 1, 0.0);
    for (std::size_t i = n_; i-- > 0;) {
      double m = kInf;
      for (const auto& it : items_[i]) m = std::min(m, it.cost + lambda_ * static_cast<double>(it.weight));
      lagrange_[i] = lagrange_[i + 1] + m;
    }
    // Try the items with the best reduced cost first.
    for (auto& row : items_) {
      std::stable_sort(row.begin(), row.end(), [&](const Item& a, const Item& b) {
        return a.cost + lambda_ * static_cast<double>(a.weight) < b.cost + lambda_ * static_cast<double>(b.weight);
      });
    }
  }

  /// Items that can appear in an assignment cheaper than `incumbent` (up to
  /// the pruning tolerance), judged by the Lagrangian bound with the class
  /// forced to that item. keep[i][c] refers to config c of class i.
  std::vector<std::vector<bool>> reduce(double incumbent) const {
    const double capacity_term = lambda_ * static_cast<double>(sc_.capacity);
    std::vector<std::vector<bool>> keep(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      keep[i].assign(inst_.cost[i].size(), false);
      const double others = lagrange_[0] - (lagrange_[i] - lagrange_[i + 1]) - capacity_term;
      for (const auto& it : items_[i]) {
        const double bound = others + it.cost + lambda_ * static_cast<double>(it.weight);
        if (bound < incumbent + tol_) keep[i][it.index] = true;
      }
    }
    return keep;
  }

  std::int64_t min_weight() const { return suffix_w_[0]; }

  /// Multiplier of the budget constraint in the LP optimum: minus the slope
  /// of the segment the LP takes fractionally (0 when the budget is slack).
  double multiplier() const {
    std::int64_t room = sc_.capacity - suffix_w_[0];
    for (const auto& seg : segments_) {
      if (seg.dw > room) return -seg.slope;
      room -= seg.dw;
    }
    return 0.0;
  }

  /// Greedy LP rounding: walk hull segments by efficiency while they fit.
  std::vector<std::size_t> greedy() const {
    std::vector<std::size_t> pos(n_, 0);
    std::int64_t room = sc_.capacity - suffix_w_[0];
    for (const auto& s : segments_) {
      if (s.to != pos[s.cls] + 1) continue;  // earlier segment of this class was skipped
      if (s.dw <= room) {
        room -= s.dw;
        pos[s.cls] = s.to;
      }
    }
    std::vector<std::size_t> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = hull_[i][pos[i]].index;
    return out;
  }

  bool run(std::vector<std::size_t>& best, double& best_cost) {
    best_ = best;
    best_cost_ = best_cost;
    current_.assign(n_, 0);
    search(0, 0, 0.0);
    best = best_;
    best_cost = best_cost_;
    return !aborted_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void build_class(std::size_t i) {
    std::vector<Item> all;
    for (std::size_t c = 0; c < inst_.cost[i].size(); ++c) all.push_back({inst_.cost[i][c], sc_.weight[i][c], c});
    std::stable_sort(all.begin(), all.end(), [](const Item& a, const Item& b) {
      if (a.weight != b.weight) return a.weight < b.weight;
      return a.cost < b.cost;
    });
    // Non-dominated frontier: strictly decreasing cost as weight grows.
    std::vector<Item> frontier;
    for (const auto& it : all) {
      if (frontier.empty() || it.cost < frontier.back().cost) frontier.push_back(it);
    }
    std::vector<Item> branch = opts_.prune_dominated ? frontier : all;
    std::stable_sort(branch.begin(), branch.end(), [](const Item& a, const Item& b) { return a.cost < b.cost; });
    items_[i] = std::move(branch);

    // Lower convex hull of the frontier.
    std::vector<Item>& h = hull_[i];
    for (const auto& p : frontier) {
      while (h.size() >= 2) {
        const Item& a = h[h.size() - 2];
        const Item& b = h.back();
        // pop b unless slope(a,b) < slope(b,p)
        const long double lhs = static_cast<long double>(b.cost - a.cost) * static_cast<long double>(p.weight - b.weight);
        const long double rhs = static_cast<long double>(p.cost - b.cost) * static_cast<long double>(b.weight - a.weight);
        if (lhs < rhs) break;
        h.pop_back();
      }
      h.push_back(p);
    }
    for (std::size_t j = 1; j < h.size(); ++j) {
      const std::int64_t dw = h[j].weight - h[j - 1].weight;
      const double dc = h[j].cost - h[j - 1].cost;
      segments_.push_back({dc / static_cast<double>(dw), i, dw, dc, j});
    }
  }

  // LP relaxation over classes [k, n) with `room` weight units available.
  double lp_bound(std::size_t k, std::int64_t room) const {
    if (suffix_w_[k] > room) return kInf;
    room -= suffix_w_[k];
    double value = suffix_c_[k];
    for (const auto& s : segments_) {
      if (s.cls < k) continue;
      if (s.dw <= room) {
        room -= s.dw;
        value += s.dc;
      } else {
        value += s.dc * (static_cast<double>(room) / static_cast<double>(s.dw));
        break;
      }
    }
    return value;
  }

  void search(std::size_t k, std::int64_t used, double cost) {
    if (aborted_) return;
    if (k == n_) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = current_;
      }
      return;
    }
    if (++nodes_ > opts_.node_limit) {
      aborted_ = true;
      return;
    }
    const std::int64_t room = sc_.capacity - used;
    if (cost + lagrange_[k] - lambda_ * static_cast<double>(room) >= best_cost_ + tol_) return;
    if (cost + lp_bound(k, room) >= best_cost_ + tol_) return;
    for (const auto& it : items_[k]) {
      if (used + it.weight + suffix_w_[k + 1] > sc_.capacity) continue;
      if (cost + it.cost + suffix_c_min(k + 1) >= best_cost_ + tol_) continue;
      current_[k] = it.index;
      search(k + 1, used + it.weight, cost + it.cost);
      if (aborted_) return;
    }
  }

  // Cheapest conceivable completion ignoring the budget (a weak but O(1) bound).
  double suffix_c_min(std::size_t k) const {
    if (min_cost_suffix_.empty()) {
      min_cost_suffix_.assign(n_ + 1, 0.0);
      for (std::size_t i = n_; i-- > 0;) {
        double m = kInf;
        for (const auto& it : items_[i]) m = std::min(m, it.cost);
        min_cost_suffix_[i] = min_cost_suffix_[i + 1] + m;
      }
    }
    return min_cost_suffix_[k];
  }

  const MckpInstance& inst_;
  const Scaled& sc_;
  MckpOptions opts_;
  std::size_t n_;
  std::vector<std::vector<Item>> items_;
  std::vector<std::vector<Item>> hull_;
  std::vector<Segment> segments_;
  std::vector<std::int64_t> suffix_w_;
  std::vector<double> suffix_c_;
  mutable std::vector<double> min_cost_suffix_;
  double tol_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> lagrange_;

  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInf;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

double assignment_cost(const MckpInstance& inst, const std::vector<std::size_t>& a) {
  double c = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) c += inst.cost[i][a[i]];
  return c;
}

}  // namespace

void MckpInstance::validate() const {
  if (cost.empty()) throw ArgumentError("mckp: no classes");
  if (weight.size() != cost.size()) throw ArgumentError("mckp: cost and weight tables disagree");
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (cost[i].empty() || cost[i].size() != weight[i].size()) {
      throw ArgumentError("mckp: class " + std::to_string(i) + " is empty or inconsistent");
    }
    for (std::size_t c = 0; c < cost[i].size(); ++c) {
      if (!std::isfinite(cost[i][c])) throw ArgumentError("mckp: non-finite cost");
      if (weight[i][c] < Rational(0)) throw ArgumentError("mckp: negative weight");
    }
  }
}

MckpInstance to_instance(const SweepTable& table) {
  table.validate();
  if (!table.is_complete()) throw ArgumentError("mckp: sweep table has incomplete rows");
  return {table.errors, table.storage};
}

Rational min_total_weight(const MckpInstance& inst) {
  Rational total;
  for (const auto& row : inst.weight) total += *std::min_element(row.begin(), row.end());
  return total;
}

AllocSolution solve_mckp(const MckpInstance& inst, double budget_bits, const MckpOptions& opts) {
  inst.validate();
  check_budget(budget_bits);
  const Scaled sc = scale_weights(inst, budget_bits);
  BranchAndBound bb(inst, sc, opts);
  if (bb.min_weight() > sc.capacity) throw_infeasible(inst, budget_bits);

  std::vector<std::size_t> best = bb.greedy();
  double best_cost = assignment_cost(inst, best);

  // Search only the items that survive reduced-cost fixing.
  auto keep = bb.reduce(best_cost);
  MckpInstance core;
  std::vector<std::vector<std::size_t>> original(inst.num_classes());
  for (std::size_t i = 0; i < inst.num_classes(); ++i) {
    keep[i][best[i]] = true;
    core.cost.emplace_back();
    core.weight.emplace_back();
    for (std::size_t c = 0; c < inst.cost[i].size(); ++c) {
      if (!keep[i][c]) continue;
      if (c == best[i]) best[i] = original[i].size();
      original[i].push_back(c);
      core.cost[i].push_back(inst.cost[i][c]);
      core.weight[i].push_back(inst.weight[i][c]);
    }
  }
  const Scaled core_sc = scale_weights(core, budget_bits);
  BranchAndBound core_bb(core, core_sc, opts);
  const bool closed = core_bb.run(best, best_cost);
  for (std::size_t i = 0; i < best.size(); ++i) best[i] = original[i][best[i]];

  AllocSolution sol = finish(inst, std::move(best), budget_bits);
  sol.optimal = closed;
  sol.nodes = core_bb.nodes();
  return sol;
}

AllocSolution solve_mckp(const SweepTable& table, double budget_bits, const MckpOptions& opts) {
  return solve_mckp(to_instance(table), budget_bits, opts);
}

AllocSolution brute_force_mckp(const MckpInstance& inst, double budget_bits) {
  inst.validate();
  check_budget(budget_bits);
  double count = 1.0;
  for (const auto& row : inst.cost) count *= static_cast<double>(row.size());
  if (count > 1e7) throw ArgumentError("brute_force_mckp: more than 10^7 assignments");
  const Scaled sc = scale_weights(inst, budget_bits);

  const std::size_t n = inst.num_classes();
  std::vector<std::size_t> cur(n, 0);
  std::vector<std::size_t> best;
  double best_cost = kInf;
  while (true) {
    std::int64_t w = 0;
    for (std::size_t i = 0; i < n; ++i) w += sc.weight[i][cur[i]];
    if (w <= sc.capacity) {
      const double c = assignment_cost(inst, cur);
      if (c < best_cost) {
        best_cost = c;
        best = cur;
      }
    }
    std::size_t i = 0;
    while (i < n && ++cur[i] == inst.cost[i].size()) cur[i++] = 0;
    if (i == n) break;
  }
  if (best.empty()) throw_infeasible(inst, budget_bits);
  AllocSolution sol = finish(inst, std::move(best), budget_bits);
  sol.optimal = true;
  return sol;
}

AllocSolution brute_force_mckp(const SweepTable& table, double budget_bits) {
  return brute_force_mckp(to_instance(table), budget_bits);
}

}  // namespace lqdec
