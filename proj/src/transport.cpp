#include "affperm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "affperm/error.hpp"

namespace affperm {

AssignmentResult solve_assignment(const Matrix& cost) {
  if (cost.rows != cost.cols) throw Error(ErrorKind::InvalidMeasure, "assignment needs a square cost matrix");
  const std::size_t n = cost.rows;
  AssignmentResult result;
  if (n == 0) return result;
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based shortest augmenting paths; p[j] is the row matched to column j.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  result.column_of_row.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) result.column_of_row[p[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t i = 0; i < n; ++i) result.cost += cost(i, static_cast<std::size_t>(result.column_of_row[i]));
  result.row_potential.assign(u.begin() + 1, u.end());
  result.col_potential.assign(v.begin() + 1, v.end());
  return result;
}

namespace {

// Primal network simplex for the uncapacitated transportation problem.
// Nodes: sources [0, m), sinks [m, m + n), root m + n. Real arcs i -> m + j
// come first (index i * n + j), then one artificial arc per node.
class NetworkSimplex {
 public:
  NetworkSimplex(const std::vector<double>& supply, const std::vector<double>& demand, const Matrix& cost)
      : m_(supply.size()), n_(demand.size()), nodes_(m_ + n_ + 1), root_(m_ + n_) {
    real_arcs_ = m_ * n_;
    const std::size_t arcs = real_arcs_ + m_ + n_;
    src_.resize(arcs);
    dst_.resize(arcs);
    cost_.resize(arcs);
    flow_.assign(arcs, 0.0);
    double maxc = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t e = i * n_ + j;
        src_[e] = i;
        dst_[e] = m_ + j;
        cost_[e] = cost(i, j);
        maxc = std::max(maxc, std::abs(cost_[e]));
      }
    }
    const double art = (maxc + 1.0) * static_cast<double>(nodes_);
    parent_.assign(nodes_, none);
    pred_.assign(nodes_, none);
    up_.assign(nodes_, false);
    depth_.assign(nodes_, 0);
    pi_.assign(nodes_, 0.0);
    adj_.assign(nodes_, {});
    for (std::size_t v = 0; v < m_ + n_; ++v) {
      const std::size_t e = real_arcs_ + v;
      const bool is_source = v < m_;
      const double amount = is_source ? supply[v] : demand[v - m_];
      // Strongly feasible start: zero-flow tree arcs point toward the root.
      const bool toward_root = is_source || amount == 0;
      src_[e] = toward_root ? v : root_;
      dst_[e] = toward_root ? root_ : v;
      cost_[e] = toward_root ? 0.0 : art;
      flow_[e] = amount;
      parent_[v] = root_;
      pred_[v] = e;
      up_[v] = toward_root;
      depth_[v] = 1;
      pi_[v] = toward_root ? -cost_[e] : cost_[e];
      adj_[v].push_back(e);
      adj_[root_].push_back(e);
    }
    eps_ = 1e-12 * std::max(1.0, maxc);
    block_ = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(real_arcs_))));
  }

  void run() {
    if (real_arcs_ == 0) return;
    for (;;) {
      const std::size_t in = find_entering();
      if (in == none) break;
      pivot(in);
      ++pivots_;
    }
  }

  TransportResult result(const Matrix& cost) const {
    TransportResult r;
    r.flow = Matrix(m_, n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double f = flow_[i * n_ + j];
        r.flow(i, j) = f;
        r.cost += f * cost(i, j);
      }
    }
    r.supply_potential.resize(m_);
    r.demand_potential.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) r.supply_potential[i] = -pi_[i];
    for (std::size_t j = 0; j < n_; ++j) r.demand_potential[j] = pi_[m_ + j];
    r.pivots = pivots_;
    return r;
  }

 private:
  static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  double reduced(std::size_t e) const { return cost_[e] + pi_[src_[e]] - pi_[dst_[e]]; }

  // Block search: the most negative reduced cost within the first block
  // (scanning cyclically from the last position) that contains one.
  std::size_t find_entering() {
    double best = -eps_;
    std::size_t pick = none;
    std::size_t scanned_in_block = 0;
    for (std::size_t count = 0; count < real_arcs_; ++count) {
      const std::size_t e = next_;
      next_ = next_ + 1 == real_arcs_ ? 0 : next_ + 1;
      const double rc = reduced(e);
      if (rc < best) {
        best = rc;
        pick = e;
      }
      if (++scanned_in_block == block_) {
        if (pick != none) return pick;
        scanned_in_block = 0;
      }
    }
    return pick;
  }

  void remove_adj(std::size_t v, std::size_t e) {
    auto& a = adj_[v];
    auto it = std::find(a.begin(), a.end(), e);
    *it = a.back();
    a.pop_back();
  }

  void pivot(std::size_t in) {
    const std::size_t first = src_[in], second = dst_[in];
    std::size_t a = first, b = second;
    while (a != b) {
      if (depth_[a] >= depth_[b]) a = parent_[a];
      else b = parent_[b];
    }
    const std::size_t join = a;

    // Leaving arc, strongly feasible rule: strict on the first side, ties
    // resolved toward the second side.
    double delta = std::numeric_limits<double>::infinity();
    std::size_t u_out = none;
    int side = 0;
    for (std::size_t u = first; u != join; u = parent_[u]) {
      if (!up_[u]) continue;  // flow increases on this arc
      const double d = flow_[pred_[u]];
      if (d < delta) {
        delta = d;
        u_out = u;
        side = 1;
      }
    }
    for (std::size_t u = second; u != join; u = parent_[u]) {
      if (up_[u]) continue;
      const double d = flow_[pred_[u]];
      if (d <= delta) {
        delta = d;
        u_out = u;
        side = 2;
      }
    }
    if (u_out == none) throw std::logic_error("network simplex: unbounded pivot");

    if (delta > 0) {
      flow_[in] += delta;
      for (std::size_t u = first; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? -delta : delta;
      for (std::size_t u = second; u != join; u = parent_[u]) flow_[pred_[u]] += up_[u] ? delta : -delta;
    }
    const std::size_t out = pred_[u_out];
    flow_[out] = 0.0;

    remove_adj(u_out, out);
    remove_adj(parent_[u_out], out);
    adj_[first].push_back(in);
    adj_[second].push_back(in);
    const std::size_t u_in = side == 1 ? first : second;
    const std::size_t v_in = side == 1 ? second : first;
    rehang(u_in, v_in, in);
  }

  void rehang(std::size_t start, std::size_t parent, std::size_t arc) {
    stack_.clear();
    stack_.push_back({start, parent, arc});
    while (!stack_.empty()) {
      const Frame f = stack_.back();
      stack_.pop_back();
      const std::size_t x = f.node;
      parent_[x] = f.parent;
      pred_[x] = f.arc;
      up_[x] = src_[f.arc] == x;
      depth_[x] = depth_[f.parent] + 1;
      pi_[x] = up_[x] ? pi_[f.parent] - cost_[f.arc] : pi_[f.parent] + cost_[f.arc];
      for (std::size_t e : adj_[x]) {
        if (e == f.arc) continue;
        const std::size_t y = src_[e] == x ? dst_[e] : src_[e];
        stack_.push_back({y, x, e});
      }
    }
  }

  struct Frame {
    std::size_t node, parent, arc;
  };

  std::size_t m_, n_, nodes_, root_;
  std::size_t real_arcs_ = 0;
  std::vector<std::size_t> src_, dst_;
  std::vector<double> cost_, flow_;
  std::vector<std::size_t> parent_, pred_;
  std::vector<bool> up_;
  std::vector<std::size_t> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Frame> stack_;
  double eps_ = 1e-12;
  std::size_t block_ = 10;
  std::size_t next_ = 0;
  long pivots_ = 0;
};

}  // namespace

TransportResult solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                const Matrix& cost) {
  if (cost.rows != supply.size() || cost.cols != demand.size()) {
    throw Error(ErrorKind::InvalidMeasure, "cost matrix shape does not match the marginals");
  }
  double ts = 0, td = 0;
  for (double s : supply) {
    if (!(s >= 0)) throw Error(ErrorKind::InvalidMeasure, "negative supply");
    ts += s;
  }
  for (double d : demand) {
    if (!(d >= 0)) throw Error(ErrorKind::InvalidMeasure, "negative demand");
    td += d;
  }
  if (std::abs(ts - td) > 1e-9 * std::max(1.0, ts)) {
    throw Error(ErrorKind::InvalidMeasure, "supply and demand totals differ");
  }
  NetworkSimplex ns(supply, demand, cost);
  ns.run();
  return ns.result(cost);
}

Certificate certify(const std::vector<double>& supply, const std::vector<double>& demand, const Matrix& cost,
                    const Matrix& flow, const std::vector<double>& u, const std::vector<double>& v) {
  Certificate c;
  const std::size_t m = supply.size(), n = demand.size();
  std::vector<double> rows(m, 0.0), cols(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double f = flow(i, j);
      const double slack = cost(i, j) - u[i] - v[j];
      c.primal += f * cost(i, j);
      c.dual_infeasibility = std::max(c.dual_infeasibility, -slack);
      if (f > 0) c.slackness_violation = std::max(c.slackness_violation, std::abs(slack));
      if (f < 0) c.marginal_error = std::max(c.marginal_error, -f);
      rows[i] += f;
      cols[j] += f;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    c.dual += supply[i] * u[i];
    c.marginal_error = std::max(c.marginal_error, std::abs(rows[i] - supply[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    c.dual += demand[j] * v[j];
    c.marginal_error = std::max(c.marginal_error, std::abs(cols[j] - demand[j]));
  }
  return c;
}

}  // namespace affperm
