#include "packlab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace packlab {

namespace {

double level_threshold(double k_const, double sigma, int level) {
  return k_const * std::pow(1.0 / sigma, 17.0 / 16.0) * std::pow(0.5, level);
}

struct Piece {
  int lo, hi;
  bool rule_singleton;
};

// Singleton rule: mass > threshold(level+1); remaining contiguous runs pack
// greedily under threshold(level).
std::vector<Piece> segment(const std::vector<double>& mass, int lo, int hi, double k_const,
                           double sigma, int level) {
  std::vector<Piece> out;
  const double single_cut = level_threshold(k_const, sigma, level + 1);
  const double cap = level_threshold(k_const, sigma, level);
  int run_lo = -1;
  double run_mass = 0;
  auto flush = [&](int end) {
    if (run_lo >= 0) {
      out.push_back({run_lo, end, false});
      run_lo = -1;
      run_mass = 0;
    }
  };
  for (int i = lo; i <= hi; ++i) {
    if (mass[i] > single_cut) {
      flush(i - 1);
      out.push_back({i, i, true});
      continue;
    }
    if (run_lo < 0) {
      run_lo = i;
      run_mass = mass[i];
    } else if (run_mass + mass[i] <= cap) {
      run_mass += mass[i];
    } else {
      flush(i - 1);
      run_lo = i;
      run_mass = mass[i];
    }
  }
  flush(hi);
  return out;
}

}  // namespace

IntervalFamily build_intervals(const IncidenceMatrices& mats, const SolveParams& params) {
  IntervalFamily family;
  family.n_cols = mats.cols;
  family.n_rows = static_cast<int>(mats.a.size());

  std::vector<double> mass(family.n_rows);
  for (int r = 0; r < family.n_rows; ++r) mass[r] = static_cast<double>(mats.shadow_n1(r));

  auto v2norm = [&](int lo, int hi) {
    double sq = 0;
    for (int col = 0; col < mats.cols; ++col) {
      double s = 0;
      for (int r = lo; r <= hi; ++r) s += static_cast<double>(mats.a[r][col]);
      sq += s * s;
    }
    return std::sqrt(sq);
  };
  auto make_constraint = [&](int lo, int hi, double lambda) {
    DiscrepancyConstraint c;
    c.lambda = lambda;
    c.v.assign(mats.cols, 0.0);
    for (int r = lo; r <= hi; ++r)
      for (int col = 0; col < mats.cols; ++col) c.v[col] += static_cast<double>(mats.a[r][col]);
    return c;
  };

  int row = 0;
  while (row < family.n_rows) {
    int l = mats.row_class[row];
    int hi = row;
    while (hi + 1 < family.n_rows && mats.row_class[hi + 1] == l) ++hi;

    ClassIntervals cls;
    cls.class_log2 = l;
    cls.row_lo = row;
    cls.row_hi = hi;
    cls.small = l >= params.small_class_log2;
    const double sigma = std::pow(0.5, l);

    if (!cls.small) {
      for (int r = row; r <= hi; ++r) {
        IntervalNode node;
        node.lo = node.hi = r;
        node.level = 0;
        node.shadow_mass = mass[r];
        node.v2norm = v2norm(r, r);
        node.rule_singleton = true;
        cls.roots.push_back(static_cast<int>(cls.nodes.size()));
        cls.nodes.push_back(node);
        family.constraints.push_back(make_constraint(r, r, 0.0));
      }
    } else {
      // Recursive leveled refinement. A re-segmentation that fails to split
      // just moves to a deeper level, so emitted ranges are all distinct and
      // each carries the smallest level at which it appears.
      auto emit_tree = [&](auto&& self, int lo2, int hi2, int level, bool rule) -> int {
        IntervalNode node;
        node.lo = lo2;
        node.hi = hi2;
        node.level = level;
        node.rule_singleton = rule;
        node.shadow_mass = 0;
        for (int r = lo2; r <= hi2; ++r) node.shadow_mass += mass[r];
        node.v2norm = v2norm(lo2, hi2);
        int idx = static_cast<int>(cls.nodes.size());
        cls.nodes.push_back(node);
        family.constraints.push_back(make_constraint(lo2, hi2, static_cast<double>(level)));
        if (lo2 == hi2) return idx;
        int next = level + 1;
        std::vector<Piece> pieces;
        for (;; ++next) {
          pieces = segment(mass, lo2, hi2, params.budget_K, sigma, next);
          if (pieces.size() > 1 || (pieces.size() == 1 && pieces[0].rule_singleton)) break;
          if (next > level + 64) throw std::logic_error("interval refinement stalled");
        }
        std::vector<int> kids;
        for (const Piece& p : pieces) kids.push_back(self(self, p.lo, p.hi, next, p.rule_singleton));
        cls.nodes[idx].kids = kids;
        cls.nodes[idx].child_level = next;
        return idx;
      };
      for (const Piece& p : segment(mass, row, hi, params.budget_K, sigma, 0))
        cls.roots.push_back(emit_tree(emit_tree, p.lo, p.hi, 0, p.rule_singleton));
    }
    family.classes.push_back(std::move(cls));
    row = hi + 1;
  }

  family.budget = 1.0;  // the all-ones objective costs e^0
  for (const auto& cls : family.classes)
    for (const auto& node : cls.nodes) {
      double lambda = cls.small ? static_cast<double>(node.level) : 0.0;
      family.budget += std::exp(-lambda * lambda / 16.0);
    }

  DiscrepancyConstraint obj;
  obj.lambda = 0.0;
  obj.v.assign(mats.cols, 1.0);
  family.constraints.push_back(obj);
  return family;
}

std::vector<int> level_cut(const ClassIntervals& cls, int level) {
  std::vector<int> cut;
  for (size_t i = 0; i < cls.nodes.size(); ++i) {
    const IntervalNode& n = cls.nodes[i];
    bool active = n.level <= level && (n.child_level < 0 || level < n.child_level);
    if (active) cut.push_back(static_cast<int>(i));
  }
  return cut;
}

namespace {

double gauss(std::mt19937_64& rng) {
  // Box-Muller on explicit uniforms; keeps the stream identical everywhere.
  double u1 = (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  double u2 = (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

struct Projector {
  int n;
  std::vector<std::vector<double>> basis;  // orthonormal

  explicit Projector(int dim) : n(dim) {}

  // Gram-Schmidt append; returns false if the vector is dependent.
  bool add(std::vector<double> w) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += q[i] * w[i];
        for (int i = 0; i < n; ++i) w[i] -= dot * q[i];
      }
    double norm = 0;
    for (int i = 0; i < n; ++i) norm += w[i] * w[i];
    norm = std::sqrt(norm);
    if (norm < 1e-10) return false;
    for (int i = 0; i < n; ++i) w[i] /= norm;
    basis.push_back(std::move(w));
    return true;
  }

  void add_axis(int i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    add(std::move(e));
  }

  void project(std::vector<double>& g) const {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += q[i] * g[i];
        for (int i = 0; i < n; ++i) g[i] -= dot * q[i];
      }
  }
};

}  // namespace

WalkResult partial_color(const std::vector<double>& x_start,
                         const std::vector<DiscrepancyConstraint>& constraints,
                         const SolveParams& params, std::mt19937_64& rng) {
  const int n = static_cast<int>(x_start.size());
  WalkResult result;
  result.x_end = x_start;

  double budget = 0;
  for (const auto& c : constraints) budget += std::exp(-c.lambda * c.lambda / 16.0);
  if (budget > static_cast<double>(n) / 16.0 + 1e-12) {
    result.status = WalkResult::Status::budget_rejected;
    return result;
  }
  for (double v : x_start)
    if (v < 0 || v > 1) throw std::invalid_argument("walk start outside [0,1]");

  std::vector<double> norms(constraints.size(), 0.0);
  for (size_t j = 0; j < constraints.size(); ++j) {
    double sq = 0;
    for (double v : constraints[j].v) sq += v * v;
    norms[j] = std::sqrt(sq);
  }

  const long long steps = static_cast<long long>(std::ceil(params.lm_c_t / (params.lm_gamma * params.lm_gamma)));
  const int need = (n + 1) / 2;

  for (int attempt = 0; attempt <= params.lm_retries; ++attempt) {
    std::vector<double> x = x_start;
    std::vector<bool> frozen(n, false);
    std::vector<bool> active(constraints.size(), false);
    std::vector<double> drift(constraints.size(), 0.0);  // <x - x_start, v_j>
    Projector proj(n);
    WalkTrace trace;
    if (params.lm_trace) {
      trace.freeze_step.assign(n, -1);
      trace.freeze_value.assign(n, 0.0);
    }

    int frozen_count = 0;
    auto freeze = [&](int i, double at, int step) {
      x[i] = at;
      frozen[i] = true;
      ++frozen_count;
      proj.add_axis(i);
      if (params.lm_trace) {
        trace.freeze_step[i] = step;
        trace.freeze_value[i] = at;
      }
    };
    for (int i = 0; i < n; ++i) {
      if (x[i] <= params.lm_delta_freeze) freeze(i, 0.0, 0);
      else if (x[i] >= 1.0 - params.lm_delta_freeze) freeze(i, 1.0, 0);
    }
    for (size_t j = 0; j < constraints.size(); ++j)
      if (constraints[j].exact() && norms[j] > 0) {
        active[j] = true;
        proj.add(constraints[j].v);
      }

    int stalls = 0;
    std::vector<double> g(n);
    for (long long step = 1; step <= steps && frozen_count < need; ++step) {
      for (int i = 0; i < n; ++i) g[i] = frozen[i] ? 0.0 : params.lm_gamma * gauss(rng);
      proj.project(g);
      for (int i = 0; i < n; ++i)
        if (frozen[i]) g[i] = 0.0;

      double norm_sq = 0;
      for (double v : g) norm_sq += v * v;
      if (norm_sq < params.lm_gamma * params.lm_gamma * 1e-12) {
        if (++stalls > 8) break;  // projection space exhausted
        continue;
      }
      stalls = 0;

      // Truncate at the first wall: a coordinate reaching {0,1} or an
      // inequality becoming tight. Walls then join the projection set.
      double t = 1.0;
      int wall_coord = -1;
      double wall_at = 0.0;
      for (int i = 0; i < n; ++i) {
        if (frozen[i] || g[i] == 0.0) continue;
        double lim = g[i] > 0 ? (1.0 - x[i]) / g[i] : (0.0 - x[i]) / g[i];
        if (lim < t) {
          t = lim;
          wall_coord = i;
          wall_at = g[i] > 0 ? 1.0 : 0.0;
        }
      }
      std::vector<double> dots(constraints.size(), 0.0);
      int wall_con = -1;
      for (size_t j = 0; j < constraints.size(); ++j) {
        if (active[j] || constraints[j].exact() || norms[j] == 0) continue;
        double dot = 0;
        for (int i = 0; i < n; ++i) dot += g[i] * constraints[j].v[i];
        dots[j] = dot;
        if (dot == 0) continue;
        double room = constraints[j].lambda * norms[j];
        double lim = dot > 0 ? (room - drift[j]) / dot : (-room - drift[j]) / dot;
        if (lim < 0) lim = 0;
        if (lim < t) {
          t = lim;
          wall_con = static_cast<int>(j);
          wall_coord = -1;
        }
      }

      for (int i = 0; i < n; ++i)
        if (!frozen[i]) x[i] += t * g[i];
      for (size_t j = 0; j < constraints.size(); ++j) {
        if (active[j] || norms[j] == 0) continue;
        if (constraints[j].exact()) continue;
        drift[j] += t * dots[j];
      }

      if (wall_coord >= 0) {
        freeze(wall_coord, wall_at, static_cast<int>(step));
      } else if (wall_con >= 0) {
        active[wall_con] = true;
        proj.add(constraints[wall_con].v);
      }
      // Sweep any coordinate the step carried into the freeze band.
      for (int i = 0; i < n; ++i) {
        if (frozen[i]) continue;
        if (x[i] <= params.lm_delta_freeze) freeze(i, 0.0, static_cast<int>(step));
        else if (x[i] >= 1.0 - params.lm_delta_freeze) freeze(i, 1.0, static_cast<int>(step));
      }
      if (params.lm_trace) trace.frozen_per_step.push_back(frozen_count);
    }

    int integral = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] <= params.lm_snap_tol) x[i] = 0.0;
      else if (x[i] >= 1.0 - params.lm_snap_tol) x[i] = 1.0;
      if (x[i] == 0.0 || x[i] == 1.0) ++integral;
    }
    if (integral >= need) {
      result.status = WalkResult::Status::success;
      result.x_end = std::move(x);
      result.integral_count = integral;
      result.retries_used = attempt;
      if (params.lm_trace) result.trace = std::move(trace);
      return result;
    }
    if (attempt == params.lm_retries) {
      result.status = WalkResult::Status::retries_exhausted;
      result.x_end = std::move(x);
      result.integral_count = integral;
      result.retries_used = attempt;
      if (params.lm_trace) result.trace = std::move(trace);
    }
  }
  return result;
}

double prefix_error_bound(const IntervalFamily& family, int row_prefix_end) {
  if (row_prefix_end < 0 || row_prefix_end >= family.n_rows)
    throw std::out_of_range("prefix row out of range");
  for (const auto& cls : family.classes) {
    if (row_prefix_end < cls.row_lo || row_prefix_end > cls.row_hi) continue;
    if (!cls.small || row_prefix_end == cls.row_hi) return 0.0;
    // Cover [row_lo, row_prefix_end] by maximal fully-contained nodes.
    double bound = 0.0;
    auto descend = [&](auto&& self, int node_idx) -> void {
      const IntervalNode& node = cls.nodes[node_idx];
      if (node.hi <= row_prefix_end) {
        bound += static_cast<double>(node.level) * node.v2norm;
        return;
      }
      if (node.lo > row_prefix_end) return;
      for (int kid : node.kids) self(self, kid);
    };
    for (int root : cls.roots) descend(descend, root);
    return bound;
  }
  return 0.0;  // row in a large class: exact singletons cover every prefix
}

}  // namespace packlab
