#include "packlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "packlab/simplex.hpp"

namespace packlab {

long long ItemPattern::count_of(int item) const {
  for (const auto& [i, c] : counts)
    if (i == item) return c;
  return 0;
}

std::string ItemPattern::key() const {
  std::string k;
  for (const auto& [i, c] : counts) k += std::to_string(i) + ":" + std::to_string(c) + ",";
  return k;
}

Rat pattern_size(const Instance& inst, const ItemPattern& p) {
  Rat total(0);
  for (const auto& [i, c] : p.counts) total += inst.sizes[i] * c;
  return total;
}

std::pair<ItemPattern, double> price_pattern(const std::vector<Rat>& sizes,
                                             const std::vector<double>& duals, long long d) {
  if (d > 100000000) throw LpError("pricing lattice too fine: D = " + std::to_string(d));
  const int n = static_cast<int>(sizes.size());
  std::vector<long long> weight(n);
  for (int i = 0; i < n; ++i) {
    if (d % sizes[i].denominator() != 0) throw LpError("size off the pricing lattice");
    weight[i] = sizes[i].numerator() * (d / sizes[i].denominator());
  }
  std::vector<double> value(d + 1, 0.0);
  std::vector<int> choice(d + 1, -1);
  for (long long c = 1; c <= d; ++c) {
    value[c] = value[c - 1];
    // Reverse item order so that on ties the higher index sticks, keeping the
    // count vector lexicographically smallest.
    for (int i = n - 1; i >= 0; --i) {
      if (duals[i] <= 0 || weight[i] > c) continue;
      double cand = value[c - weight[i]] + duals[i];
      if (cand > value[c] + 1e-12) {
        value[c] = cand;
        choice[c] = i;
      }
    }
  }
  ItemPattern p;
  std::map<int, long long> counts;
  long long c = d;
  while (c > 0) {
    if (choice[c] < 0) {
      --c;
    } else {
      ++counts[choice[c]];
      c -= weight[choice[c]];
    }
  }
  for (const auto& [i, k] : counts) p.counts.emplace_back(i, k);
  return {p, value[d]};
}

double lp_lower_bound(const Instance& inst) { return to_double(total_size(inst)); }

LpSolution solve_gg_lp(const Instance& inst, double eps) {
  const int n = inst.num_types();
  LpSolution sol;
  if (n == 0) return sol;
  const long long d = common_denominator(inst);

  DenseSimplex<double> master(n);
  std::vector<ItemPattern> patterns;   // per pattern column
  std::vector<int> pattern_col;        // column index in the master
  std::set<std::string> seen;

  auto add_pattern = [&](const ItemPattern& p) {
    std::vector<std::pair<int, double>> col;
    for (const auto& [i, c] : p.counts) col.emplace_back(i, static_cast<double>(c));
    int idx = master.add_column(std::move(col), 1.0);
    patterns.push_back(p);
    pattern_col.push_back(idx);
    seen.insert(p.key());
    return idx;
  };

  std::vector<int> basis;
  for (int i = 0; i < n; ++i) {
    ItemPattern p;
    p.counts.emplace_back(i, (Rat(1) / inst.sizes[i]).numerator() / (Rat(1) / inst.sizes[i]).denominator());
    if (p.counts[0].second < 1) throw LpError("size exceeds bin capacity");
    basis.push_back(add_pattern(p));
  }
  for (int i = 0; i < n; ++i) master.add_column({{i, -1.0}}, 0.0);  // surplus

  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = static_cast<double>(inst.mult[i]);
  master.set_rhs(rhs);
  master.set_basis(basis);

  const long long round_cap = 10LL * n * d;
  bool retried_duplicate = false;
  for (long long round = 0;; ++round) {
    if (round > round_cap) throw LpError("column generation exceeded pricing round cap");
    if (master.optimize() != LpStatus::optimal) throw LpError("master LP did not converge");
    std::vector<double> duals = master.duals();
    for (double& u : duals) u = std::max(u, 0.0);
    auto [priced, value] = price_pattern(inst.sizes, duals, d);
    if (value <= 1.0 + eps) break;
    if (seen.count(priced.key())) {
      // Dual drift can re-propose a known column; refactorize once, then stop.
      if (retried_duplicate) break;
      retried_duplicate = true;
      master.refactorize();
      continue;
    }
    retried_duplicate = false;
    add_pattern(priced);
  }

  master.refactorize();
  std::vector<double> x = master.primal();
  for (size_t k = 0; k < patterns.size(); ++k) {
    double v = x[pattern_col[k]];
    if (v > 1e-12) {
      sol.columns.push_back(patterns[k]);
      sol.values.push_back(v);
      sol.objective += v;
    }
  }
  sol.duals = master.duals();
  return sol;
}

}  // namespace packlab
