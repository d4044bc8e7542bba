#include "packlab/oracle.hpp"

#include <algorithm>
#include <map>

#include "packlab/simplex.hpp"

namespace packlab {

namespace {

void enumerate_rec(const Instance& inst, int type, Rat remaining,
                   std::vector<std::pair<int, long long>>& prefix,
                   std::vector<ItemPattern>& out) {
  if (out.size() > 1000000) throw OracleError("pattern enumeration guard exceeded (1e6)");
  if (type == inst.num_types()) {
    if (!prefix.empty()) out.push_back(ItemPattern{prefix});
    return;
  }
  long long cap = 0;
  {
    Rat q = remaining / inst.sizes[type];
    cap = q.numerator() / q.denominator();
  }
  for (long long c = 0; c <= cap; ++c) {
    if (c > 0) prefix.emplace_back(type, c);
    enumerate_rec(inst, type + 1, remaining - inst.sizes[type] * c, prefix, out);
    if (c > 0) prefix.pop_back();
  }
}

}  // namespace

std::vector<ItemPattern> enumerate_patterns(const Instance& inst) {
  if (inst.num_types() > 8) throw OracleError("pattern enumeration guard: n > 8");
  std::vector<ItemPattern> out;
  std::vector<std::pair<int, long long>> prefix;
  enumerate_rec(inst, 0, Rat(1), prefix, out);
  return out;
}

double exact_lp(const Instance& inst) {
  const int n = inst.num_types();
  if (n == 0) return 0.0;
  std::vector<ItemPattern> patterns = enumerate_patterns(inst);

  DenseSimplex<double> lp(n);
  std::map<std::string, int> index;
  for (const auto& p : patterns) {
    std::vector<std::pair<int, double>> col;
    for (const auto& [i, c] : p.counts) col.emplace_back(i, static_cast<double>(c));
    index[p.key()] = lp.add_column(std::move(col), 1.0);
  }
  for (int i = 0; i < n; ++i) lp.add_column({{i, -1.0}}, 0.0);

  std::vector<int> basis(n);
  for (int i = 0; i < n; ++i) {
    Rat q = Rat(1) / inst.sizes[i];
    ItemPattern p;
    p.counts.emplace_back(i, q.numerator() / q.denominator());
    basis[i] = index.at(p.key());
  }
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = static_cast<double>(inst.mult[i]);
  lp.set_rhs(rhs);
  lp.set_basis(basis);
  if (lp.optimize() != LpStatus::optimal) throw OracleError("exact LP did not converge");
  return lp.objective();
}

namespace {

// All patterns p <= residual that are maximal: no further item fits.
void maximal_patterns_rec(const Instance& inst, const std::vector<long long>& residual, int type,
                          Rat remaining, std::vector<long long>& current,
                          std::vector<std::vector<long long>>& out) {
  if (type == inst.num_types()) {
    bool any = false, maximal = true;
    for (int i = 0; i < inst.num_types(); ++i) {
      if (current[i] > 0) any = true;
      if (current[i] < residual[i] && inst.sizes[i] <= remaining) maximal = false;
    }
    if (any && maximal) out.push_back(current);
    return;
  }
  long long cap = residual[type];
  {
    Rat q = remaining / inst.sizes[type];
    cap = std::min(cap, q.numerator() / q.denominator());
  }
  for (long long c = cap; c >= 0; --c) {
    current[type] = c;
    maximal_patterns_rec(inst, residual, type + 1, remaining - inst.sizes[type] * c, current, out);
  }
  current[type] = 0;
}

long long opt_rec(const Instance& inst, std::vector<long long>& residual,
                  std::map<std::vector<long long>, long long>& memo) {
  bool empty = true;
  for (long long r : residual)
    if (r > 0) empty = false;
  if (empty) return 0;
  auto it = memo.find(residual);
  if (it != memo.end()) return it->second;

  std::vector<std::vector<long long>> branches;
  std::vector<long long> current(inst.num_types(), 0);
  maximal_patterns_rec(inst, residual, 0, Rat(1), current, branches);

  long long best = std::numeric_limits<long long>::max();
  for (const auto& p : branches) {
    for (int i = 0; i < inst.num_types(); ++i) residual[i] -= p[i];
    best = std::min(best, 1 + opt_rec(inst, residual, memo));
    for (int i = 0; i < inst.num_types(); ++i) residual[i] += p[i];
  }
  memo[residual] = best;
  return best;
}

}  // namespace

long long exact_opt(const Instance& inst) {
  if (inst.total_items() > 15) throw OracleError("exact OPT guard: more than 15 items");
  std::vector<long long> residual = inst.mult;
  std::map<std::vector<long long>, long long> memo;
  return opt_rec(inst, residual, memo);
}

BigRat exact_deficiency(const RationalPackingGraph& g) {
  if (g.left.size() > 12 || g.right.size() > 12)
    throw OracleError("exact deficiency guard: more than 12 nodes per side");
  const int nl = static_cast<int>(g.left.size());
  const int nr = static_cast<int>(g.right.size());

  // max sum s(u) f_uv over flows respecting both capacities; edges only from
  // left nodes to right nodes at least as large.
  DenseSimplex<BigRat> lp(nl + nr);
  for (int u = 0; u < nl; ++u)
    for (int v = 0; v < nr; ++v) {
      if (g.left[u].size > g.right[v].size) continue;
      lp.add_column({{u, BigRat(1)}, {nl + v, BigRat(1)}}, -to_bigrat(g.left[u].size));
    }
  std::vector<int> basis;
  for (int u = 0; u < nl; ++u) basis.push_back(lp.add_column({{u, BigRat(1)}}, BigRat(0)));
  for (int v = 0; v < nr; ++v) basis.push_back(lp.add_column({{nl + v, BigRat(1)}}, BigRat(0)));

  std::vector<BigRat> rhs;
  for (int u = 0; u < nl; ++u) rhs.push_back(BigRat(g.left[u].mult));
  for (int v = 0; v < nr; ++v) rhs.push_back(to_bigrat(g.right[v].mult));
  lp.set_rhs(rhs);
  lp.set_basis(basis);
  if (lp.optimize() != LpStatus::optimal) throw OracleError("transportation LP did not converge");

  BigRat total(0);
  for (int u = 0; u < nl; ++u) total += to_bigrat(g.left[u].size) * g.left[u].mult;
  return total + lp.objective();
}

}  // namespace packlab
