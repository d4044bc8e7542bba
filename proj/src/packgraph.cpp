#include "packlab/packgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace packlab {

namespace {

template <class M>
long long floor_scalar(const M& v);

template <>
long long floor_scalar<double>(const double& v) {
  return static_cast<long long>(std::floor(v));
}

template <>
long long floor_scalar<Rat>(const Rat& v) {
  long long q = v.numerator() / v.denominator();
  if (v.numerator() < 0 && q * v.denominator() != v.numerator()) --q;
  return q;
}

}  // namespace

template <class M>
GraphAssignment<M> greedy_assignment(const BasicPackingGraph<M>& g,
                                     const std::vector<int>* right_order) {
  const int nl = static_cast<int>(g.left.size());
  const int nr = static_cast<int>(g.right.size());

  std::vector<int> lorder(nl);
  std::iota(lorder.begin(), lorder.end(), 0);
  std::sort(lorder.begin(), lorder.end(), [&](int a, int b) {
    if (g.left[a].size != g.left[b].size) return g.left[a].size > g.left[b].size;
    return a < b;
  });

  std::vector<int> rorder;
  if (right_order) {
    rorder = *right_order;
  } else {
    rorder.resize(nr);
    std::iota(rorder.begin(), rorder.end(), 0);
    std::sort(rorder.begin(), rorder.end(), [&](int a, int b) {
      if (g.right[a].size != g.right[b].size) return g.right[a].size > g.right[b].size;
      return a < b;
    });
  }

  std::vector<M> left_rem(nl), right_rem(nr);
  for (int u = 0; u < nl; ++u) left_rem[u] = M(g.left[u].mult);
  for (int v = 0; v < nr; ++v) right_rem[v] = g.right[v].mult;

  GraphAssignment<M> out;
  out.deficiency = M(0);
  for (int v : rorder) {
    if (!(right_rem[v] > M(0))) continue;
    for (int pos = 0; pos < nl && right_rem[v] > M(0); ++pos) {
      int u = lorder[pos];
      if (g.left[u].size > g.right[v].size) continue;  // no edge
      if (!(left_rem[u] > M(0))) continue;
      M f = std::min(left_rem[u], right_rem[v]);
      left_rem[u] -= f;
      right_rem[v] -= f;
      out.flows.emplace_back(u, v, f);
    }
  }
  for (int u = 0; u < nl; ++u)
    if (left_rem[u] > M(0)) out.deficiency += to_scalar<M>(g.left[u].size) * left_rem[u];
  return out;
}

template <class M>
M graph_deficiency(const BasicPackingGraph<M>& g) {
  return greedy_assignment(g).deficiency;
}

template <class M>
RedBlueSplit decompose_red_blue(const BasicPackingGraph<M>& g, const std::vector<M>& right_red,
                                const Rat& sigma) {
  const int nl = static_cast<int>(g.left.size());
  const int nr = static_cast<int>(g.right.size());
  if (static_cast<int>(right_red.size()) != nr)
    throw std::invalid_argument("red multiplicity size mismatch");
  for (int v = 0; v < nr; ++v) {
    if (right_red[v] < M(0) || right_red[v] > g.right[v].mult)
      throw std::invalid_argument("red multiplicity out of range");
    if (g.right[v].size > sigma && right_red[v] > M(0))
      throw std::invalid_argument("red multiplicity on a node larger than sigma");
  }

  // Virtual right side: red copies first, then blue copies, size-descending
  // within each colour. The greedy optimum routed this way packs the red
  // part first, so the red flow per left node is the fractional red share.
  BasicPackingGraph<M> vg;
  vg.left = g.left;
  std::vector<bool> is_red;
  for (int v = 0; v < nr; ++v) {
    vg.right.push_back({g.right[v].size, right_red[v]});
    is_red.push_back(true);
  }
  for (int v = 0; v < nr; ++v) {
    vg.right.push_back({g.right[v].size, g.right[v].mult - right_red[v]});
    is_red.push_back(false);
  }
  std::vector<int> order(vg.right.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (is_red[a] != is_red[b]) return static_cast<bool>(is_red[a]);
    if (vg.right[a].size != vg.right[b].size) return vg.right[a].size > vg.right[b].size;
    return a < b;
  });
  auto assign = greedy_assignment(vg, &order);

  std::vector<M> red_frac(nl, M(0));
  for (const auto& [u, v, f] : assign.flows)
    if (is_red[v]) red_frac[u] += f;

  // Integralize by carrying fractional parts down the size order; a carry
  // dropped at the end only ever removes red mass.
  std::vector<int> lorder(nl);
  std::iota(lorder.begin(), lorder.end(), 0);
  std::sort(lorder.begin(), lorder.end(), [&](int a, int b) {
    if (g.left[a].size != g.left[b].size) return g.left[a].size > g.left[b].size;
    return a < b;
  });
  RedBlueSplit split;
  split.left_red.assign(nl, 0);
  split.left_blue.assign(nl, 0);
  M carry(0);
  for (int u : lorder) {
    if (!(red_frac[u] > M(0)) && !(carry > M(0))) {
      split.left_blue[u] = g.left[u].mult;
      continue;
    }
    M t = red_frac[u] + carry;
    long long fl = floor_scalar<M>(t);
    fl = std::min(fl, g.left[u].mult);
    split.left_red[u] = fl;
    split.left_blue[u] = g.left[u].mult - fl;
    carry = t - M(fl);
  }
  return split;
}

template <class M>
BasicPackingGraph<M> red_subgraph(const BasicPackingGraph<M>& g, const RedBlueSplit& split,
                                  const std::vector<M>& right_red) {
  BasicPackingGraph<M> out;
  for (size_t u = 0; u < g.left.size(); ++u) out.left.push_back({g.left[u].size, split.left_red[u]});
  for (size_t v = 0; v < g.right.size(); ++v) out.right.push_back({g.right[v].size, right_red[v]});
  return out;
}

template <class M>
BasicPackingGraph<M> blue_subgraph(const BasicPackingGraph<M>& g, const RedBlueSplit& split,
                                   const std::vector<M>& right_red) {
  BasicPackingGraph<M> out;
  for (size_t u = 0; u < g.left.size(); ++u) out.left.push_back({g.left[u].size, split.left_blue[u]});
  for (size_t v = 0; v < g.right.size(); ++v)
    out.right.push_back({g.right[v].size, g.right[v].mult - right_red[v]});
  return out;
}

template GraphAssignment<double> greedy_assignment(const BasicPackingGraph<double>&, const std::vector<int>*);
template GraphAssignment<Rat> greedy_assignment(const BasicPackingGraph<Rat>&, const std::vector<int>*);
template double graph_deficiency(const BasicPackingGraph<double>&);
template Rat graph_deficiency(const BasicPackingGraph<Rat>&);
template RedBlueSplit decompose_red_blue(const BasicPackingGraph<double>&, const std::vector<double>&, const Rat&);
template RedBlueSplit decompose_red_blue(const BasicPackingGraph<Rat>&, const std::vector<Rat>&, const Rat&);
template BasicPackingGraph<double> red_subgraph(const BasicPackingGraph<double>&, const RedBlueSplit&, const std::vector<double>&);
template BasicPackingGraph<Rat> red_subgraph(const BasicPackingGraph<Rat>&, const RedBlueSplit&, const std::vector<Rat>&);
template BasicPackingGraph<double> blue_subgraph(const BasicPackingGraph<double>&, const RedBlueSplit&, const std::vector<double>&);
template BasicPackingGraph<Rat> blue_subgraph(const BasicPackingGraph<Rat>&, const RedBlueSplit&, const std::vector<Rat>&);

}  // namespace packlab
