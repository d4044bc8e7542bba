#include "packlab/baselines.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "packlab/lp.hpp"

namespace packlab {

namespace {

struct Bin {
  std::map<int, long long> items;
  Rat load{0};
};

std::vector<std::vector<std::pair<int, long long>>> bins_out(const std::vector<Bin>& bins) {
  std::vector<std::vector<std::pair<int, long long>>> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.emplace_back(b.items.begin(), b.items.end());
  return out;
}

void place(std::vector<Bin>& bins, int type, const Rat& size) {
  for (auto& b : bins)
    if (b.load + size <= 1) {
      b.items[type] += 1;
      b.load += size;
      return;
    }
  Bin nb;
  nb.items[type] = 1;
  nb.load = size;
  bins.push_back(std::move(nb));
}

}  // namespace

BinSolution first_fit(const Instance& inst, const std::vector<int>& order) {
  std::vector<long long> seen(inst.num_types(), 0);
  for (int t : order) {
    if (t < 0 || t >= inst.num_types()) throw std::invalid_argument("order has unknown type");
    ++seen[t];
  }
  for (int t = 0; t < inst.num_types(); ++t)
    if (seen[t] != inst.mult[t]) throw std::invalid_argument("order is not a permutation of the items");

  BinSolution sol;
  sol.algorithm = "ff";
  std::vector<Bin> bins;
  for (int t : order) place(bins, t, inst.sizes[t]);
  sol.bins = bins_out(bins);
  return sol;
}

BinSolution first_fit_decreasing(const Instance& inst) {
  std::vector<int> order;
  for (int t = 0; t < inst.num_types(); ++t)
    for (long long k = 0; k < inst.mult[t]; ++k) order.push_back(t);
  BinSolution sol = first_fit(inst, order);  // sizes are stored descending
  sol.algorithm = "ffd";
  return sol;
}

std::vector<int> shuffled_order(const Instance& inst, std::uint64_t seed) {
  std::vector<int> order;
  for (int t = 0; t < inst.num_types(); ++t)
    for (long long k = 0; k < inst.mult[t]; ++k) order.push_back(t);
  std::mt19937_64 rng(seed);
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng() % i]);  // Fisher-Yates, engine-pinned
  return order;
}

BinSolution karmarkar_karp(const Instance& inst, const SolveParams& params) {
  BinSolution sol;
  sol.algorithm = "kk";
  sol.seed = params.rng_seed;
  std::vector<Bin> bins;

  // Residual demands in original typing.
  std::vector<long long> residual = inst.mult;
  auto residual_instance = [&]() {
    std::vector<std::pair<Rat, long long>> items;
    std::vector<int> back;  // residual type -> original type
    for (int t = 0; t < inst.num_types(); ++t)
      if (residual[t] > 0) {
        items.emplace_back(inst.sizes[t], residual[t]);
        back.push_back(t);
      }
    return std::make_pair(make_instance(items), back);
  };

  for (int round = 0; round < 200; ++round) {
    auto [res, back] = residual_instance();
    if (res.num_types() == 0) break;
    if (total_size(res) <= 1) {
      for (int rt = 0; rt < res.num_types(); ++rt)
        for (long long k = 0; k < res.mult[rt]; ++k) place(bins, back[rt], res.sizes[rt]);
      for (long long& r : residual) r = 0;
      break;
    }
    Preprocessed prep = preprocess(res, params);
    if (prep.large.num_types() == 0) {
      // Everything small relative to the residual: plain first fit finishes.
      for (int rt = 0; rt < res.num_types(); ++rt)
        for (long long k = 0; k < res.mult[rt]; ++k) place(bins, back[rt], res.sizes[rt]);
      for (long long& r : residual) r = 0;
      break;
    }
    LpSolution lp = solve_gg_lp(prep.large);

    std::vector<long long> buy(lp.columns.size(), 0);
    bool bought_any = false;
    for (size_t c = 0; c < lp.columns.size(); ++c) {
      buy[c] = static_cast<long long>(std::floor(lp.values[c] + 1e-9));
      if (buy[c] > 0) bought_any = true;
    }
    if (!bought_any) {
      // Degenerate fully-fractional round; buy one copy of the heaviest
      // pattern so the residual strictly shrinks.
      size_t best = 0;
      for (size_t c = 1; c < lp.columns.size(); ++c)
        if (lp.values[c] > lp.values[best]) best = c;
      buy[best] = 1;
    }

    // Fill the bought rounded slots with original items; pools may run dry
    // when the LP overcovers, leaving free space.
    std::vector<std::vector<std::pair<int, long long>>> pools = prep.group_members;
    for (auto& pool : pools)
      for (auto& [rt, c] : pool) rt = back[rt];  // to original typing
    std::vector<size_t> pos(pools.size(), 0);
    for (size_t c = 0; c < lp.columns.size(); ++c) {
      for (long long copy = 0; copy < buy[c]; ++copy) {
        Bin bin;
        for (const auto& [rtype, cnt] : lp.columns[c].counts) {
          long long need = cnt;
          auto& pool = pools[rtype];
          size_t& p = pos[rtype];
          while (need > 0 && p < pool.size()) {
            long long take = std::min(need, pool[p].second);
            bin.items[pool[p].first] += take;
            bin.load += inst.sizes[pool[p].first] * take;
            residual[pool[p].first] -= take;
            pool[p].second -= take;
            need -= take;
            if (pool[p].second == 0) ++p;
          }
        }
        if (!bin.items.empty()) bins.push_back(std::move(bin));
      }
    }
  }

  sol.bins = bins_out(bins);
  VerifyReport rep = verify(inst, sol);
  if (!rep.ok) throw PipelineError("kk", rep.first_violation);
  return sol;
}

}  // namespace packlab
