#pragma once

#include <random>
#include <set>
#include <vector>

#include "packlab/containers.hpp"
#include "packlab/instance.hpp"
#include "packlab/packgraph.hpp"

namespace packlab::testing {

inline Instance figure1_instance() { return parse_instance("0.3 2\n0.2 1\n0.1 7", "fig1"); }

// The worked two-stage example: containers C1 = {0,1,2}, C2 = {0,2},
// C3 = {1,2} with y = (1,1,2), and three half-weight patterns
// p1 = {C3:2, C2:1}, p2 = {C2:1, C1:1}, p3 = {C1:1, C3:1}.
struct Figure1State {
  PackingState state;
  int c1, c2, c3;
};

inline Figure1State figure1_state() {
  Instance inst = figure1_instance();
  Figure1State out;
  out.state.reg = std::make_shared<ContainerRegistry>(inst.sizes);
  out.state.b = inst.mult;
  out.c1 = out.state.reg->intern({{0, 1}, {1, 1}, {2, 1}});
  out.c2 = out.state.reg->intern({{0, 1}, {2, 1}});
  out.c3 = out.state.reg->intern({{1, 1}, {2, 1}});
  out.state.y = {{out.c1, 1}, {out.c2, 1}, {out.c3, 2}};
  out.state.patterns.push_back({{{out.c2, 1}, {out.c3, 2}}, 0.5});
  out.state.patterns.push_back({{{out.c1, 1}, {out.c2, 1}}, 0.5});
  out.state.patterns.push_back({{{out.c1, 1}, {out.c3, 1}}, 0.5});
  return out;
}

inline long long rand_range(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random left-integral packing graph with rational multiplicities on a
// lattice (exact arithmetic end to end).
inline RationalPackingGraph random_rational_graph(std::mt19937_64& rng, int max_side = 8) {
  RationalPackingGraph g;
  int nl = static_cast<int>(rand_range(rng, 0, max_side));
  int nr = static_cast<int>(rand_range(rng, 0, max_side));
  for (int i = 0; i < nl; ++i)
    g.left.push_back({Rat(rand_range(rng, 1, 64), 64), rand_range(rng, 0, 4)});
  for (int i = 0; i < nr; ++i)
    g.right.push_back({Rat(rand_range(rng, 1, 64), 64), Rat(rand_range(rng, 0, 32), 8)});
  return g;
}

// Random packing state over a handful of container types; x values are
// dyadic (multiples of 1/16) so exact deficiency evaluation applies.
struct RandomStateOpts {
  int n_types = 4;
  int n_containers = 5;
  int n_patterns = 4;
  bool fractional_only = true;  // x in (0,1); otherwise x in (0, 3)
  long long denom = 256;
};

inline PackingState random_state(std::mt19937_64& rng, const RandomStateOpts& opts = {}) {
  PackingState state;
  std::set<Rat> sizes_set;
  while (static_cast<int>(sizes_set.size()) < opts.n_types)
    sizes_set.insert(Rat(rand_range(rng, 1, opts.denom), opts.denom));
  std::vector<Rat> sizes(sizes_set.rbegin(), sizes_set.rend());
  state.reg = std::make_shared<ContainerRegistry>(sizes);

  std::vector<int> cids;
  for (int c = 0; c < opts.n_containers; ++c) {
    std::vector<std::pair<int, long long>> counts;
    Rat total(0);
    int picks = static_cast<int>(rand_range(rng, 1, 3));
    for (int p = 0; p < picks; ++p) {
      int item = static_cast<int>(rand_range(rng, 0, opts.n_types - 1));
      long long cnt = rand_range(rng, 1, 2);
      if (total + sizes[item] * cnt > 1) continue;
      total += sizes[item] * cnt;
      counts.emplace_back(item, cnt);
    }
    if (counts.empty()) counts.emplace_back(opts.n_types - 1, 1);
    cids.push_back(state.reg->intern(counts));
  }

  for (int cid : cids)
    if (rng() % 2) state.y[cid] += rand_range(rng, 1, 3);
  if (state.y.empty()) state.y[cids[0]] = 1;

  for (int p = 0; p < opts.n_patterns; ++p) {
    PatternEntry entry;
    Rat total(0);
    std::map<int, long long> counts;
    int picks = static_cast<int>(rand_range(rng, 1, 3));
    for (int q = 0; q < picks; ++q) {
      int cid = cids[rand_range(rng, 0, static_cast<long long>(cids.size()) - 1)];
      long long cnt = rand_range(rng, 1, 2);
      if (total + state.reg->get(cid).size * cnt > 1) continue;
      total += state.reg->get(cid).size * cnt;
      counts[cid] += cnt;
    }
    if (counts.empty()) continue;
    entry.counts.assign(counts.begin(), counts.end());
    long long frac16 = rand_range(rng, 1, 15);
    entry.x = static_cast<double>(frac16) / 16.0 +
              (opts.fractional_only ? 0.0 : static_cast<double>(rand_range(rng, 0, 2)));
    state.patterns.push_back(std::move(entry));
  }
  if (state.patterns.empty()) {
    state.patterns.push_back({{{cids[0], 1}}, 0.5});
  }

  // Item demands: what y provides, plus noise.
  state.b = y_item_totals(state);
  for (auto& v : state.b) {
    long long noise = rand_range(rng, -1, 2);
    v = std::max<long long>(0, v + noise);
  }
  return state;
}

}  // namespace packlab::testing
