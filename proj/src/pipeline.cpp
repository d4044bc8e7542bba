#include "packlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "packlab/discrepancy.hpp"
#include "packlab/lp.hpp"
#include "packlab/rebuild.hpp"

namespace packlab {

std::string BinSolution::to_json() const {
  nlohmann::ordered_json j;
  j["bins"] = bins;
  nlohmann::ordered_json meta;
  meta["algorithm"] = algorithm;
  meta["seed"] = seed;
  meta["bins_used"] = bins_used();
  meta["opt_f"] = opt_f;
  meta["iterations"] = ledger.iterations.size();
  meta["stop_reason"] = ledger.stop_reason;
  meta["def_final"] = ledger.def_final;
  meta["x_total_final"] = ledger.x_total_final;
  meta["patterns_bought_frac"] = ledger.patterns_bought_frac;
  meta["extra_bins_leftovers"] = ledger.extra_bins_leftovers;
  meta["extra_bins_sprinkle"] = ledger.extra_bins_sprinkle;
  nlohmann::ordered_json iters = nlohmann::ordered_json::array();
  for (const auto& it : ledger.iterations) {
    iters.push_back({{"frac_before", it.frac_before},
                     {"frac_after", it.frac_after},
                     {"x_before", it.x_total_before},
                     {"x_after", it.x_total_after},
                     {"def_before", it.def_before},
                     {"def_after", it.def_after},
                     {"rebuild_bound", it.rebuild_bound},
                     {"lm_retries", it.lm_retries}});
  }
  meta["iteration_ledger"] = iters;
  j["meta"] = meta;
  return j.dump(2);
}

VerifyReport verify(const Instance& inst, const BinSolution& sol) {
  VerifyReport rep;
  std::vector<long long> counted(inst.num_types(), 0);
  for (size_t b = 0; b < sol.bins.size(); ++b) {
    Rat load(0);
    for (const auto& [type, count] : sol.bins[b]) {
      if (type < 0 || type >= inst.num_types() || count < 0) {
        rep.ok = false;
        rep.first_violation = "bin " + std::to_string(b) + " unknown type";
        return rep;
      }
      load += inst.sizes[type] * count;
      counted[type] += count;
    }
    if (load > 1) {
      rep.ok = false;
      rep.first_violation = "bin " + std::to_string(b) + " overfull " + to_string(load);
      return rep;
    }
  }
  for (int t = 0; t < inst.num_types(); ++t) {
    if (counted[t] < inst.mult[t]) {
      rep.ok = false;
      rep.first_violation =
          "type " + std::to_string(t) + " short by " + std::to_string(inst.mult[t] - counted[t]);
      return rep;
    }
    if (counted[t] > inst.mult[t]) {
      rep.ok = false;
      rep.first_violation =
          "type " + std::to_string(t) + " over by " + std::to_string(counted[t] - inst.mult[t]);
      return rep;
    }
  }
  return rep;
}

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

// First-fit one piece (an item multiset of known exact load).
void first_fit_piece(std::vector<Bin>& bins, const std::map<int, long long>& items, const Rat& load,
                     const std::vector<Rat>& sizes, long long* opened) {
  for (auto& b : bins) {
    if (b.load + load <= 1) {
      for (const auto& [t, c] : items) b.items[t] += c;
      b.load += load;
      return;
    }
  }
  Bin nb;
  nb.items = items;
  nb.load = load;
  bins.push_back(std::move(nb));
  if (opened) ++*opened;
}

}  // namespace

BinSolution greedy_pack(const Instance& inst) {
  BinSolution sol;
  sol.algorithm = "greedy";
  std::vector<Bin> bins;
  for (int t = 0; t < inst.num_types(); ++t)
    for (long long k = 0; k < inst.mult[t]; ++k)
      first_fit_piece(bins, {{t, 1}}, inst.sizes[t], inst.sizes, nullptr);
  sol.bins = bins_out(bins);
  return sol;
}

Preprocessed preprocess(const Instance& inst, const SolveParams& params) {
  (void)params;
  Preprocessed out;
  out.total = total_size(inst);
  if (out.total == 0) return out;

  // Large: s_i >= 1/U. When U <= 1 the threshold exceeds every size.
  std::vector<std::pair<int, long long>> large;  // (orig type, count)
  for (int t = 0; t < inst.num_types(); ++t) {
    bool is_large = inst.sizes[t] * out.total >= 1;
    if (is_large)
      large.emplace_back(t, inst.mult[t]);
    else
      out.small_items.emplace_back(t, inst.mult[t]);
  }
  if (large.empty()) return out;

  // Consecutive groups of total size in [2,3] (last may be lighter), each
  // rounded up to its largest member. Types may straddle group boundaries.
  std::map<Rat, std::vector<std::pair<int, long long>>, std::greater<Rat>> rounded;
  Rat acc(0);
  Rat group_top = inst.sizes[large.front().first];
  for (const auto& [t, count] : large) {
    for (long long k = 0; k < count; ++k) {
      if (acc == 0) group_top = inst.sizes[t];
      auto& members = rounded[group_top];
      if (!members.empty() && members.back().first == t)
        members.back().second += 1;
      else
        members.emplace_back(t, 1);
      acc += inst.sizes[t];
      if (acc >= 2) acc = 0;
    }
  }

  std::vector<std::pair<Rat, long long>> rounded_items;
  for (const auto& [size, members] : rounded) {
    long long total = 0;
    for (const auto& [t, c] : members) total += c;
    rounded_items.emplace_back(size, total);
    out.group_members.push_back(members);
  }
  out.large = make_instance(rounded_items, inst.name + "-rounded");
  // make_instance sorts descending and the map was already descending with
  // distinct keys, so group_members[r] matches out.large type r.
  return out;
}

long long sprinkle_small(std::vector<std::vector<std::pair<int, long long>>>& bins,
                         const Instance& inst,
                         const std::vector<std::pair<int, long long>>& small_items) {
  std::vector<Bin> work(bins.size());
  for (size_t b = 0; b < bins.size(); ++b) {
    for (const auto& [t, c] : bins[b]) {
      work[b].items[t] += c;
      work[b].load += inst.sizes[t] * c;
    }
    if (work[b].load > 1) throw PipelineError("sprinkle", "bin already overfull");
  }
  std::vector<std::pair<int, long long>> order = small_items;
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (inst.sizes[a.first] != inst.sizes[b.first]) return inst.sizes[a.first] > inst.sizes[b.first];
    return a.first < b.first;
  });
  long long opened = 0;
  for (const auto& [t, count] : order)
    for (long long k = 0; k < count; ++k) first_fit_piece(work, {{t, 1}}, inst.sizes[t], inst.sizes, &opened);
  bins = bins_out(work);
  return opened;
}

IterationOutcome one_iteration(PackingState& state, const SolveParams& params,
                               std::mt19937_64& rng) {
  IterationOutcome out;
  if (state.frac_count() == 0) {
    out.status = IterationOutcome::Status::already_integral;
    return out;
  }
  out.entry.frac_before = state.frac_count();
  out.entry.x_total_before = state.x_total();
  out.entry.def_before = deficiency(state);

  SplitState split = split_integral(state);
  PackingState frac = std::move(split.fractional);
  RebuildResult rebuild = rebuild_all(frac, params);
  out.entry.rebuild_bound = rebuild.log.bound_total;

  IntervalFamily family = build_intervals(rebuild.mats, params);
  const int n = static_cast<int>(frac.patterns.size());
  out.budget = family.budget;
  out.budget_limit = static_cast<double>(n) / 16.0;
  if (family.budget > out.budget_limit) {
    out.status = IterationOutcome::Status::budget_stop;
    return out;  // state untouched
  }

  std::vector<double> x_start(n);
  for (int i = 0; i < n; ++i) x_start[i] = frac.patterns[i].x;
  WalkResult walk = partial_color(x_start, family.constraints, params, rng);
  if (walk.status == WalkResult::Status::budget_rejected) {
    out.status = IterationOutcome::Status::budget_stop;
    return out;
  }
  if (walk.status == WalkResult::Status::retries_exhausted) {
    out.status = IterationOutcome::Status::lm_failed;
    out.entry.lm_retries = walk.retries_used;
    return out;
  }
  out.entry.lm_retries = walk.retries_used;

  for (int i = 0; i < n; ++i) frac.patterns[i].x = walk.x_end[i];
  frac.drop_zero_patterns();
  state = combine_states(split.integral, frac);
  out.entry.frac_after = state.frac_count();
  out.entry.x_total_after = state.x_total();
  out.entry.def_after = deficiency(state);
  out.status = IterationOutcome::Status::progressed;
  return out;
}

namespace {

// Packs an integral state into bins over the state's (rounded) item typing:
// buy the patterns, route containers into pattern slots and items into
// container slots by the greedy assignments, first-fit whatever is left.
std::vector<std::vector<std::pair<int, long long>>> materialize(const PackingState& state,
                                                                const std::vector<Rat>& sizes,
                                                                SolveLedger& ledger) {
  struct Phys {  // one physical container copy
    int cid;
    std::map<int, long long> received;
    Rat content{0};
    bool placed = false;
    int bin = -1;
  };
  std::vector<Phys> phys;
  std::map<int, std::vector<int>> phys_by_cid;
  for (const auto& [cid, yc] : state.y)
    for (long long k = 0; k < yc; ++k) {
      phys_by_cid[cid].push_back(static_cast<int>(phys.size()));
      phys.push_back(Phys{cid, {}, Rat(0), false, -1});
    }

  // Bins with container slots from the bought patterns.
  std::vector<Bin> bins;
  std::map<int, std::vector<int>> slot_pool;  // slot cid -> bin indices, one per slot
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    long long copies = std::llround(p.x);
    for (long long k = 0; k < copies; ++k) {
      int bidx = static_cast<int>(bins.size());
      bins.push_back(Bin{});
      for (const auto& [cid, c] : p.counts)
        for (long long s = 0; s < c; ++s) slot_pool[cid].push_back(bidx);
    }
  }

  // Containers into slots (integral greedy on the container graph).
  {
    std::vector<int> left_cids, right_cids;
    PackingGraph g;
    for (const auto& [cid, yc] : state.y)
      if (yc > 0) {
        left_cids.push_back(cid);
        g.left.push_back({state.reg->get(cid).size, yc});
      }
    for (const auto& [cid, pool] : slot_pool) {
      right_cids.push_back(cid);
      g.right.push_back({state.reg->get(cid).size, static_cast<double>(pool.size())});
    }
    auto assign = greedy_assignment(g);
    std::map<int, size_t> pool_pos;
    for (const auto& [u, v, f] : assign.flows) {
      long long count = std::llround(f);
      int c_from = left_cids[u], c_slot = right_cids[v];
      auto& pool = slot_pool[c_slot];
      auto& srcs = phys_by_cid[c_from];
      for (long long k = 0; k < count; ++k) {
        int ph = -1;
        for (int cand : srcs)
          if (!phys[cand].placed) {
            ph = cand;
            break;
          }
        size_t& pos = pool_pos[c_slot];
        if (ph < 0 || pos >= pool.size()) throw PipelineError("materialize", "slot accounting broke");
        phys[ph].placed = true;
        phys[ph].bin = pool[pos++];
      }
    }
  }

  // Items into container slots (integral greedy on the item graph); slots
  // aggregate per item type, the pool distributes them over physical copies.
  {
    PackingGraph g;
    std::vector<std::vector<std::pair<int, long long>>> slot_sources(sizes.size());
    std::vector<double> supply(sizes.size(), 0.0);
    for (const Phys& ph : phys) {
      for (const auto& [i, c] : state.reg->get(ph.cid).counts) supply[i] += static_cast<double>(c);
    }
    for (size_t ph = 0; ph < phys.size(); ++ph)
      for (const auto& [i, c] : state.reg->get(phys[ph].cid).counts)
        slot_sources[i].emplace_back(static_cast<int>(ph), c);
    std::vector<int> left_types, right_types;
    for (size_t i = 0; i < sizes.size(); ++i) {
      if (state.b[i] > 0) {
        left_types.push_back(static_cast<int>(i));
        g.left.push_back({sizes[i], state.b[i]});
      }
      if (supply[i] > 0) {
        right_types.push_back(static_cast<int>(i));
        g.right.push_back({sizes[i], supply[i]});
      }
    }
    auto assign = greedy_assignment(g);
    std::vector<size_t> src_pos(sizes.size(), 0);
    std::vector<long long> src_used(phys.size() ? sizes.size() * 0 : 0);
    std::vector<std::vector<long long>> taken(sizes.size());
    for (size_t i = 0; i < sizes.size(); ++i) taken[i].assign(slot_sources[i].size(), 0);
    for (const auto& [u, v, f] : assign.flows) {
      long long count = std::llround(f);
      int item = left_types[u], slot_item = right_types[v];
      auto& sources = slot_sources[slot_item];
      size_t& pos = src_pos[slot_item];
      while (count > 0) {
        if (pos >= sources.size()) throw PipelineError("materialize", "item slot accounting broke");
        auto [ph, cap] = sources[pos];
        long long free = cap - taken[slot_item][pos];
        long long take = std::min(free, count);
        if (take > 0) {
          phys[ph].received[item] += take;
          phys[ph].content += sizes[item] * take;
          taken[slot_item][pos] += take;
          count -= take;
        }
        if (taken[slot_item][pos] == cap) ++pos;
      }
    }

    // Items the assignment could not place.
    std::vector<long long> placed(sizes.size(), 0);
    for (const auto& [u, v, f] : assign.flows) placed[left_types[u]] += std::llround(f);
    // Fill bins with the contents of placed containers.
    for (const Phys& ph : phys)
      if (ph.placed)
        for (const auto& [t, c] : ph.received) {
          bins[ph.bin].items[t] += c;
          bins[ph.bin].load += sizes[t] * c;
        }

    // Leftovers: unplaced containers (with their contents) first, then loose
    // items, both size-descending, first-fit across every bin.
    std::vector<int> loose_containers;
    for (size_t ph = 0; ph < phys.size(); ++ph)
      if (!phys[ph].placed && !phys[ph].received.empty()) loose_containers.push_back(static_cast<int>(ph));
    std::sort(loose_containers.begin(), loose_containers.end(), [&](int a, int b) {
      if (phys[a].content != phys[b].content) return phys[a].content > phys[b].content;
      return a < b;
    });
    long long opened = 0;
    for (int ph : loose_containers)
      first_fit_piece(bins, phys[ph].received, phys[ph].content, sizes, &opened);
    for (size_t i = 0; i < sizes.size(); ++i) {
      long long rest = state.b[i] - placed[i];
      for (long long k = 0; k < rest; ++k)
        first_fit_piece(bins, {{static_cast<int>(i), 1}}, sizes[i], sizes, &opened);
    }
    ledger.extra_bins_leftovers = opened;
  }
  return bins_out(bins);
}

}  // namespace

BinSolution solve_paper(const Instance& inst, const SolveParams& params) {
  params.validate();
  BinSolution sol;
  sol.algorithm = "paper";
  sol.seed = params.rng_seed;
  std::mt19937_64 rng(params.rng_seed);

  if (inst.num_types() == 0) {
    sol.ledger.stop_reason = "empty instance";
    return sol;
  }
  try {
    sol.opt_f = solve_gg_lp(inst).objective;
  } catch (const LpError& e) {
    throw PipelineError("lp", e.what());
  }

  Preprocessed prep = preprocess(inst, params);
  std::vector<std::vector<std::pair<int, long long>>> rounded_bins;

  if (prep.large.num_types() > 0) {
    LpSolution lp;
    try {
      lp = solve_gg_lp(prep.large);
    } catch (const LpError& e) {
      throw PipelineError("lp", e.what());
    }
    sol.ledger.opt_f_rounded = lp.objective;
    PackingState state = starting_state(prep.large, lp);

    const double log_smin = std::log2(to_double(Rat(1) / prep.large.sizes.back()));
    const long long stop_frac =
        static_cast<long long>(std::ceil(params.frac_stop_c * std::max(log_smin, 1.0)));
    const double support_gate = params.support_L * std::max(log_smin, 1.0);
    const long long iter_cap =
        static_cast<long long>(std::ceil(std::log2(std::max(2, state.frac_count())))) + 8;

    for (long long iter = 0;; ++iter) {
      int nf = state.frac_count();
      if (nf == 0) {
        sol.ledger.stop_reason = "integral";
        break;
      }
      if (nf <= stop_frac) {
        sol.ledger.stop_reason = "frac threshold";
        break;
      }
      if (static_cast<double>(nf) < support_gate) {
        sol.ledger.stop_reason = "support gate";
        break;
      }
      if (iter >= iter_cap) {
        sol.ledger.stop_reason = "iteration cap";
        sol.ledger.iteration_cap_hit = true;
        break;
      }
      IterationOutcome outcome = one_iteration(state, params, rng);
      if (outcome.status == IterationOutcome::Status::budget_stop) {
        sol.ledger.stop_reason = "walk budget";
        break;
      }
      if (outcome.status == IterationOutcome::Status::lm_failed)
        throw PipelineError("walk", "partial coloring retries exhausted");
      if (outcome.status == IterationOutcome::Status::already_integral) {
        sol.ledger.stop_reason = "integral";
        break;
      }
      sol.ledger.iterations.push_back(outcome.entry);
    }

    // Buy every remaining fractional pattern.
    for (auto& p : state.patterns)
      if (p.x > 0 && p.x < 1) {
        p.x = 1.0;
        ++sol.ledger.patterns_bought_frac;
      }
    sol.ledger.x_total_final = state.x_total();
    sol.ledger.def_final = deficiency(state);
    rounded_bins = materialize(state, prep.large.sizes, sol.ledger);

    // Undo the rounding: every rounded slot takes one original item of its
    // group (original sizes never exceed the rounded size).
    std::vector<std::vector<std::pair<int, long long>>> pools = prep.group_members;
    std::vector<size_t> pool_pos(pools.size(), 0);
    for (auto& bin : rounded_bins) {
      std::map<int, long long> orig;
      for (const auto& [rtype, count] : bin) {
        long long need = count;
        auto& pool = pools[rtype];
        size_t& pos = pool_pos[rtype];
        while (need > 0) {
          if (pos >= pool.size()) throw PipelineError("materialize", "rounding undo pool exhausted");
          long long take = std::min(need, pool[pos].second);
          orig[pool[pos].first] += take;
          pool[pos].second -= take;
          need -= take;
          if (pool[pos].second == 0) ++pos;
        }
      }
      bin.assign(orig.begin(), orig.end());
    }
  }

  sol.bins = rounded_bins;
  sol.ledger.extra_bins_sprinkle = sprinkle_small(sol.bins, inst, prep.small_items);
  std::erase_if(sol.bins, [](const auto& b) { return b.empty(); });

  VerifyReport rep = verify(inst, sol);
  if (!rep.ok) throw PipelineError("verify", rep.first_violation);
  return sol;
}

}  // namespace packlab
