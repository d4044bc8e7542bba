#include "packlab/containers.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace packlab {

ContainerRegistry::ContainerRegistry(std::vector<Rat> item_sizes)
    : item_sizes_(std::move(item_sizes)) {
  for (const Rat& s : item_sizes_)
    if (s <= 0 || s > 1) throw std::invalid_argument("item size out of (0,1]");
}

int ContainerRegistry::intern(std::vector<std::pair<int, long long>> counts, int glue_depth) {
  std::sort(counts.begin(), counts.end());
  std::vector<std::pair<int, long long>> canon;
  for (const auto& [i, c] : counts) {
    if (c == 0) continue;
    if (c < 0 || i < 0 || i >= static_cast<int>(item_sizes_.size()))
      throw std::invalid_argument("bad container counts");
    if (!canon.empty() && canon.back().first == i)
      canon.back().second += c;
    else
      canon.emplace_back(i, c);
  }
  auto it = index_.find(canon);
  if (it != index_.end()) {
    Container& c = containers_[it->second];
    c.glue_depth = std::max(c.glue_depth, glue_depth);
    return it->second;
  }
  Rat size(0);
  for (const auto& [i, c] : canon) size += item_sizes_[i] * c;
  if (size > 1) throw std::invalid_argument("container size exceeds 1: " + to_string(size));
  int id = static_cast<int>(containers_.size());
  containers_.push_back(Container{canon, size, glue_depth});
  index_[canon] = id;
  return id;
}

int ContainerRegistry::intern_singleton(int item) { return intern({{item, 1}}); }

int ContainerRegistry::intern_scaled(int id, long long k) {
  const Container& c = containers_[id];
  std::vector<std::pair<int, long long>> scaled = c.counts;
  for (auto& [i, cnt] : scaled) cnt *= k;
  return intern(std::move(scaled), c.glue_depth + 1);
}

long long PatternEntry::count_of(int cid) const {
  for (const auto& [id, c] : counts)
    if (id == cid) return c;
  return 0;
}

Rat PackingState::pattern_size(const PatternEntry& p) const {
  Rat total(0);
  for (const auto& [id, c] : p.counts) total += reg->get(id).size * c;
  return total;
}

double PackingState::x_total() const {
  double t = 0;
  for (const auto& p : patterns) t += p.x;
  return t;
}

int PackingState::support_size() const {
  int n = 0;
  for (const auto& p : patterns)
    if (p.x > 0) ++n;
  return n;
}

int PackingState::frac_count() const {
  int n = 0;
  for (const auto& p : patterns)
    if (p.x > 0 && p.x < 1) ++n;
  return n;
}

void PackingState::drop_zero_patterns() {
  std::erase_if(patterns, [](const PatternEntry& p) { return p.x <= 0; });
}

double mult_in_x(const PackingState& state, int container_id) {
  double total = 0;
  for (const auto& p : state.patterns) total += p.x * static_cast<double>(p.count_of(container_id));
  return total;
}

namespace {

// Aggregated slot supplies; equal-size right nodes merge freely without
// changing the deficiency.
template <class M>
BasicPackingGraph<M> build_g1_impl(const PackingState& state) {
  const auto& sizes = state.reg->item_sizes();
  BasicPackingGraph<M> g;
  std::vector<M> supply(sizes.size(), M(0));
  for (const auto& [cid, yc] : state.y) {
    if (yc == 0) continue;
    for (const auto& [i, c] : state.reg->get(cid).counts) supply[i] += M(yc * c);
  }
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (state.b[i] > 0) g.left.push_back({sizes[i], state.b[i]});
    if (supply[i] > M(0)) g.right.push_back({sizes[i], supply[i]});
  }
  return g;
}

template <class M>
M x_value(const PatternEntry& p);
template <>
double x_value<double>(const PatternEntry& p) {
  return p.x;
}
template <>
Rat x_value<Rat>(const PatternEntry& p) {
  return rat_from_dyadic(p.x);
}

template <class M>
BasicPackingGraph<M> build_g2_impl(const PackingState& state) {
  BasicPackingGraph<M> g;
  std::map<int, M> slots;
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    M xv = x_value<M>(p);
    for (const auto& [cid, c] : p.counts) {
      auto [it, fresh] = slots.try_emplace(cid, M(0));
      it->second += xv * M(c);
    }
  }
  for (const auto& [cid, yc] : state.y)
    if (yc > 0) g.left.push_back({state.reg->get(cid).size, yc});
  for (const auto& [cid, m] : slots)
    if (m > M(0)) g.right.push_back({state.reg->get(cid).size, m});
  return g;
}

}  // namespace

Rat rat_from_dyadic(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  Rat r(0);
  long long den = 1;
  double scaled = v;
  while (scaled != std::floor(scaled)) {
    if (den > (1LL << 40)) throw std::invalid_argument("value is not a small dyadic rational");
    scaled *= 2;
    den *= 2;
  }
  return Rat(static_cast<long long>(scaled), den);
}

PackingGraph build_g1(const PackingState& state) { return build_g1_impl<double>(state); }
PackingGraph build_g2(const PackingState& state) { return build_g2_impl<double>(state); }
RationalPackingGraph build_g1_exact(const PackingState& state) { return build_g1_impl<Rat>(state); }
RationalPackingGraph build_g2_exact(const PackingState& state) { return build_g2_impl<Rat>(state); }

double deficiency(const PackingState& state) {
  return graph_deficiency(build_g1(state)) + graph_deficiency(build_g2(state));
}

Rat deficiency_exact(const PackingState& state) {
  return graph_deficiency(build_g1_exact(state)) + graph_deficiency(build_g2_exact(state));
}

std::vector<long long> y_item_totals(const PackingState& state) {
  std::vector<long long> totals(state.reg->item_sizes().size(), 0);
  for (const auto& [cid, yc] : state.y)
    for (const auto& [i, c] : state.reg->get(cid).counts) totals[i] += yc * c;
  return totals;
}

PackingState starting_state(const Instance& inst, const LpSolution& lp) {
  PackingState state;
  state.reg = std::make_shared<ContainerRegistry>(inst.sizes);
  state.b = inst.mult;
  for (int i = 0; i < inst.num_types(); ++i) {
    int cid = state.reg->intern_singleton(i);
    state.y[cid] = inst.mult[i];
  }
  for (size_t k = 0; k < lp.columns.size(); ++k) {
    PatternEntry entry;
    for (const auto& [i, c] : lp.columns[k].counts)
      entry.counts.emplace_back(state.reg->intern_singleton(i), c);
    std::sort(entry.counts.begin(), entry.counts.end());
    double v = lp.values[k];
    if (std::abs(v - std::round(v)) < 1e-9) v = std::round(v);  // snap LP dust
    entry.x = v;
    if (entry.x > 0) state.patterns.push_back(std::move(entry));
  }
  return state;
}

SplitState split_integral(const PackingState& state) {
  SplitState out;
  out.integral.reg = state.reg;
  out.fractional.reg = state.reg;

  // G2 with red = slots contributed by the integral floors. Both colours are
  // keyed by container id so the optimal flows can be read back per type.
  std::map<int, double> red_slots, blue_slots;
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    double fl = std::floor(p.x);
    for (const auto& [cid, c] : p.counts) {
      red_slots[cid] += fl * static_cast<double>(c);
      blue_slots[cid] += (p.x - fl) * static_cast<double>(c);
    }
  }
  std::vector<int> left_cids;
  for (const auto& [cid, yc] : state.y)
    if (yc > 0) left_cids.push_back(cid);
  std::set<int> slot_cids;
  for (const auto& [cid, m] : red_slots) slot_cids.insert(cid);
  for (const auto& [cid, m] : blue_slots) slot_cids.insert(cid);

  PackingGraph g;
  std::vector<bool> is_red;
  for (int cid : left_cids) g.left.push_back({state.reg->get(cid).size, state.y.at(cid)});
  for (int cid : slot_cids) {
    g.right.push_back({state.reg->get(cid).size, red_slots.count(cid) ? red_slots[cid] : 0.0});
    is_red.push_back(true);
  }
  for (int cid : slot_cids) {
    g.right.push_back({state.reg->get(cid).size, blue_slots.count(cid) ? blue_slots[cid] : 0.0});
    is_red.push_back(false);
  }
  std::vector<int> order(g.right.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (is_red[a] != is_red[b]) return static_cast<bool>(is_red[a]);
    if (g.right[a].size != g.right[b].size) return g.right[a].size > g.right[b].size;
    return a < b;
  });
  auto assign = greedy_assignment(g, &order);

  std::map<int, double> red_flow;
  for (const auto& [u, v, f] : assign.flows)
    if (is_red[v] && f > 0) red_flow[left_cids[u]] += f;
  std::map<int, long long> y_hat;
  for (const auto& [cid, f] : red_flow) {
    long long r = static_cast<long long>(std::llround(f));
    if (r > 0) y_hat[cid] = r;
  }

  // G1 with red = slots inside y-hat, processed first; the red flows give
  // the integral item demand b-hat.
  const auto& sizes = state.reg->item_sizes();
  std::vector<double> red_supply(sizes.size(), 0.0), blue_supply(sizes.size(), 0.0);
  for (const auto& [cid, yc] : state.y) {
    long long red = y_hat.count(cid) ? y_hat[cid] : 0;
    for (const auto& [i, c] : state.reg->get(cid).counts) {
      red_supply[i] += static_cast<double>(red * c);
      blue_supply[i] += static_cast<double>((yc - red) * c);
    }
  }
  PackingGraph g1;
  std::vector<bool> red1;
  for (size_t i = 0; i < sizes.size(); ++i) g1.left.push_back({sizes[i], state.b[i]});
  for (size_t i = 0; i < sizes.size(); ++i) {
    g1.right.push_back({sizes[i], red_supply[i]});
    red1.push_back(true);
  }
  for (size_t i = 0; i < sizes.size(); ++i) {
    g1.right.push_back({sizes[i], blue_supply[i]});
    red1.push_back(false);
  }
  std::vector<int> order1(g1.right.size());
  for (size_t i = 0; i < order1.size(); ++i) order1[i] = static_cast<int>(i);
  std::sort(order1.begin(), order1.end(), [&](int a, int b) {
    if (red1[a] != red1[b]) return static_cast<bool>(red1[a]);
    if (g1.right[a].size != g1.right[b].size) return g1.right[a].size > g1.right[b].size;
    return a < b;
  });
  auto assign1 = greedy_assignment(g1, &order1);
  std::vector<long long> b_hat(sizes.size(), 0);
  for (const auto& [u, v, f] : assign1.flows)
    if (red1[v] && f > 0) b_hat[u] += static_cast<long long>(std::llround(f));

  out.integral.b = b_hat;
  out.fractional.b.resize(sizes.size());
  for (size_t i = 0; i < sizes.size(); ++i) out.fractional.b[i] = state.b[i] - b_hat[i];

  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    double fl = std::floor(p.x);
    if (fl >= 1) out.integral.patterns.push_back({p.counts, fl});
    if (p.x - fl > 0) out.fractional.patterns.push_back({p.counts, p.x - fl});
  }
  for (const auto& [cid, yc] : state.y) {
    long long red = y_hat.count(cid) ? y_hat[cid] : 0;
    if (red > 0) out.integral.y[cid] = red;
    if (yc - red > 0) out.fractional.y[cid] = yc - red;
  }
  return out;
}

PackingState combine_states(const PackingState& a, const PackingState& b) {
  if (a.reg != b.reg) throw std::invalid_argument("combine_states: registries differ");
  PackingState out;
  out.reg = a.reg;
  out.b.resize(a.b.size());
  for (size_t i = 0; i < a.b.size(); ++i) out.b[i] = a.b[i] + b.b[i];
  out.patterns = a.patterns;
  out.patterns.insert(out.patterns.end(), b.patterns.begin(), b.patterns.end());
  out.y = a.y;
  for (const auto& [cid, yc] : b.y) out.y[cid] += yc;
  return out;
}

namespace {

// Mass at size >= s, evaluated at every breakpoint size of either state.
std::vector<std::pair<Rat, double>> size_mass_x(const PackingState& s) {
  std::map<Rat, double, std::greater<Rat>> acc;
  for (const auto& p : s.patterns) {
    if (p.x <= 0) continue;
    for (const auto& [cid, c] : p.counts) acc[s.reg->get(cid).size] += p.x * static_cast<double>(c);
  }
  return {acc.begin(), acc.end()};
}

}  // namespace

bool x_succeq(const PackingState& tilde, const PackingState& base, double tol) {
  auto mt = size_mass_x(tilde), mb = size_mass_x(base);
  std::set<Rat, std::greater<Rat>> breaks;
  for (auto& [s, m] : mt) breaks.insert(s);
  for (auto& [s, m] : mb) breaks.insert(s);
  for (const Rat& s : breaks) {
    double pt = 0, pb = 0;
    for (auto& [sz, m] : mt)
      if (sz >= s) pt += m;
    for (auto& [sz, m] : mb)
      if (sz >= s) pb += m;
    if (pt < pb - tol) return false;
  }
  return true;
}

bool y_preceq(const PackingState& tilde, const PackingState& base) {
  if (tilde.reg != base.reg) throw std::invalid_argument("y_preceq: registries differ");
  std::set<Rat, std::greater<Rat>> breaks;
  for (const auto& [cid, yc] : tilde.y)
    if (yc > 0) breaks.insert(tilde.reg->get(cid).size);
  for (const auto& [cid, yc] : base.y)
    if (yc > 0) breaks.insert(base.reg->get(cid).size);
  for (const Rat& s : breaks) {
    long long pt = 0, pb = 0;
    for (const auto& [cid, yc] : tilde.y)
      if (tilde.reg->get(cid).size >= s) pt += yc;
    for (const auto& [cid, yc] : base.y)
      if (base.reg->get(cid).size >= s) pb += yc;
    if (pt > pb) return false;
  }
  return true;
}

std::string state_to_json(const PackingState& state) {
  nlohmann::ordered_json j;
  j["containers"] = nlohmann::ordered_json::array();
  for (int id = 0; id < state.reg->count(); ++id) {
    const Container& c = state.reg->get(id);
    nlohmann::ordered_json jc;
    jc["id"] = id;
    jc["size"] = to_string(c.size);
    jc["counts"] = c.counts;
    j["containers"].push_back(jc);
  }
  j["patterns"] = nlohmann::ordered_json::array();
  for (const auto& p : state.patterns) {
    nlohmann::ordered_json jp;
    jp["counts"] = p.counts;
    jp["x"] = p.x;
    j["patterns"].push_back(jp);
  }
  j["y"] = nlohmann::ordered_json::array();
  for (const auto& [cid, yc] : state.y) j["y"].push_back({cid, yc});
  j["b"] = state.b;
  return j.dump(2);
}

}  // namespace packlab
