#include "packlab/rebuild.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace packlab {

long long IncidenceMatrices::n1(int row) const {
  long long t = 0;
  for (long long v : a[row]) t += v;
  return t;
}

long long IncidenceMatrices::shadow_n1(int row) const {
  long long t = 0;
  for (long long v : shadow[row]) t += v;
  return t;
}

int IncidenceMatrices::row_of(int container_id) const {
  for (size_t r = 0; r < row_container.size(); ++r)
    if (row_container[r] == container_id) return static_cast<int>(r);
  return -1;
}

std::string RebuildLog::to_json() const {
  nlohmann::ordered_json j;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json js;
    js["op"] = s.op;
    js["class_log2"] = s.class_log2;
    if (s.op == "group") js["delta"] = s.delta;
    if (s.op == "glue") js["k"] = s.k;
    js["def_before"] = s.def_before;
    js["def_after"] = s.def_after;
    js["bound"] = s.bound;
    if (!s.groups.empty()) js["groups"] = s.groups;
    j["steps"].push_back(js);
  }
  j["bound_total"] = bound_total;
  return j.dump(2);
}

namespace {

std::map<int, double> pattern_mults(const PackingState& state) {
  std::map<int, double> m;
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    for (const auto& [cid, c] : p.counts) m[cid] += p.x * static_cast<double>(c);
  }
  return m;
}

void rewrite_pattern(PatternEntry& p, const std::map<int, int>& target,
                     const std::set<int>& deleted) {
  std::map<int, long long> counts;
  for (const auto& [cid, c] : p.counts) {
    if (deleted.count(cid)) continue;
    auto it = target.find(cid);
    counts[it == target.end() ? cid : it->second] += c;
  }
  p.counts.assign(counts.begin(), counts.end());
}

std::map<Rat, double, std::greater<Rat>> size_mass(const PackingState& state) {
  std::map<Rat, double, std::greater<Rat>> mass;
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    for (const auto& [cid, c] : p.counts)
      mass[state.reg->get(cid).size] += p.x * static_cast<double>(c);
  }
  return mass;
}

}  // namespace

void group_size_class(PackingState& state, int class_log2, double delta, RebuildStep* step) {
  if (delta <= 0) throw std::invalid_argument("grouping budget must be positive");
  if (step) {
    step->op = "group";
    step->class_log2 = class_log2;
    step->delta = delta;
    step->bound = 6 * delta;
    step->def_before = deficiency(state);
  }

  auto mults = pattern_mults(state);
  std::vector<std::pair<int, double>> scarce;  // (cid, weight) in this class
  for (const auto& [cid, m] : mults) {
    if (m <= 0) continue;
    const Container& c = state.reg->get(cid);
    if (size_class_log2(c.size) != class_log2) continue;
    double w = to_double(c.size) * m;
    if (w < delta) scarce.push_back({cid, w});
  }
  std::sort(scarce.begin(), scarce.end(), [&](const auto& a, const auto& b) {
    const Rat &sa = state.reg->get(a.first).size, &sb = state.reg->get(b.first).size;
    if (sa != sb) return sa > sb;
    return a.first < b.first;
  });

  // Greedy size-descending partition: close a group once its weight reaches
  // 2*delta (each member weighs < delta, so closed groups stay below 3*delta);
  // the open remainder is the deleted group.
  std::vector<std::vector<int>> groups;
  std::vector<int> current;
  double w = 0;
  for (const auto& [cid, weight] : scarce) {
    current.push_back(cid);
    w += weight;
    if (w >= 2 * delta) {
      groups.push_back(current);
      current.clear();
      w = 0;
    }
  }
  std::map<int, int> target;
  std::set<int> deleted;
  for (const auto& g : groups) {
    int smallest = g[0];
    for (int cid : g) {
      const Rat &s = state.reg->get(cid).size, &t = state.reg->get(smallest).size;
      if (s < t || (s == t && cid < smallest)) smallest = cid;
    }
    for (int cid : g)
      if (cid != smallest) target[cid] = smallest;
  }
  for (int cid : current) deleted.insert(cid);

  if (!target.empty() || !deleted.empty())
    for (auto& p : state.patterns)
      if (p.x > 0) rewrite_pattern(p, target, deleted);

  if (step) {
    step->def_after = deficiency(state);
    step->groups = groups;
    step->groups.push_back(current);
  }
}

double def_increase_bound(const PackingState& before, const PackingState& after, int class_log2) {
  const Rat sigma = pow2_class(class_log2);
  auto mb = size_mass(before), ma = size_mass(after);
  std::set<Rat, std::greater<Rat>> breaks;
  for (auto& [s, m] : mb) breaks.insert(s);
  for (auto& [s, m] : ma) breaks.insert(s);

  double t_sigma = 0;
  double pb = 0, pa = 0;
  auto ib = mb.begin();
  auto ia = ma.begin();
  for (const Rat& s : breaks) {
    while (ib != mb.end() && ib->first >= s) pb += (ib++)->second;
    while (ia != ma.end() && ia->first >= s) pa += (ia++)->second;
    double drop = pb - pa;
    if (s > sigma) {
      if (drop > 1e-7) throw std::invalid_argument("prefix dominance violated above sigma");
    } else {
      t_sigma = std::max(t_sigma, drop);
    }
  }
  return to_double(sigma) * t_sigma;
}

void glue_size_class(PackingState& state, int class_log2, long long k, RebuildStep* step) {
  if (k < 2) throw std::invalid_argument("glue arity must be at least 2");
  const Rat sigma = pow2_class(class_log2);
  if (step) {
    step->op = "glue";
    step->class_log2 = class_log2;
    step->k = k;
    step->bound = 3.0 * static_cast<double>(k) * to_double(sigma);
    step->def_before = deficiency(state);
  }

  // Red share of each slot type: the copies about to be merged, recorded
  // against the pre-rewrite patterns.
  std::map<int, double> slot_total, slot_red;
  for (const auto& p : state.patterns) {
    if (p.x <= 0) continue;
    for (const auto& [cid, c] : p.counts) {
      slot_total[cid] += p.x * static_cast<double>(c);
      if (size_class_log2(state.reg->get(cid).size) == class_log2)
        slot_red[cid] += p.x * static_cast<double>(k * (c / k));
    }
  }
  bool any = false;
  for (const auto& [cid, m] : slot_red)
    if (m > 0) any = true;
  if (!any) {
    if (step) step->def_after = step->def_before;
    return;
  }

  // Pattern rewrite: c -> c mod k plus floor(c/k) copies of the k-fold type.
  for (auto& p : state.patterns) {
    if (p.x <= 0) continue;
    std::map<int, long long> counts;
    for (const auto& [cid, c] : p.counts) {
      if (size_class_log2(state.reg->get(cid).size) == class_log2 && c >= k) {
        long long q = c / k;
        if (c - k * q > 0) counts[cid] += c - k * q;
        counts[state.reg->intern_scaled(cid, k)] += q;
      } else {
        counts[cid] += c;
      }
    }
    p.counts.assign(counts.begin(), counts.end());
  }

  // Rebuild y: split it against the red slots, then chunk the red containers
  // size-descending into k-fold supers; fewer than k leftovers keep their
  // type, as does the blue remainder. Item content is only rearranged.
  std::vector<int> left_cids;
  for (const auto& [cid, yc] : state.y)
    if (yc > 0) left_cids.push_back(cid);
  PackingGraph g;
  std::vector<double> right_red;
  for (int cid : left_cids) g.left.push_back({state.reg->get(cid).size, state.y.at(cid)});
  for (const auto& [cid, m] : slot_total) {
    g.right.push_back({state.reg->get(cid).size, m});
    right_red.push_back(slot_red.count(cid) ? std::min(slot_red[cid], m) : 0.0);
  }
  RedBlueSplit split = decompose_red_blue(g, right_red, sigma);

  std::map<int, long long> new_y;
  for (size_t u = 0; u < left_cids.size(); ++u)
    if (split.left_blue[u] > 0) new_y[left_cids[u]] += split.left_blue[u];

  std::vector<int> red_expanded;
  for (size_t u = 0; u < left_cids.size(); ++u)
    for (long long t = 0; t < split.left_red[u]; ++t) red_expanded.push_back(left_cids[u]);
  std::sort(red_expanded.begin(), red_expanded.end(), [&](int a, int b) {
    const Rat &sa = state.reg->get(a).size, &sb = state.reg->get(b).size;
    if (sa != sb) return sa > sb;
    return a < b;
  });
  size_t pos = 0;
  for (; pos + k <= red_expanded.size(); pos += k) {
    std::vector<std::pair<int, long long>> merged;
    int depth = 0;
    for (long long t = 0; t < k; ++t) {
      const Container& c = state.reg->get(red_expanded[pos + t]);
      depth = std::max(depth, c.glue_depth);
      for (const auto& [i, cnt] : c.counts) merged.emplace_back(i, cnt);
    }
    new_y[state.reg->intern(std::move(merged), depth + 1)] += 1;
  }
  for (; pos < red_expanded.size(); ++pos) new_y[red_expanded[pos]] += 1;  // leftovers
  state.y = std::move(new_y);

  if (step) step->def_after = deficiency(state);
}

long long glue_arity(int class_log2) {
  return static_cast<long long>(std::floor(std::pow(2.0, class_log2 / 4.0) + 1e-9));
}

void reassign_containers(PackingState& state, int class_log2, RebuildStep* step) {
  long long k = glue_arity(class_log2);
  if (k < 2) throw std::invalid_argument("reassign requires merge arity >= 2 (class too large)");
  glue_size_class(state, class_log2, k, step);
}

RebuildResult rebuild_all(PackingState& state, const SolveParams& params) {
  params.validate();
  RebuildResult out;
  out.mats.cols = static_cast<int>(state.patterns.size());
  if (state.patterns.empty()) return out;
  for (const auto& p : state.patterns)
    if (p.x <= 0 || p.x >= 1) throw std::invalid_argument("rebuild_all expects a fractional state");

  int lmax = 0;
  for (const auto& p : state.patterns)
    for (const auto& [cid, c] : p.counts)
      lmax = std::max(lmax, size_class_log2(state.reg->get(cid).size));

  const int cols = out.mats.cols;
  std::map<int, std::vector<long long>> shadow_rows;
  auto snapshot_class = [&](int l) {
    for (int col = 0; col < cols; ++col) {
      for (const auto& [cid, c] : state.patterns[col].counts) {
        if (size_class_log2(state.reg->get(cid).size) != l) continue;
        auto [it, fresh] = shadow_rows.try_emplace(cid, std::vector<long long>(cols, 0));
        it->second[col] += c;
      }
    }
  };

  for (int l = lmax; l >= 0; --l) {  // sigma = 2^-l, smallest class first
    RebuildStep gstep;
    bool small = l >= params.small_class_log2;
    group_size_class(state, l, small ? std::sqrt(to_double(pow2_class(l))) : params.delta_large,
                     &gstep);
    out.log.bound_total += gstep.bound;
    out.log.steps.push_back(std::move(gstep));
    snapshot_class(l);
    if (small && glue_arity(l) >= 2) {
      RebuildStep step;
      reassign_containers(state, l, &step);
      out.log.bound_total += step.bound;
      out.log.steps.push_back(std::move(step));
    }
  }

  // Assemble the matrices: a row for every container with shadow or final mass.
  std::map<int, std::vector<long long>> final_rows;
  for (int col = 0; col < cols; ++col)
    for (const auto& [cid, c] : state.patterns[col].counts) {
      auto [it, fresh] = final_rows.try_emplace(cid, std::vector<long long>(cols, 0));
      it->second[col] += c;
    }
  std::set<int> row_ids;
  for (const auto& [cid, row] : shadow_rows)
    for (long long v : row)
      if (v > 0) row_ids.insert(cid);
  for (const auto& [cid, row] : final_rows)
    for (long long v : row)
      if (v > 0) row_ids.insert(cid);

  std::vector<int> ids(row_ids.begin(), row_ids.end());
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const Rat &sa = state.reg->get(a).size, &sb = state.reg->get(b).size;
    if (sa != sb) return sa > sb;
    return a < b;
  });
  for (int cid : ids) {
    const Container& c = state.reg->get(cid);
    out.mats.row_container.push_back(cid);
    out.mats.row_size.push_back(c.size);
    out.mats.row_class.push_back(size_class_log2(c.size));
    out.mats.a.push_back(final_rows.count(cid) ? final_rows[cid]
                                               : std::vector<long long>(cols, 0));
    auto it = shadow_rows.find(cid);
    if (it == shadow_rows.end()) throw std::logic_error("container escaped the class sweep");
    out.mats.shadow.push_back(it->second);
    out.mats.max_glue_depth = std::max(out.mats.max_glue_depth, c.glue_depth);
  }
  for (size_t r = 0; r < out.mats.a.size(); ++r)
    for (int col = 0; col < cols; ++col)
      if (out.mats.shadow[r][col] < out.mats.a[r][col])
        throw std::logic_error("shadow matrix fell below the incidence matrix");
  return out;
}

PropertyReport check_properties(const IncidenceMatrices& mats, const SolveParams& params) {
  PropertyReport rep;
  const double tol = 1e-9;
  for (size_t r = 0; r < mats.a.size(); ++r) {
    const double sigma = std::pow(0.5, mats.row_class[r]);
    const double s = to_double(mats.row_size[r]);
    const bool small = mats.row_class[r] >= params.small_class_log2;
    const long long n1 = mats.n1(static_cast<int>(r));
    const long long sn1 = mats.shadow_n1(static_cast<int>(r));
    if (small) {
      if (sn1 > 0 && static_cast<double>(sn1) < std::sqrt(1.0 / sigma) - tol) {
        rep.a_ok = false;
        rep.violations.push_back("(A) small row " + std::to_string(r) + " shadow mass " +
                                 std::to_string(sn1));
      }
      const double cap = std::pow(1.0 / sigma, 0.25) + tol;
      for (long long v : mats.a[r])
        if (static_cast<double>(v) > cap) {
          rep.b_ok = false;
          rep.violations.push_back("(B) small row " + std::to_string(r) + " entry " +
                                   std::to_string(v));
          break;
        }
    } else if (n1 > 0 && s * static_cast<double>(n1) < params.delta_large - tol) {
      rep.a_ok = false;
      rep.violations.push_back("(A) large row " + std::to_string(r) + " weight " +
                               std::to_string(s * static_cast<double>(n1)));
    }
  }

  // (C): merged shadow incidences sit a factor ~k deeper per level while the
  // per-level size only shrinks by 2 from grouping, so level l contributes a
  // factor q^l with q = 2^{17/16} k^{-1/16}; 24 covers the analysis constants.
  double c_const;
  if (params.paper_constants) {
    c_const = 24.0;
  } else {
    long long kmin = std::max<long long>(glue_arity(params.small_class_log2), 2);
    const double q =
        std::pow(2.0, 17.0 / 16.0) * std::pow(static_cast<double>(kmin), -1.0 / 16.0);
    c_const = 0;
    double term = 1;
    for (int l = 0; l <= mats.max_glue_depth; ++l) {
      c_const += term;
      term *= q;
    }
  }
  double lhs = 0, rhs = 0;
  for (size_t r = 0; r < mats.a.size(); ++r) {
    const double s = to_double(mats.row_size[r]);
    lhs += static_cast<double>(mats.shadow_n1(static_cast<int>(r))) * std::pow(s, 17.0 / 16.0);
    rhs += static_cast<double>(mats.n1(static_cast<int>(r))) * s;
  }
  rep.c_lhs = lhs;
  rep.c_rhs = c_const * rhs;
  rep.c_constant = c_const;
  if (lhs > c_const * rhs + tol) {
    rep.c_ok = false;
    rep.violations.push_back("(C) shadow mass " + std::to_string(lhs) + " exceeds " +
                             std::to_string(c_const * rhs));
  }
  return rep;
}

}  // namespace packlab
