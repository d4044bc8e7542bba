#include "packlab/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace packlab {

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long num = std::stoll(text.substr(0, slash));
    long long den = std::stoll(text.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("denominator must be positive: " + text);
    return Rat(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(std::stoll(text), 1);
  std::string whole = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  if (frac.size() > 18) throw std::invalid_argument("too many decimal digits: " + text);
  for (char c : frac)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad decimal: " + text);
  long long den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
  long long f = frac.empty() ? 0 : std::stoll(frac);
  bool neg = !whole.empty() && whole[0] == '-';
  long long num = (neg ? -1 : 1) * (std::abs(w) * den + f);
  return Rat(num, den);
}

bool is_power_of_two(const Rat& r) {
  if (r.numerator() != 1) return r.numerator() == r.denominator();
  long long d = r.denominator();
  return (d & (d - 1)) == 0;
}

int size_class_log2(const Rat& s) {
  if (s <= 0 || s > 1) throw std::invalid_argument("size class requires s in (0,1]");
  int l = 0;
  while (l < 62 && s * 2 <= Rat(1, 1LL << l)) ++l;  // while s <= sigma/2
  return l;
}

long long checked_lcm(long long a, long long b, long long limit) {
  long long g = boost::integer::gcd(a, b);
  long long l = a / g;
  if (l > limit / b) throw std::overflow_error("size denominator lattice exceeds limit");
  return l * b;
}

long long Instance::total_items() const {
  long long t = 0;
  for (long long m : mult) t += m;
  return t;
}

Instance make_instance(std::vector<std::pair<Rat, long long>> items, std::string name) {
  for (auto& [s, m] : items) {
    if (s <= 0 || s > 1) throw ParseError("size out of (0,1]: " + to_string(s));
    if (m < 1) throw ParseError("multiplicity must be >= 1");
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  Instance inst;
  inst.name = std::move(name);
  for (const auto& [s, m] : items) {
    if (!inst.sizes.empty() && inst.sizes.back() == s)
      inst.mult.back() += m;
    else {
      inst.sizes.push_back(s);
      inst.mult.push_back(m);
    }
  }
  return inst;
}

Instance parse_instance(const std::string& text, std::string name) {
  std::vector<std::pair<Rat, long long>> items;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string size_tok;
    if (!(ls >> size_tok)) continue;  // blank or comment-only line
    long long m = 0;
    std::string extra;
    if (!(ls >> m) || (ls >> extra)) throw ParseError("line " + std::to_string(lineno) + ": expected '<size> <multiplicity>'");
    Rat s;
    try {
      s = parse_rational(size_tok);
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (s <= 0 || s > 1) throw ParseError("line " + std::to_string(lineno) + ": size out of (0,1]");
    if (m < 1) throw ParseError("line " + std::to_string(lineno) + ": multiplicity must be >= 1");
    items.emplace_back(s, m);
  }
  return make_instance(std::move(items), std::move(name));
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  for (int i = 0; i < inst.num_types(); ++i)
    out << to_string(inst.sizes[i]) << " " << inst.mult[i] << "\n";
  return out.str();
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), path);
}

Rat total_size(const Instance& inst) {
  Rat t(0);
  for (int i = 0; i < inst.num_types(); ++i) t += inst.sizes[i] * inst.mult[i];
  return t;
}

long long common_denominator(const Instance& inst, long long limit) {
  long long d = 1;
  for (const Rat& s : inst.sizes) d = checked_lcm(d, s.denominator(), limit);
  return d;
}

GenKind parse_gen_kind(const std::string& kind) {
  if (kind == "uniform") return GenKind::uniform;
  if (kind == "three_partition") return GenKind::three_partition;
  if (kind == "discrete") return GenKind::discrete;
  throw std::invalid_argument("unknown generator kind: " + kind);
}

namespace {

// Engine-independent bounded draw (std::uniform_int_distribution is not
// pinned across standard library versions).
long long draw_range(std::mt19937_64& rng, long long lo, long long hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= bound);
  return lo + static_cast<long long>(v % span);
}

}  // namespace

Instance generate(GenKind kind, long long n, std::uint64_t seed, const GenParams& params) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  long long d = params.lattice;
  if (d < 8) throw std::invalid_argument("generate: lattice too coarse");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Rat, long long>> items;
  std::string name;
  switch (kind) {
    case GenKind::uniform: {
      name = "uniform";
      for (long long i = 0; i < n; ++i) items.emplace_back(Rat(draw_range(rng, 1, d), d), 1);
      break;
    }
    case GenKind::three_partition: {
      name = "three_partition";
      // strictly between 1/4 and 1/2 on the lattice
      long long lo = d / 4 + 1, hi = (d - 1) / 2;
      if ((d % 2) == 0) hi = d / 2 - 1;
      for (long long i = 0; i < n; ++i) items.emplace_back(Rat(draw_range(rng, lo, hi), d), 1);
      break;
    }
    case GenKind::discrete: {
      name = "discrete";
      int k = std::max(1, params.distinct);
      std::set<long long> chosen;
      while (static_cast<int>(chosen.size()) < k) chosen.insert(draw_range(rng, 1, d));
      std::vector<long long> support(chosen.begin(), chosen.end());
      for (long long i = 0; i < n; ++i) {
        long long pick = draw_range(rng, 0, static_cast<long long>(support.size()) - 1);
        items.emplace_back(Rat(support[pick], d), 1);
      }
      break;
    }
  }
  name += "-n" + std::to_string(n) + "-s" + std::to_string(seed);
  return make_instance(std::move(items), name);
}

void SolveParams::validate() const {
  if (small_class_log2 < 0) throw std::invalid_argument("small_class_log2 must be >= 0");
  if (delta_large <= 0 || budget_K <= 0 || support_L <= 0 || frac_stop_c <= 0)
    throw std::invalid_argument("thresholds must be positive");
  if (lm_gamma <= 0 || lm_c_t <= 0 || lm_retries < 0) throw std::invalid_argument("bad walk parameters");
}

}  // namespace packlab
