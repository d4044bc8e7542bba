#pragma once

#include <tuple>
#include <vector>

#include "packlab/rational.hpp"

namespace packlab {

// Bipartite size-threshold graph: an edge (u,v) exists iff size(u) <= size(v).
// Left multiplicities are integral; right multiplicities carry the scalar M
// (double along the pipeline, Rat in tests and oracles).
template <class M>
struct BasicPackingGraph {
  struct LeftNode {
    Rat size;
    long long mult;
  };
  struct RightNode {
    Rat size;
    M mult;
  };
  std::vector<LeftNode> left;
  std::vector<RightNode> right;

  Rat left_size_total() const {
    Rat t(0);
    for (const auto& u : left) t += u.size * u.mult;
    return t;
  }
};

using PackingGraph = BasicPackingGraph<double>;
using RationalPackingGraph = BasicPackingGraph<Rat>;

template <class M>
struct GraphAssignment {
  std::vector<std::tuple<int, int, M>> flows;  // (left index, right index, amount)
  M deficiency;                                // total unpacked left size
};

// Optimal assignment by the size-greedy rule: walk the right nodes (by
// default size-descending, ties by index) and feed each from the largest
// eligible left node with capacity remaining. Any right order attains the
// minimum for threshold graphs.
template <class M>
GraphAssignment<M> greedy_assignment(const BasicPackingGraph<M>& g,
                                     const std::vector<int>* right_order = nullptr);

template <class M>
M graph_deficiency(const BasicPackingGraph<M>& g);

// Integral split of the left multiplicities against a red/blue split of the
// right ones. Requires right_red[v] <= mult(v) and right_red[v] = 0 whenever
// size(v) > sigma. Guarantees def(G_red) = 0 and def(G_blue) <= def(G) + sigma.
struct RedBlueSplit {
  std::vector<long long> left_red;
  std::vector<long long> left_blue;
};

template <class M>
RedBlueSplit decompose_red_blue(const BasicPackingGraph<M>& g, const std::vector<M>& right_red,
                                const Rat& sigma);

// The red / blue halves as graphs (for deficiency checks).
template <class M>
BasicPackingGraph<M> red_subgraph(const BasicPackingGraph<M>& g, const RedBlueSplit& split,
                                  const std::vector<M>& right_red);
template <class M>
BasicPackingGraph<M> blue_subgraph(const BasicPackingGraph<M>& g, const RedBlueSplit& split,
                                   const std::vector<M>& right_red);

}  // namespace packlab
