#pragma once

#include <optional>

#include "lcl/local_sim.hpp"
#include "lcl/problem.hpp"

namespace lcl {

// Sinkless orientation: half-edge outputs {in, out}; every node needs an
// incident "out"; the two half-edges of an edge carry opposite labels.
NeLclProblem sinkless_orientation();

// Centralized reference solver. In each component containing a cycle
// (self-loops and parallel edges count), the canonical cycle — closed by the
// smallest-index non-tree edge of the BFS forest grown from the smallest id —
// is oriented consistently; every other node is oriented toward its BFS
// parent rooted at the cycle. Tree components make the whole call unsolvable
// (nullopt). Returned labelings always pass verify.
std::optional<Labeling> so_oracle(const PortedMultigraph& g);

// Full-gather local solver: with radius T each node reconstructs whatever it
// can see and, if that covers its entire component, runs so_oracle on it and
// outputs its own part. Incomplete views and unsolvable components are
// declared failures. radius < 0 means T(n) = n (always enough).
LocalAlgorithm so_full_gather_solver(int radius = -1);

// Family T -> so_full_gather_solver(T), for measure_locality.
AlgorithmFamily so_family();

}  // namespace lcl
