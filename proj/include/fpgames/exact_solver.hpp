#pragma once

#include "fpgames/benchmarks.hpp"

namespace fpgames {

enum class SolveProof { kExhaustive, kBoundedSearch };

struct AllocationSolution {
  JointAction assignment;  // incident per ambulance
  double objective = 0.0;  // disaster_global_utility of the assignment
  SolveProof proof = SolveProof::kExhaustive;
};

// Enumerates every assignment in lexicographic order and keeps the first
// maximizer, so ties resolve to the lexicographically smallest assignment.
// Intended as the oracle for small instances; requires the search space
// num_incidents ^ num_ambulances to stay at or below `max_nodes`.
AllocationSolution solve_bruteforce(const DisasterInstance& instance,
                                    double max_nodes = 1e7);

// Depth-first branch and bound over ambulances in descending capacity order.
// The bound combines the best-case remaining travel (each unassigned
// ambulance at its closest incident) with the best-case remaining shortfall
// (all remaining capacity applied to the uncovered demand); both relax the
// true objective, so pruning never cuts off an optimum. Returns an optimal
// assignment; the reported objective is re-evaluated from scratch.
AllocationSolution solve_exact(const DisasterInstance& instance);

}  // namespace fpgames
