#pragma once

#include <functional>
#include <optional>

#include "promlin/eqsys.hpp"

namespace promlin {

/// Per-element candidate target sets after arc consistency, or nullopt when
/// some element has no candidate left. Signatures must match.
std::optional<std::vector<std::vector<int>>> arc_consistent_domains(
    const RelationalStructure& instance, const RelationalStructure& target);

/// Least homomorphism (instance order, ascending values) found by
/// backtracking with arc-consistency propagation. Throws BudgetExceeded.
std::optional<std::vector<int>> find_homomorphism(
    const RelationalStructure& instance, const RelationalStructure& target,
    std::uint64_t node_budget = 50'000'000);

/// Every homomorphism, in lexicographic order; `emit` returns false to stop.
void enumerate_homomorphisms(const RelationalStructure& instance,
                             const RelationalStructure& target,
                             const std::function<bool(const std::vector<int>&)>& emit,
                             std::uint64_t node_budget = 50'000'000);

bool hom_exists(const RelationalStructure& instance,
                const RelationalStructure& target,
                std::uint64_t node_budget = 50'000'000);

/// The categorical power A^n: universe = tuples (encoded in mixed radix,
/// first coordinate most significant), relations componentwise.
RelationalStructure structure_power(const RelationalStructure& a, int n,
                                    std::uint64_t size_budget = 1u << 22);

}  // namespace promlin
