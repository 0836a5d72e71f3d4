#pragma once

#include <cstdint>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

/// Two disjoint sets of mutually connected words of equal length.
struct InstanceSet {
    int L = 0;
    std::vector<Word> set1;
    std::vector<Word> set2;
};

/// Samples two distinct equivalence classes and diversifies each with random
/// rule walks; membership is verified via Knuth-Bendix normal forms.
/// Deterministic per seed. Throws DataError when two classes (or enough
/// distinct members) cannot be found within the attempt budget.
InstanceSet generate_instances(const RewriteSystem& sys, int L, int per_set, std::uint64_t seed);

/// Two-template system over {a,b}: adjacent swap ab<->ba plus aba<->bbb.
RewriteSystem swap_mix_system();

/// Two width-4 window templates over {a,b}: aaaa<->baba and baba<->bbbb.
RewriteSystem window_chain_system();

/// Seed-derived random window system (validated, deterministic per seed).
RewriteSystem random_system(std::uint64_t seed);

/// The fixed test corpus: the two named systems above, the all-substitutions
/// system, and five seeded random systems.
std::vector<RewriteSystem> test_corpus();

}  // namespace orbit
