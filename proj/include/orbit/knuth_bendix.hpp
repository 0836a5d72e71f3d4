#pragma once

#include <string>
#include <utility>
#include <vector>

#include "orbit/srs.hpp"

namespace orbit {

/// Shortlex order: compare by length, then lexicographically under a fixed
/// permutation of the alphabet (permutation[0] is the smallest symbol).
struct TermOrder {
    std::string permutation;

    int rank(char c) const {
        auto p = permutation.find(c);
        if (p == std::string::npos) throw DataError(std::string("symbol '") + c + "' not ordered");
        return static_cast<int>(p);
    }
    bool less(const Word& a, const Word& b) const;
};

/// lhs -> rhs anywhere lhs occurs as a substring; rhs < lhs under the order.
struct OrientedRule {
    std::string lhs;
    std::string rhs;
    bool operator==(const OrientedRule&) const = default;
};

struct ConfluentSystem {
    std::vector<OrientedRule> rules;
    TermOrder order;
    int max_rule_len = 0;
    bool confluent_within_bound = false;  // confluent for words of length <= max_rule_len
};

struct CompletionMetrics {
    double wall_seconds = 0;
    std::size_t rule_count = 0;
    std::size_t total_rule_size = 0;  // sum of |lhs| + |rhs| over all rules
};

/// Length-bounded Knuth-Bendix completion. Rules wider than max_rule_len are
/// never generated (overlap windows are capped), which guarantees
/// termination; the result is confluent for words of length <= max_rule_len.
/// Only translation-invariant (unpinned window) rules are supported:
/// completion rewrites anywhere in a word, so offset-pinned templates and
/// explicit positioned rules are rejected.
std::pair<ConfluentSystem, CompletionMetrics> complete(const RewriteSystem& sys,
                                                       const TermOrder& order, int max_rule_len);

/// Reduce to the unique order-minimal representative (leftmost-innermost
/// scan, restart after each replacement).
Word normal_form(const ConfluentSystem& cs, Word w);

/// Two words are equivalent iff they share a normal form.
bool word_problem_kb(const ConfluentSystem& cs, const Word& w1, const Word& w2);

struct BenchRow {
    int L;
    std::string order;  // alphabet permutation used
    double seconds;
    std::size_t rule_count;
    std::size_t total_rule_size;
    bool failed = false;
};

/// Run complete() with max_rule_len = L for each L and order; timings are
/// the minimum over a few repetitions of the same cell.
std::vector<BenchRow> benchmark_completion(const RewriteSystem& sys, const std::vector<int>& L_list,
                                           const std::vector<TermOrder>& orders);

std::string benchmark_csv(const std::vector<BenchRow>& rows);

}  // namespace orbit
