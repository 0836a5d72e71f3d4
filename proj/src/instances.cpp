#include "orbit/instances.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include "orbit/knuth_bendix.hpp"

namespace orbit {

namespace {

Word random_word(const Alphabet& a, int L, std::mt19937_64& rng) {
    Word w(static_cast<std::size_t>(L), a.symbols[0]);
    for (auto& c : w) c = a.symbols[static_cast<std::size_t>(rng() % a.size())];
    return w;
}

/// Collect up to `want` distinct class members by random rule walks.
std::vector<Word> walk_class(const RewriteSystem& sys, const Word& start, int want,
                             std::mt19937_64& rng) {
    auto insts = instantiate(sys, static_cast<int>(start.size()));
    std::vector<Word> found{start};
    std::unordered_set<Word> seen{start};
    if (insts.empty()) return found;
    for (int restart = 0; restart < 32 && static_cast<int>(found.size()) < want; ++restart) {
        Word cur = found[rng() % found.size()];
        for (int step = 0; step < 64 * want && static_cast<int>(found.size()) < want; ++step) {
            const auto& inst = insts[rng() % insts.size()];
            Direction dir = (rng() & 1) ? Direction::forward : Direction::backward;
            auto next = apply_rule(cur, inst, dir);
            if (!next) continue;
            cur = *next;
            if (seen.insert(cur).second) found.push_back(cur);
        }
    }
    return found;
}

}  // namespace

InstanceSet generate_instances(const RewriteSystem& sys, int L, int per_set, std::uint64_t seed) {
    if (L < 1 || per_set < 1) throw DataError("bad instance-set shape");
    TermOrder order{sys.alphabet.symbols};
    auto [cs, metrics] = complete(sys, order, L);
    (void)metrics;
    std::mt19937_64 rng(seed);

    const int budget = 4000;
    for (int attempt = 0; attempt < budget; ++attempt) {
        Word w1 = random_word(sys.alphabet, L, rng);
        Word nf1 = normal_form(cs, w1);
        Word w2, nf2;
        bool found2 = false;
        for (int inner = 0; inner < 200; ++inner) {
            w2 = random_word(sys.alphabet, L, rng);
            nf2 = normal_form(cs, w2);
            if (nf2 != nf1) {
                found2 = true;
                break;
            }
        }
        if (!found2) continue;

        auto fill = [&](const Word& w, const Word& nf) {
            auto members = walk_class(sys, w, per_set, rng);
            std::vector<Word> out;
            for (const auto& m : members) {
                if (normal_form(cs, m) != nf) throw DataError("internal: walk left the class");
                out.push_back(m);
                if (static_cast<int>(out.size()) == per_set) break;
            }
            return out;
        };
        auto s1 = fill(w1, nf1);
        auto s2 = fill(w2, nf2);
        if (static_cast<int>(s1.size()) < per_set || static_cast<int>(s2.size()) < per_set)
            continue;  // class too small to diversify; resample

        // explicit re-verification of the set invariants
        for (const auto& a : s1)
            for (const auto& b : s2)
                if (word_problem_kb(cs, a, b)) throw DataError("internal: sets not disjoint");
        InstanceSet out;
        out.L = L;
        out.set1 = std::move(s1);
        out.set2 = std::move(s2);
        return out;
    }
    throw DataError("could not find two distinct classes with enough members within the budget");
}

RewriteSystem swap_mix_system() {
    RewriteSystem s;
    s.alphabet.symbols = "ab";
    s.templates.push_back({"ab", "ba", std::nullopt});
    s.templates.push_back({"aba", "bbb", std::nullopt});
    s.name = "swap-mix";
    return s;
}

RewriteSystem window_chain_system() {
    RewriteSystem s;
    s.alphabet.symbols = "ab";
    s.templates.push_back({"aaaa", "baba", std::nullopt});
    s.templates.push_back({"baba", "bbbb", std::nullopt});
    s.name = "window-chain";
    return s;
}

RewriteSystem random_system(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RewriteSystem s;
    int d = 2 + static_cast<int>(rng() % 2);  // 2 or 3 symbols
    s.alphabet.symbols = std::string("abc").substr(0, static_cast<std::size_t>(d));
    int n_templates = 1 + static_cast<int>(rng() % 3);
    std::set<std::pair<std::string, std::string>> used;
    while (static_cast<int>(s.templates.size()) < n_templates) {
        int w = 2 + static_cast<int>(rng() % 3);
        std::string lhs, rhs;
        for (int i = 0; i < w; ++i) lhs += s.alphabet.symbols[static_cast<std::size_t>(rng() % d)];
        for (int i = 0; i < w; ++i) rhs += s.alphabet.symbols[static_cast<std::size_t>(rng() % d)];
        if (lhs == rhs) continue;
        if (!used.insert({std::min(lhs, rhs), std::max(lhs, rhs)}).second) continue;
        std::optional<int> offset;
        if (rng() % 4 == 0) offset = static_cast<int>(rng() % 3);  // occasional fixed offset
        s.templates.push_back({lhs, rhs, offset});
    }
    s.name = "random-" + std::to_string(seed);
    return s;
}

std::vector<RewriteSystem> test_corpus() {
    std::vector<RewriteSystem> out;
    out.push_back(swap_mix_system());
    out.push_back(window_chain_system());
    out.push_back(all_substitutions_system(Alphabet{"ab"}));
    for (std::uint64_t seed : {11u, 23u, 37u, 41u, 59u}) out.push_back(random_system(seed));
    return out;
}

}  // namespace orbit
