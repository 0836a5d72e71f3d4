#include "orbit/knuth_bendix.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <sstream>

namespace orbit {

bool TermOrder::less(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        int ra = rank(a[i]), rb = rank(b[i]);
        if (ra != rb) return ra < rb;
    }
    return false;
}

namespace {

bool reducible_by(const Word& w, const OrientedRule& r) {
    return w.find(r.lhs) != std::string::npos;
}

Word reduce(const std::vector<OrientedRule>& rules, const std::vector<char>& active, Word w) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t pos = 0; pos < w.size() && !changed; ++pos) {
            for (std::size_t ri = 0; ri < rules.size(); ++ri) {
                if (!active[ri]) continue;
                const auto& r = rules[ri];
                if (pos + r.lhs.size() > w.size()) continue;
                if (w.compare(pos, r.lhs.size(), r.lhs) == 0) {
                    w.replace(pos, r.lhs.size(), r.rhs);
                    changed = true;
                    break;
                }
            }
        }
    }
    return w;
}

struct Completion {
    const TermOrder& order;
    int bound;
    std::vector<OrientedRule> rules;
    std::vector<char> active;
    std::deque<std::pair<Word, Word>> equations;
    std::deque<std::pair<int, int>> pairs;
    std::size_t work = 0;

    Completion(const TermOrder& o, int b) : order(o), bound(b) {}

    void budget() {
        if (++work > 5'000'000) throw BudgetError("Knuth-Bendix completion budget exceeded");
    }

    void add_equation(Word u, Word v) {
        budget();
        u = reduce(rules, active, std::move(u));
        v = reduce(rules, active, std::move(v));
        if (u == v) return;
        if (order.less(u, v)) std::swap(u, v);
        // u > v: new rule u -> v
        OrientedRule nr{std::move(u), std::move(v)};
        int id = static_cast<int>(rules.size());
        rules.push_back(nr);
        active.push_back(1);
        // Interreduce: rules whose lhs became reducible are re-queued as
        // equations; reducible rhs sides are renormalized in place.
        for (int j = 0; j < id; ++j) {
            if (!active[j]) continue;
            if (reducible_by(rules[j].lhs, rules[id])) {
                active[j] = 0;
                equations.emplace_back(rules[j].lhs, rules[j].rhs);
            } else if (reducible_by(rules[j].rhs, rules[id])) {
                rules[j].rhs = reduce(rules, active, rules[j].rhs);
            }
        }
        for (int j = 0; j <= id; ++j) {
            if (!active[j]) continue;
            pairs.emplace_back(id, j);
            if (j != id) pairs.emplace_back(j, id);
        }
    }

    // Critical pairs of (i, j): every superposed word where lhs_i and lhs_j
    // overlap, capped at the length bound.
    void overlap(int i, int j) {
        const std::string& l1 = rules[i].lhs;
        const std::string& l2 = rules[j].lhs;
        // suffix of l1 = prefix of l2, proper overlap
        std::size_t kmax = std::min(l1.size(), l2.size()) - 1;
        for (std::size_t k = 1; k <= kmax; ++k) {
            if (l1.compare(l1.size() - k, k, l2, 0, k) != 0) continue;
            std::size_t wlen = l1.size() + l2.size() - k;
            if (wlen > static_cast<std::size_t>(bound)) continue;
            Word w = l1 + l2.substr(k);
            Word u = w;
            u.replace(0, l1.size(), rules[i].rhs);
            Word v = w;
            v.replace(l1.size() - k, l2.size(), rules[j].rhs);
            equations.emplace_back(std::move(u), std::move(v));
        }
        // l2 contained in l1
        if (l2.size() < l1.size()) {
            for (std::size_t p = 0; p + l2.size() <= l1.size(); ++p) {
                if (l1.compare(p, l2.size(), l2) != 0) continue;
                Word u = rules[i].rhs;
                Word v = l1;
                v.replace(p, l2.size(), rules[j].rhs);
                equations.emplace_back(std::move(u), std::move(v));
            }
        }
    }

    void run() {
        while (!equations.empty() || !pairs.empty()) {
            budget();
            if (!equations.empty()) {
                auto [u, v] = std::move(equations.front());
                equations.pop_front();
                add_equation(std::move(u), std::move(v));
            } else {
                auto [i, j] = pairs.front();
                pairs.pop_front();
                if (active[i] && active[j]) overlap(i, j);
            }
        }
    }
};

}  // namespace

std::pair<ConfluentSystem, CompletionMetrics> complete(const RewriteSystem& sys,
                                                       const TermOrder& order, int max_rule_len) {
    for (char c : sys.alphabet.symbols) order.rank(c);  // validates coverage
    auto t0 = std::chrono::steady_clock::now();

    Completion comp(order, max_rule_len);
    auto seed_rule = [&](const std::string& lhs, const std::string& rhs) {
        if (static_cast<int>(lhs.size()) > max_rule_len)
            throw DataError("max_rule_len smaller than an input rule width");
        comp.equations.emplace_back(lhs, rhs);
    };
    // Completion derives a rewriting relation that applies anywhere in a
    // word, so rules pinned to fixed positions (offset templates, explicit
    // positioned rules) are out of scope: treating them as floating would
    // merge classes the pinned system keeps apart.
    for (const auto& t : sys.templates) {
        if (t.offset)
            throw DataError("Knuth-Bendix completion supports translation-invariant rules only");
        seed_rule(t.lhs, t.rhs);
    }
    if (!sys.explicit_rules.empty())
        throw DataError("Knuth-Bendix completion supports translation-invariant rules only");
    comp.run();

    ConfluentSystem cs;
    cs.order = order;
    cs.max_rule_len = max_rule_len;
    cs.confluent_within_bound = true;
    for (std::size_t i = 0; i < comp.rules.size(); ++i)
        if (comp.active[i]) cs.rules.push_back(comp.rules[i]);
    std::sort(cs.rules.begin(), cs.rules.end(), [&](const auto& a, const auto& b) {
        return order.less(a.lhs, b.lhs);
    });

    CompletionMetrics m;
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.rule_count = cs.rules.size();
    for (const auto& r : cs.rules) m.total_rule_size += r.lhs.size() + r.rhs.size();
    return {std::move(cs), m};
}

Word normal_form(const ConfluentSystem& cs, Word w) {
    std::vector<char> all(cs.rules.size(), 1);
    return reduce(cs.rules, all, std::move(w));
}

bool word_problem_kb(const ConfluentSystem& cs, const Word& w1, const Word& w2) {
    if (w1.size() != w2.size()) throw DataError("word lengths differ");
    return normal_form(cs, w1) == normal_form(cs, w2);
}

std::vector<BenchRow> benchmark_completion(const RewriteSystem& sys, const std::vector<int>& L_list,
                                           const std::vector<TermOrder>& orders) {
    std::vector<BenchRow> rows;
    for (int L : L_list) {
        for (const auto& ord : orders) {
            BenchRow row{L, ord.permutation, 0.0, 0, 0, false};
            try {
                // min-of-reps timing; reps shrink as cells get slow
                double best = std::numeric_limits<double>::infinity();
                CompletionMetrics last{};
                int reps = 0;
                double spent = 0;
                do {
                    auto [cs, m] = complete(sys, ord, L);
                    (void)cs;
                    best = std::min(best, m.wall_seconds);
                    spent += m.wall_seconds;
                    last = m;
                    ++reps;
                } while (reps < 5 && spent < 0.05);
                row.seconds = best;
                row.rule_count = last.rule_count;
                row.total_rule_size = last.total_rule_size;
            } catch (const std::exception&) {
                row.failed = true;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string benchmark_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "L,order,seconds,rule_count,total_rule_size\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g", r.seconds);
        out << r.L << ',' << r.order << ',' << (r.failed ? "nan" : buf) << ',' << r.rule_count
            << ',' << r.total_rule_size << '\n';
    }
    return out.str();
}

}  // namespace orbit
