#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <orbit/instances.hpp>
#include <orbit/srs.hpp>

using namespace orbit;

static RewriteSystem window_chain() {
    return parse_system("alphabet: a b\nwindow: aaaa <-> baba\nwindow: baba <-> bbbb\n");
}

static RewriteSystem swap_mix() {
    return parse_system("alphabet: a b\nwindow: ab <-> ba\nwindow: aba <-> bbb\n");
}

TEST_CASE("parsing the two-template window systems") {
    auto sys = window_chain();
    CHECK(sys.alphabet.symbols == "ab");
    CHECK(sys.alphabet.size() == 2);
    REQUIRE(sys.templates.size() == 2);
    CHECK(sys.templates[0].lhs == "aaaa");
    CHECK(sys.templates[0].rhs == "baba");
    CHECK(!sys.templates[0].offset.has_value());
    CHECK(sys.explicit_rules.empty());

    auto fig = swap_mix();
    REQUIRE(fig.templates.size() == 2);
    CHECK(fig.templates[0].lhs == "ab");
    CHECK(fig.templates[1].rhs == "bbb");
}

TEST_CASE("directive variants: semicolons, comments, names, fixed offsets, explicit rules") {
    auto sys = parse_system("alphabet: a b; name: demo # trailing comment\n"
                            "# a full-line comment\n"
                            "window@2: ab <-> ba\n"
                            "rule: a@1 b@3 <-> b@1 a@3\n");
    CHECK(sys.name == "demo");
    REQUIRE(sys.templates.size() == 1);
    REQUIRE(sys.templates[0].offset.has_value());
    CHECK(*sys.templates[0].offset == 1);  // 1-indexed externally, 0-based inside
    REQUIRE(sys.explicit_rules.size() == 1);
    CHECK(sys.explicit_rules[0].positions == std::vector<int>{0, 2});
    CHECK(sys.explicit_rules[0].lhs == "ab");
    CHECK(sys.explicit_rules[0].rhs == "ba");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_system("alphabet: a b\nwindow: ab <-> ab\n"), DataError);  // identical sides
    CHECK_THROWS_AS(parse_system("alphabet: a a\nwindow: aa <-> ab\n"), DataError);  // duplicate symbol
    CHECK_THROWS_AS(parse_system("alphabet: a b\nwindow: ab <-> bca\n"), DataError); // unequal length
    CHECK_THROWS_AS(parse_system("alphabet: a b\nwindow: ac <-> ab\n"), DataError);  // foreign symbol
    CHECK_THROWS_AS(parse_system("alphabet: a b\nwhatever: x\n"), ParseError);       // unknown directive
    CHECK_THROWS_AS(parse_system(""), DataError);                                    // no alphabet
    try {
        parse_system("alphabet: a b\nwindow ab <-> ba\n");  // missing colon
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("serialize round-trips") {
    for (const auto& sys : test_corpus()) {
        CAPTURE(sys.name);
        auto back = parse_system(serialize_system(sys));
        CHECK(back == sys);
    }
}

TEST_CASE("instantiate counts and order") {
    auto sys = window_chain();
    CHECK(instantiate(sys, 4).size() == 2);  // each template at offset 0 only
    auto at5 = instantiate(sys, 5);
    REQUIRE(at5.size() == 4);  // offsets {0,1} for each template
    CHECK(at5[0].positions == std::vector<int>{0, 1, 2, 3});
    CHECK(at5[1].positions == std::vector<int>{1, 2, 3, 4});
    CHECK(at5[0].lhs == "aaaa");
    CHECK(at5[2].lhs == "baba");
    CHECK(instantiate(swap_mix(), 2).size() == 1);  // width-3 template has no offset
    CHECK(instantiate(sys, 3).empty());
}

TEST_CASE("apply_rule matches, rewrites, and inverts") {
    auto sys = window_chain();
    auto rules = instantiate(sys, 4);
    auto r1 = rules[0];  // aaaa <-> baba at offset 0
    auto fwd = apply_rule("aaaa", r1, Direction::forward);
    REQUIRE(fwd.has_value());
    CHECK(*fwd == "baba");
    auto back = apply_rule(*fwd, r1, Direction::backward);
    REQUIRE(back.has_value());
    CHECK(*back == "aaaa");
    CHECK(!apply_rule("abab", r1, Direction::forward).has_value());
    CHECK_THROWS_AS((void)apply_rule("aa", r1, Direction::forward), std::out_of_range);
}

TEST_CASE("neighbors: degree, emptiness, multiplicity bookkeeping") {
    auto sys = window_chain();
    auto nb = neighbors(sys, "baba");
    REQUIRE(nb.size() == 2);
    std::vector<Word> targets;
    for (const auto& n : nb) targets.push_back(n.word);
    std::sort(targets.begin(), targets.end());
    CHECK(targets == std::vector<Word>{"aaaa", "bbbb"});
    CHECK(neighbors(sys, "abab").empty());
    CHECK(neighbors(swap_mix(), "aaaa").empty());
}

TEST_CASE("edge symmetry over all words at L=6") {
    for (const auto& sys : {window_chain(), swap_mix()}) {
        int L = 6;
        auto rules = instantiate(sys, L);
        std::map<std::pair<Word, Word>, int> mult;
        for (long i = 0; i < (1L << L); ++i) {
            Word w(L, 'a');
            for (int k = 0; k < L; ++k)
                if (i >> k & 1) w[k] = 'b';
            for (const auto& n : neighbors(rules, w)) ++mult[{w, n.word}];
        }
        for (const auto& [edge, m] : mult) {
            auto rev = mult.find({edge.second, edge.first});
            REQUIRE(rev != mult.end());
            CHECK(rev->second == m);
        }
    }
}

TEST_CASE("length preservation and involution over random words") {
    auto sys = swap_mix();
    int L = 8;
    auto rules = instantiate(sys, L);
    std::uint64_t x = 12345;
    for (int t = 0; t < 200; ++t) {
        x = x * 6364136223846793005ull + 1442695040888963407ull;
        Word w(L, 'a');
        for (int k = 0; k < L; ++k)
            if (x >> (k + 7) & 1) w[k] = 'b';
        for (const auto& r : rules)
            for (auto dir : {Direction::forward, Direction::backward}) {
                auto out = apply_rule(w, r, dir);
                if (!out) continue;
                CHECK(out->size() == w.size());
                auto inv = apply_rule(*out, r,
                                      dir == Direction::forward ? Direction::backward
                                                                : Direction::forward);
                REQUIRE(inv.has_value());
                CHECK(*inv == w);
            }
    }
}

TEST_CASE("all-substitutions system connects everything by single-character changes") {
    auto sys = all_substitutions_system(Alphabet{"ab"});
    auto nb = neighbors(sys, "aaaa");
    CHECK(nb.size() == 4);  // one substitution per site
    for (const auto& n : nb) {
        int diff = 0;
        for (int k = 0; k < 4; ++k)
            if (n.word[k] != 'a') ++diff;
        CHECK(diff == 1);
    }
}

TEST_CASE("validate_word") {
    auto sys = window_chain();
    CHECK_NOTHROW(validate_word(sys, "abba"));
    CHECK_THROWS_AS(validate_word(sys, "abca"), DataError);
}

TEST_CASE("named constructors match their file definitions") {
    CHECK(window_chain_system().templates == window_chain().templates);
    CHECK(swap_mix_system().templates == swap_mix().templates);
    CHECK(test_corpus().size() == 8);  // two named + all-substitutions + five random
    for (const auto& sys : test_corpus()) {
        CHECK(!sys.name.empty());
        CHECK((sys.templates.size() + sys.explicit_rules.size()) > 0);
    }
}
