#include "orbit/srs.hpp"

#include <algorithm>
#include <sstream>

namespace orbit {

bool RuleInstance::contiguous() const {
    for (size_t i = 1; i < positions.size(); ++i)
        if (positions[i] != positions[i - 1] + 1) return false;
    return true;
}

namespace {

// Line grammar (UTF-8 text, '#' starts a comment, one directive per line):
//   alphabet: <sym> <sym> ...
//   window: <lhs> <-> <rhs>
//   window@<k>: <lhs> <-> <rhs>         (fixed offset k, 1-indexed)
//   rule: <sym>@<pos> ... <-> <sym>@<pos> ...
//   name: <free text>

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

void check_pattern(const Alphabet& a, const std::string& pat, int line) {
    for (char c : pat)
        if (!a.contains(c))
            throw ParseError(std::string("symbol '") + c + "' not in alphabet", line, 1);
}

struct SideSpec {
    std::string pattern;
    std::vector<int> positions;  // empty for window directives
};

SideSpec parse_rule_side(const std::string& side, int line) {
    SideSpec out;
    for (const auto& tok : split_ws(side)) {
        auto at = tok.find('@');
        if (at != 1 || tok.size() < 3)
            throw ParseError("expected <sym>@<pos>, got '" + tok + "'", line, 1);
        int pos;
        try {
            pos = std::stoi(tok.substr(2));
        } catch (...) {
            throw ParseError("bad position in '" + tok + "'", line, 1);
        }
        if (pos < 1) throw ParseError("positions are 1-indexed", line, 1);
        out.pattern.push_back(tok[0]);
        out.positions.push_back(pos - 1);
    }
    return out;
}

}  // namespace

RewriteSystem parse_system(const std::string& text) {
    RewriteSystem sys;
    bool have_alphabet = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    // Directives may also be separated by ';' on one line (handy for tests).
    std::vector<std::pair<int, std::string>> directives;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream parts(raw);
        std::string piece;
        while (std::getline(parts, piece, ';')) directives.emplace_back(lineno, piece);
    }

    for (auto& [line, stmt] : directives) {
        auto first = stmt.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto colon = stmt.find(':');
        if (colon == std::string::npos)
            throw ParseError("expected '<directive>: ...'", line, static_cast<int>(first) + 1);
        std::string key = stmt.substr(first, colon - first);
        std::string rest = stmt.substr(colon + 1);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t' || rest.back() == '\r'))
            rest.pop_back();
        auto rfirst = rest.find_first_not_of(" \t");
        rest = rfirst == std::string::npos ? "" : rest.substr(rfirst);

        if (key == "alphabet") {
            if (have_alphabet) throw ParseError("duplicate alphabet directive", line, 1);
            for (const auto& tok : split_ws(rest)) {
                if (tok.size() != 1)
                    throw ParseError("alphabet symbols are single characters, got '" + tok + "'",
                                     line, 1);
                if (sys.alphabet.contains(tok[0]))
                    throw ParseError("duplicate alphabet symbol '" + tok + "'", line, 1);
                sys.alphabet.symbols.push_back(tok[0]);
            }
            if (sys.alphabet.size() < 2) throw ParseError("alphabet needs at least 2 symbols", line, 1);
            have_alphabet = true;
        } else if (key == "name") {
            sys.name = rest;
        } else if (key == "window" || key.rfind("window@", 0) == 0) {
            if (!have_alphabet) throw ParseError("alphabet must come first", line, 1);
            std::optional<int> offset;
            if (key.size() > 6) {
                try {
                    int k = std::stoi(key.substr(7));
                    if (k < 1) throw std::invalid_argument("");
                    offset = k - 1;
                } catch (...) {
                    throw ParseError("bad offset in '" + key + "'", line, 1);
                }
            }
            auto arrow = rest.find("<->");
            if (arrow == std::string::npos) throw ParseError("expected '<lhs> <-> <rhs>'", line, 1);
            auto lhs_toks = split_ws(rest.substr(0, arrow));
            auto rhs_toks = split_ws(rest.substr(arrow + 3));
            if (lhs_toks.size() != 1 || rhs_toks.size() != 1)
                throw ParseError("expected one pattern on each side of '<->'", line, 1);
            RuleTemplate t{lhs_toks[0], rhs_toks[0], offset};
            if (t.lhs.size() != t.rhs.size())
                throw ParseError("window patterns have unequal lengths", line, 1);
            if (t.lhs == t.rhs) throw ParseError("identical lhs and rhs patterns", line, 1);
            check_pattern(sys.alphabet, t.lhs, line);
            check_pattern(sys.alphabet, t.rhs, line);
            sys.templates.push_back(std::move(t));
        } else if (key == "rule") {
            if (!have_alphabet) throw ParseError("alphabet must come first", line, 1);
            auto arrow = rest.find("<->");
            if (arrow == std::string::npos) throw ParseError("expected '... <-> ...'", line, 1);
            SideSpec lhs = parse_rule_side(rest.substr(0, arrow), line);
            SideSpec rhs = parse_rule_side(rest.substr(arrow + 3), line);
            if (lhs.positions != rhs.positions)
                throw ParseError("rule sides must list the same positions", line, 1);
            if (lhs.positions.empty()) throw ParseError("empty rule", line, 1);
            for (size_t i = 1; i < lhs.positions.size(); ++i)
                if (lhs.positions[i] <= lhs.positions[i - 1])
                    throw ParseError("rule positions must be strictly increasing", line, 1);
            if (lhs.pattern == rhs.pattern)
                throw ParseError("identical lhs and rhs patterns", line, 1);
            check_pattern(sys.alphabet, lhs.pattern, line);
            check_pattern(sys.alphabet, rhs.pattern, line);
            sys.explicit_rules.push_back(RuleInstance{lhs.positions, lhs.pattern, rhs.pattern});
        } else {
            throw ParseError("unknown directive '" + key + "'", line, 1);
        }
    }
    if (!have_alphabet) throw ParseError("missing alphabet directive", std::max(lineno, 1), 1);
    return sys;
}

std::string serialize_system(const RewriteSystem& sys) {
    std::ostringstream out;
    out << "alphabet:";
    for (char c : sys.alphabet.symbols) out << ' ' << c;
    out << '\n';
    if (!sys.name.empty()) out << "name: " << sys.name << '\n';
    for (const auto& t : sys.templates) {
        if (t.offset)
            out << "window@" << (*t.offset + 1) << ": " << t.lhs << " <-> " << t.rhs << '\n';
        else
            out << "window: " << t.lhs << " <-> " << t.rhs << '\n';
    }
    for (const auto& r : sys.explicit_rules) {
        out << "rule:";
        for (int i = 0; i < r.width(); ++i) out << ' ' << r.lhs[i] << '@' << (r.positions[i] + 1);
        out << " <->";
        for (int i = 0; i < r.width(); ++i) out << ' ' << r.rhs[i] << '@' << (r.positions[i] + 1);
        out << '\n';
    }
    return out.str();
}

void validate_word(const RewriteSystem& sys, const Word& w) {
    if (w.empty()) throw DataError("empty word");
    for (char c : w)
        if (!sys.alphabet.contains(c))
            throw DataError(std::string("word symbol '") + c + "' not in alphabet");
}

std::vector<RuleInstance> instantiate(const RewriteSystem& sys, int L) {
    if (L < 1) throw DataError("word length must be >= 1");
    std::vector<RuleInstance> out;
    for (const auto& t : sys.templates) {
        int w = t.width();
        auto place = [&](int off) {
            RuleInstance r;
            r.positions.resize(w);
            for (int i = 0; i < w; ++i) r.positions[i] = off + i;
            r.lhs = t.lhs;
            r.rhs = t.rhs;
            out.push_back(std::move(r));
        };
        if (t.offset) {
            if (*t.offset + w <= L) place(*t.offset);
        } else {
            for (int off = 0; off + w <= L; ++off) place(off);
        }
    }
    for (const auto& r : sys.explicit_rules)
        if (r.span_end() < L) out.push_back(r);
    return out;
}

std::optional<Word> apply_rule(const Word& w, const RuleInstance& rule, Direction dir) {
    const std::string& from = dir == Direction::forward ? rule.lhs : rule.rhs;
    const std::string& to = dir == Direction::forward ? rule.rhs : rule.lhs;
    if (rule.span_end() >= static_cast<int>(w.size()))
        throw std::out_of_range("rule positions exceed word length");
    for (int i = 0; i < rule.width(); ++i)
        if (w[rule.positions[i]] != from[i]) return std::nullopt;
    Word out = w;
    for (int i = 0; i < rule.width(); ++i) out[rule.positions[i]] = to[i];
    return out;
}

std::vector<Neighbor> neighbors(const std::vector<RuleInstance>& rules, const Word& w) {
    std::vector<Neighbor> out;
    for (size_t i = 0; i < rules.size(); ++i) {
        for (Direction dir : {Direction::forward, Direction::backward}) {
            if (auto v = apply_rule(w, rules[i], dir))
                out.push_back(Neighbor{static_cast<int>(i), dir, std::move(*v)});
        }
    }
    return out;
}

std::vector<Neighbor> neighbors(const RewriteSystem& sys, const Word& w) {
    return neighbors(instantiate(sys, static_cast<int>(w.size())), w);
}

RewriteSystem all_substitutions_system(const Alphabet& alphabet) {
    RewriteSystem sys;
    sys.alphabet = alphabet;
    sys.name = "all-substitutions";
    for (int i = 0; i < alphabet.size(); ++i)
        for (int j = i + 1; j < alphabet.size(); ++j)
            sys.templates.push_back(RuleTemplate{std::string(1, alphabet.symbols[i]),
                                                 std::string(1, alphabet.symbols[j]),
                                                 std::nullopt});
    return sys;
}

}  // namespace orbit
