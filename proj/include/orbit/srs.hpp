#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbit {

/// Error in user-supplied data (files, CLI arguments, malformed systems).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error while parsing a system description; 1-indexed position.
struct ParseError : DataError {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : DataError("parse error at " + std::to_string(line_) + ":" +
                    std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

/// A resource budget (node limit, dimension cap, search budget) was exceeded.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Alphabet {
    std::string symbols;  // distinct characters; index in this string is the local basis index

    int size() const { return static_cast<int>(symbols.size()); }
    int index_of(char c) const {
        auto p = symbols.find(c);
        return p == std::string::npos ? -1 : static_cast<int>(p);
    }
    bool contains(char c) const { return index_of(c) >= 0; }
    bool operator==(const Alphabet&) const = default;
};

using Word = std::string;

enum class Direction { forward, backward };

/// A rule pinned to specific sites of a fixed-length word.
/// Positions are 0-based and strictly increasing; the external file format
/// and CLI use 1-based positions, converted at the parser boundary.
struct RuleInstance {
    std::vector<int> positions;
    std::string lhs;
    std::string rhs;

    int width() const { return static_cast<int>(positions.size()); }
    int span_begin() const { return positions.front(); }
    int span_end() const { return positions.back(); }  // inclusive
    bool contiguous() const;
    bool operator==(const RuleInstance&) const = default;
};

/// A contiguous-window rule, placed either at every valid offset or at one
/// fixed offset (0-based internally).
struct RuleTemplate {
    std::string lhs;
    std::string rhs;
    std::optional<int> offset;

    int width() const { return static_cast<int>(lhs.size()); }
    bool operator==(const RuleTemplate&) const = default;
};

struct RewriteSystem {
    Alphabet alphabet;
    std::vector<RuleTemplate> templates;
    std::vector<RuleInstance> explicit_rules;
    std::string name;

    bool operator==(const RewriteSystem&) const = default;
};

/// Parse a system description (see docs in the implementation for the line
/// grammar). Throws ParseError / DataError on invalid input.
RewriteSystem parse_system(const std::string& text);

/// Inverse of parse_system: parse_system(serialize_system(s)) == s.
std::string serialize_system(const RewriteSystem& sys);

/// Throws DataError if any character of w is outside the system's alphabet.
void validate_word(const RewriteSystem& sys, const Word& w);

/// Expand every template at every valid offset (plus fitting explicit rules)
/// for words of length L. Deterministic order: template order, then offset,
/// then explicit rules.
std::vector<RuleInstance> instantiate(const RewriteSystem& sys, int L);

/// Apply a rule at its fixed positions. Returns the rewritten word if the
/// pattern (lhs for forward, rhs for backward) matches, nullopt otherwise.
/// Throws std::out_of_range if the rule does not fit the word.
std::optional<Word> apply_rule(const Word& w, const RuleInstance& rule, Direction dir);

struct Neighbor {
    int rule_index;  // index into the instance list used for the query
    Direction direction;
    Word word;
};

/// Every single-step rewrite of w, in both directions, duplicates kept
/// (each (instance, direction) match is one graph edge).
std::vector<Neighbor> neighbors(const std::vector<RuleInstance>& rules, const Word& w);
std::vector<Neighbor> neighbors(const RewriteSystem& sys, const Word& w);

/// The system whose rules substitute any single character with any other:
/// one equivalence class covering the whole configuration space.
RewriteSystem all_substitutions_system(const Alphabet& alphabet);

}  // namespace orbit
