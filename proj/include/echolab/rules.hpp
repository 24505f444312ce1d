#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "echolab/annotation.hpp"
#include "echolab/textproc.hpp"

namespace echolab {

/// One element of a token pattern, matched against a token's NORM.
struct TokenMatcher {
    enum class Kind { Literal, Alternation, Wildcard };
    Kind kind = Kind::Literal;
    bool optional = false;
    std::vector<std::string> options;  // lowercased; single entry for Literal

    bool accepts(const std::string& norm) const;
};

struct RulePattern {
    std::string characteristic_id;
    Severity label = Severity::Normal;
    std::vector<TokenMatcher> matchers;
    int min_tokens = 0;  // non-optional matcher count
    int max_tokens = 0;  // total matcher count
    int index = 0;       // position in the rule file; earlier wins ties

    /// True when the matcher sequence consumes exactly the given NORMs.
    bool matches_window(const Token* tokens, int count) const;
};

class RuleSet {
public:
    RuleSet() = default;
    explicit RuleSet(std::vector<RulePattern> patterns);

    const std::vector<RulePattern>& patterns() const { return patterns_; }
    bool empty() const { return patterns_.empty(); }
    std::map<std::string, int> pattern_counts() const;

    /// Pattern indices worth testing for a window starting with this NORM,
    /// merged with patterns whose first matcher is not a fixed literal.
    std::vector<int> candidates_for(const std::string& first_norm) const;

private:
    std::vector<RulePattern> patterns_;
    std::map<std::string, std::vector<int>> by_first_literal_;
    std::vector<int> general_;  // wildcard/optional-first patterns
};

/// Window length cap for the scan, aligned with the span suggester range.
inline constexpr int kMaxRuleWindow = 25;

/// Parses `characteristic TAB label TAB pattern` lines. Pattern tokens are
/// space-separated: literal, `(a|b)` alternation, `*` wildcard, `?tok`
/// optional. Throws ValidationError with line numbers.
RuleSet compile_rules(std::string_view rule_text, const Ontology& ontology);
RuleSet load_rules(const std::string& path, const Ontology& ontology);

/// Greedy dictionary lookup: every token window is tested against the
/// patterns in file order and the first hit labels the window; per
/// characteristic, overlaps resolve to the longest match (ties: earliest
/// pattern, then earliest start). Spans carry character offsets.
std::vector<SpanAnnotation> match_document(const TokenizedDocument& doc, const RuleSet& rules);

}  // namespace echolab
