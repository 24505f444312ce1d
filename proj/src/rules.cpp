#include "echolab/rules.hpp"

#include <algorithm>

#include "echolab/util.hpp"

namespace echolab {

bool TokenMatcher::accepts(const std::string& norm) const {
    if (kind == Kind::Wildcard) return true;
    return std::find(options.begin(), options.end(), norm) != options.end();
}

bool RulePattern::matches_window(const Token* tokens, int count) const {
    if (count < min_tokens || count > max_tokens) return false;
    // Backtracking over optional matchers; patterns are short.
    const int m = static_cast<int>(matchers.size());
    // remaining_min[i] = min tokens required by matchers[i..)
    // Computed inline: walk with pruning.
    struct Frame {
        int mi, ti;
    };
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
        auto [mi, ti] = stack.back();
        stack.pop_back();
        if (mi == m) {
            if (ti == count) return true;
            continue;
        }
        const TokenMatcher& tm = matchers[static_cast<size_t>(mi)];
        if (tm.optional) stack.push_back({mi + 1, ti});  // skip branch
        if (ti < count && tm.accepts(tokens[ti].norm)) stack.push_back({mi + 1, ti + 1});
    }
    return false;
}

RuleSet::RuleSet(std::vector<RulePattern> patterns) : patterns_(std::move(patterns)) {
    for (const auto& p : patterns_) {
        const TokenMatcher& first = p.matchers.front();
        if (first.optional || first.kind == TokenMatcher::Kind::Wildcard) {
            general_.push_back(p.index);
        } else {
            for (const auto& opt : first.options) by_first_literal_[opt].push_back(p.index);
        }
    }
}

std::map<std::string, int> RuleSet::pattern_counts() const {
    std::map<std::string, int> counts;
    for (const auto& p : patterns_) ++counts[p.characteristic_id];
    return counts;
}

std::vector<int> RuleSet::candidates_for(const std::string& first_norm) const {
    std::vector<int> out = general_;
    auto it = by_first_literal_.find(first_norm);
    if (it != by_first_literal_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string lowercase_norm(std::string_view s) {
    // Reuse the tokenizer's notion of NORM so literals compare like tokens do.
    TokenizedDocument d = tokenize(s);
    return d.tokens.size() == 1 ? d.tokens[0].norm : std::string(s);
}

TokenMatcher parse_matcher(std::string_view tok, int line_no) {
    TokenMatcher m;
    if (!tok.empty() && tok[0] == '?') {
        m.optional = true;
        tok.remove_prefix(1);
    }
    if (tok.empty())
        throw ValidationError("rule file line " + std::to_string(line_no) + ": empty pattern token");
    if (tok == "*") {
        m.kind = TokenMatcher::Kind::Wildcard;
        return m;
    }
    if (tok.front() == '(') {
        if (tok.back() != ')')
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": unterminated alternation");
        m.kind = TokenMatcher::Kind::Alternation;
        std::string_view body = tok.substr(1, tok.size() - 2);
        size_t pos = 0;
        while (pos <= body.size()) {
            const size_t bar = body.find('|', pos);
            std::string_view opt =
                body.substr(pos, bar == std::string_view::npos ? bar : bar - pos);
            if (opt.empty())
                throw ValidationError("rule file line " + std::to_string(line_no) +
                                      ": empty alternation option");
            m.options.push_back(lowercase_norm(opt));
            if (bar == std::string_view::npos) break;
            pos = bar + 1;
        }
        return m;
    }
    m.kind = TokenMatcher::Kind::Literal;
    m.options.push_back(lowercase_norm(tok));
    return m;
}

}  // namespace

RuleSet compile_rules(std::string_view rule_text, const Ontology& ontology) {
    std::vector<RulePattern> patterns;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= rule_text.size()) {
        const size_t nl = rule_text.find('\n', pos);
        std::string_view line =
            rule_text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = (nl == std::string_view::npos) ? rule_text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line[0] == '#') continue;

        const size_t t1 = line.find('\t');
        const size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos)
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": expected 'characteristic<TAB>label<TAB>pattern'");

        RulePattern p;
        p.characteristic_id = std::string(line.substr(0, t1));
        const Characteristic* chr = ontology.find(p.characteristic_id);
        if (!chr)
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": unknown characteristic '" + p.characteristic_id + "'");

        const std::string label_str{line.substr(t1 + 1, t2 - t1 - 1)};
        auto label = severity_from_string(label_str);
        if (!label || *label == Severity::NoLabel || !chr->admits(*label))
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": inadmissible label '" + label_str + "' for '" +
                                  p.characteristic_id + "'");
        p.label = *label;

        std::string_view pat = line.substr(t2 + 1);
        size_t tp = 0;
        while (tp < pat.size()) {
            while (tp < pat.size() && pat[tp] == ' ') ++tp;
            if (tp >= pat.size()) break;
            size_t te = pat.find(' ', tp);
            if (te == std::string_view::npos) te = pat.size();
            p.matchers.push_back(parse_matcher(pat.substr(tp, te - tp), line_no));
            tp = te;
        }
        if (p.matchers.empty())
            throw ValidationError("rule file line " + std::to_string(line_no) + ": empty pattern");

        bool has_non_wildcard = false;
        for (const auto& m : p.matchers) {
            if (!m.optional) ++p.min_tokens;
            ++p.max_tokens;
            if (m.kind != TokenMatcher::Kind::Wildcard) has_non_wildcard = true;
        }
        if (!has_non_wildcard || p.min_tokens == 0)
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": pattern needs at least one required non-wildcard token");
        if (p.max_tokens > kMaxRuleWindow)
            throw ValidationError("rule file line " + std::to_string(line_no) +
                                  ": pattern longer than " + std::to_string(kMaxRuleWindow) +
                                  " tokens");
        p.index = static_cast<int>(patterns.size());
        patterns.push_back(std::move(p));
    }
    return RuleSet(std::move(patterns));
}

RuleSet load_rules(const std::string& path, const Ontology& ontology) {
    return compile_rules(read_file(path), ontology);
}

std::vector<SpanAnnotation> match_document(const TokenizedDocument& doc, const RuleSet& rules) {
    struct Candidate {
        int tok_start, tok_len, pattern;
    };
    const int L = doc.size();
    std::vector<Candidate> candidates;
    for (int s = 0; s < L; ++s) {
        const std::vector<int> cand = rules.candidates_for(doc.tokens[static_cast<size_t>(s)].norm);
        if (cand.empty()) continue;
        const int max_k = std::min(kMaxRuleWindow, L - s);
        for (int k = 1; k <= max_k; ++k) {
            for (int pi : cand) {
                const RulePattern& p = rules.patterns()[static_cast<size_t>(pi)];
                if (p.matches_window(doc.tokens.data() + s, k)) {
                    candidates.push_back({s, k, pi});  // first pattern wins this window
                    break;
                }
            }
        }
    }

    // Per characteristic: longest match wins, ties to the earliest pattern.
    std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.tok_len != b.tok_len) return a.tok_len > b.tok_len;
        const int pa = rules.patterns()[static_cast<size_t>(a.pattern)].index;
        const int pb = rules.patterns()[static_cast<size_t>(b.pattern)].index;
        if (pa != pb) return pa < pb;
        return a.tok_start < b.tok_start;
    });

    std::map<std::string, std::vector<std::pair<int, int>>> taken;  // char id -> accepted ranges
    std::vector<SpanAnnotation> out;
    for (const auto& c : candidates) {
        const RulePattern& p = rules.patterns()[static_cast<size_t>(c.pattern)];
        auto& ranges = taken[p.characteristic_id];
        const int b = c.tok_start, e = c.tok_start + c.tok_len;
        bool overlaps = false;
        for (const auto& [rb, re] : ranges)
            if (b < re && rb < e) {
                overlaps = true;
                break;
            }
        if (overlaps) continue;
        ranges.emplace_back(b, e);
        SpanAnnotation span;
        span.start = doc.tokens[static_cast<size_t>(b)].start;
        span.end = doc.tokens[static_cast<size_t>(e - 1)].end;
        span.characteristic_id = p.characteristic_id;
        span.label = p.label;
        out.push_back(std::move(span));
    }
    std::sort(out.begin(), out.end(), [](const SpanAnnotation& a, const SpanAnnotation& b) {
        if (a.characteristic_id != b.characteristic_id) return a.characteristic_id < b.characteristic_id;
        return a.start < b.start;
    });
    return out;
}

}  // namespace echolab
