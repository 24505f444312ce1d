#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "echolab/annotation.hpp"

namespace echolab {

/// Piece of a sentence template. Templates mark the gold span with [..],
/// alternations with {a|b} and integer draws with <lo-hi>.
struct TemplateAtom {
    enum class Kind { Text, Choice, Number, SpanOpen, SpanClose };
    Kind kind = Kind::Text;
    std::string text;                  // Text
    std::vector<std::string> options;  // Choice
    int lo = 0, hi = 0;                // Number
};

struct SentenceTemplate {
    bool distractor = false;
    std::string characteristic_id;  // empty for distractors
    Severity label = Severity::NoLabel;
    std::vector<TemplateAtom> atoms;
};

class SynthTemplates {
public:
    static SynthTemplates parse(std::string_view text, const Ontology& ontology);
    static SynthTemplates load_file(const std::string& path, const Ontology& ontology);

    const std::vector<SentenceTemplate>& sentences() const { return sentences_; }
    const std::vector<int>& distractors() const { return distractor_idx_; }
    /// Template indices for one characteristic/severity class (may be empty).
    const std::vector<int>& for_class(const std::string& characteristic_id, Severity s) const;

private:
    std::vector<SentenceTemplate> sentences_;
    std::vector<int> distractor_idx_;
    std::map<std::pair<std::string, int>, std::vector<int>> index_;
};

/// Per-characteristic severity marginals, indexed by severity rank.
struct SynthProfile {
    std::map<std::string, std::array<double, kNumSeverities>> probs;
};

/// Marginals matching the published document label distribution.
SynthProfile table2_profile();
/// Uniform over each characteristic's admissible labels (including NoLabel).
SynthProfile uniform_profile(const Ontology& ontology);

/// Deterministic synthetic report corpus. Each document mentions at least one
/// characteristic; every mention emits one template sentence whose gold span
/// and document label follow the drawn severity. Distractor sentences carry
/// no annotation.
std::vector<AnnotatedDocument> generate_synthetic(const Ontology& ontology,
                                                  const SynthTemplates& templates, int n_docs,
                                                  uint64_t seed, const SynthProfile& profile);

}  // namespace echolab
