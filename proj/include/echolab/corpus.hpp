#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "echolab/annotation.hpp"
#include "echolab/rules.hpp"

namespace echolab {

// ---------------------------------------------------------------------------
// Annotation JSONL
// ---------------------------------------------------------------------------

/// Reads one JSON object per line: `doc_id` (synthesized from the line number
/// when absent), `text`, `spans` [{start,end,label,characteristic}], `meta`.
/// `meta.characteristic` supplies the characteristic for single-characteristic
/// exports whose spans omit the field. Lines sharing a doc_id merge into one
/// document (texts must agree). Documents are validated and doc labels derived.
std::vector<AnnotatedDocument> ingest_jsonl(std::istream& in, const Ontology& ontology);
std::vector<AnnotatedDocument> ingest_jsonl_file(const std::string& path, const Ontology& ontology);

/// Merges additional per-characteristic ingests into base by doc_id.
void merge_documents(std::vector<AnnotatedDocument>& base, std::vector<AnnotatedDocument> more,
                     const Ontology& ontology);

std::string to_jsonl(const std::vector<AnnotatedDocument>& docs);
void write_jsonl_file(const std::string& path, const std::vector<AnnotatedDocument>& docs);

// ---------------------------------------------------------------------------
// Filtering and splits
// ---------------------------------------------------------------------------

/// Drops documents shorter than 15 characters, and documents shorter than 30
/// characters with no rule-dictionary hit (no described medical concept).
std::vector<AnnotatedDocument> filter_reports(const std::vector<AnnotatedDocument>& docs,
                                              const RuleSet& dictionary);

struct CorpusSplit {
    uint64_t seed = 0;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

/// Deterministic shuffle by seed, then prefix split at round(ratio * n).
CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& docs, double ratio, uint64_t seed);

std::string split_to_json(const CorpusSplit& split);
CorpusSplit split_from_json(const std::string& json_text);

/// Partitions docs by membership in the split's train ids. Unknown ids in the
/// manifest raise ValidationError.
std::pair<std::vector<AnnotatedDocument>, std::vector<AnnotatedDocument>> apply_split(
    const std::vector<AnnotatedDocument>& docs, const CorpusSplit& split);

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

struct LabelCount {
    long count = 0;
    double percent = 0.0;  // of the characteristic's case count
};

struct LabelDistribution {
    long cases = 0;  // documents considered per characteristic
    // characteristic id -> severity -> count/percent (all admissible labels present)
    std::map<std::string, std::map<Severity, LabelCount>> table;
};

LabelDistribution label_distribution(const std::vector<AnnotatedDocument>& docs,
                                     const Ontology& ontology);
std::string label_distribution_csv(const LabelDistribution& dist, const Ontology& ontology);

struct SpanStatsRow {
    std::string characteristic_id;
    std::string severity;  // label name or "Overall"
    long count = 0;
    double mean_len = 0.0;  // tokens
    double sd = 0.0;        // span distinctiveness
    double bd = 0.0;        // boundary distinctiveness
};

/// Span length in tokens plus KL-divergence distinctiveness of the in-span
/// (SD) and boundary-token (BD) unigram distributions against the corpus
/// unigram distribution, with add-one smoothing. Classes without spans are
/// omitted.
std::vector<SpanStatsRow> span_stats(const std::vector<AnnotatedDocument>& docs,
                                     const Ontology& ontology);
std::string span_stats_csv(const std::vector<SpanStatsRow>& rows);

/// Token index range [first, last) of the tokens overlapping a character span.
/// Empty (first == last) when no token overlaps.
std::pair<int, int> span_token_range(const TokenizedDocument& doc, int char_start, int char_end);

}  // namespace echolab
