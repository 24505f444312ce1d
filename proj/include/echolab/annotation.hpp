#pragma once

#include <map>
#include <string>
#include <vector>

#include "echolab/ontology.hpp"

namespace echolab {

/// A labelled character range. Offsets count Unicode scalar values; end is
/// exclusive. NoLabel is never a span label — absence of a span encodes it.
struct SpanAnnotation {
    int start = 0;
    int end = 0;
    std::string characteristic_id;
    Severity label = Severity::NoLabel;

    bool operator==(const SpanAnnotation&) const = default;
};

struct AnnotatedDocument {
    std::string doc_id;
    std::string text;
    std::vector<SpanAnnotation> spans;  // kept sorted by (characteristic_id, start)
    std::map<std::string, Severity> doc_labels;  // derived: one entry per ontology characteristic

    bool operator==(const AnnotatedDocument&) const = default;
};

/// Sorts spans and recomputes doc_labels[c] = aggregate of span labels per
/// characteristic (NoLabel where none).
void derive_doc_labels(AnnotatedDocument& doc, const Ontology& ontology);

/// Checks span bounds, label admissibility and same-characteristic overlap.
/// Throws ValidationError naming the document.
void validate_document(const AnnotatedDocument& doc, const Ontology& ontology);

}  // namespace echolab
