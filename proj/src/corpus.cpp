#include "echolab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "echolab/util.hpp"
#include "json.hpp"

namespace echolab {

using ordered_json = nlohmann::ordered_json;

void derive_doc_labels(AnnotatedDocument& doc, const Ontology& ontology) {
    std::sort(doc.spans.begin(), doc.spans.end(),
              [](const SpanAnnotation& a, const SpanAnnotation& b) {
                  if (a.characteristic_id != b.characteristic_id)
                      return a.characteristic_id < b.characteristic_id;
                  if (a.start != b.start) return a.start < b.start;
                  return a.end < b.end;
              });
    doc.doc_labels.clear();
    for (const auto& c : ontology.characteristics()) doc.doc_labels[c.id] = Severity::NoLabel;
    for (const auto& s : doc.spans) {
        Severity& cur = doc.doc_labels[s.characteristic_id];
        if (severity_rank(s.label) > severity_rank(cur)) cur = s.label;
    }
}

void validate_document(const AnnotatedDocument& doc, const Ontology& ontology) {
    const int n = static_cast<int>(utf8_cp_count(doc.text));
    for (const auto& s : doc.spans) {
        const std::string where = "doc '" + doc.doc_id + "'";
        if (s.start < 0 || s.start >= s.end || s.end > n)
            throw ValidationError(where + ": span [" + std::to_string(s.start) + "," +
                                  std::to_string(s.end) + ") out of bounds for text length " +
                                  std::to_string(n));
        const Characteristic* chr = ontology.find(s.characteristic_id);
        if (!chr) throw ValidationError(where + ": unknown characteristic '" + s.characteristic_id + "'");
        if (s.label == Severity::NoLabel)
            throw ValidationError(where + ": spans may not carry NoLabel");
        if (!chr->admits(s.label))
            throw ValidationError(where + ": label '" + std::string(to_string(s.label)) +
                                  "' not admissible for '" + s.characteristic_id + "'");
    }
    // Same-characteristic spans may not overlap.
    for (size_t i = 0; i < doc.spans.size(); ++i)
        for (size_t j = i + 1; j < doc.spans.size(); ++j) {
            const auto& a = doc.spans[i];
            const auto& b = doc.spans[j];
            if (a.characteristic_id == b.characteristic_id && a.start < b.end && b.start < a.end)
                throw ValidationError("doc '" + doc.doc_id + "': overlapping spans for '" +
                                      a.characteristic_id + "'");
        }
}

namespace {

SpanAnnotation parse_span(const ordered_json& js, const std::string& default_characteristic,
                          int line_no) {
    SpanAnnotation s;
    const std::string where = "annotation line " + std::to_string(line_no);
    if (!js.is_object() || !js.contains("start") || !js.contains("end") || !js.contains("label"))
        throw ValidationError(where + ": span needs start/end/label");
    s.start = js.at("start").get<int>();
    s.end = js.at("end").get<int>();
    const std::string label_str = js.at("label").get<std::string>();
    auto label = severity_from_string(label_str);
    if (!label) throw ValidationError(where + ": unknown label '" + label_str + "'");
    s.label = *label;
    if (js.contains("characteristic"))
        s.characteristic_id = js.at("characteristic").get<std::string>();
    else
        s.characteristic_id = default_characteristic;
    if (s.characteristic_id.empty())
        throw ValidationError(where + ": span has no characteristic and no meta.characteristic");
    return s;
}

}  // namespace

std::vector<AnnotatedDocument> ingest_jsonl(std::istream& in, const Ontology& ontology) {
    std::vector<AnnotatedDocument> docs;
    std::unordered_map<std::string, size_t> by_id;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json js;
        try {
            js = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("annotation line " + std::to_string(line_no) +
                                  ": malformed JSON: " + e.what());
        }
        if (!js.is_object() || !js.contains("text") || !js.at("text").is_string())
            throw ValidationError("annotation line " + std::to_string(line_no) +
                                  ": object with string 'text' required");

        AnnotatedDocument doc;
        doc.text = js.at("text").get<std::string>();
        if (js.contains("doc_id"))
            doc.doc_id = js.at("doc_id").get<std::string>();
        else {
            char buf[16];
            std::snprintf(buf, sizeof buf, "doc%06d", line_no);
            doc.doc_id = buf;
        }

        std::string default_characteristic;
        if (js.contains("meta") && js.at("meta").is_object() &&
            js.at("meta").contains("characteristic"))
            default_characteristic = js.at("meta").at("characteristic").get<std::string>();

        if (js.contains("spans")) {
            for (const auto& sp : js.at("spans"))
                doc.spans.push_back(parse_span(sp, default_characteristic, line_no));
        }

        auto it = by_id.find(doc.doc_id);
        if (it == by_id.end()) {
            by_id.emplace(doc.doc_id, docs.size());
            docs.push_back(std::move(doc));
        } else {
            AnnotatedDocument& base = docs[it->second];
            if (base.text != doc.text)
                throw ValidationError("annotation line " + std::to_string(line_no) + ": doc '" +
                                      doc.doc_id + "' repeats with different text");
            base.spans.insert(base.spans.end(), doc.spans.begin(), doc.spans.end());
        }
    }
    for (auto& doc : docs) {
        derive_doc_labels(doc, ontology);
        validate_document(doc, ontology);
    }
    return docs;
}

std::vector<AnnotatedDocument> ingest_jsonl_file(const std::string& path, const Ontology& ontology) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path);
    return ingest_jsonl(in, ontology);
}

void merge_documents(std::vector<AnnotatedDocument>& base, std::vector<AnnotatedDocument> more,
                     const Ontology& ontology) {
    std::unordered_map<std::string, size_t> by_id;
    for (size_t i = 0; i < base.size(); ++i) by_id.emplace(base[i].doc_id, i);
    for (auto& doc : more) {
        auto it = by_id.find(doc.doc_id);
        if (it == by_id.end()) {
            by_id.emplace(doc.doc_id, base.size());
            base.push_back(std::move(doc));
            continue;
        }
        AnnotatedDocument& dst = base[it->second];
        if (dst.text != doc.text)
            throw ValidationError("merge: doc '" + doc.doc_id + "' has conflicting texts");
        dst.spans.insert(dst.spans.end(), doc.spans.begin(), doc.spans.end());
    }
    for (auto& doc : base) {
        derive_doc_labels(doc, ontology);
        validate_document(doc, ontology);
    }
}

std::string to_jsonl(const std::vector<AnnotatedDocument>& docs) {
    std::string out;
    for (const auto& doc : docs) {
        ordered_json js;
        js["doc_id"] = doc.doc_id;
        js["text"] = doc.text;
        ordered_json spans = ordered_json::array();
        for (const auto& s : doc.spans) {
            ordered_json sp;
            sp["start"] = s.start;
            sp["end"] = s.end;
            sp["label"] = to_string(s.label);
            sp["characteristic"] = s.characteristic_id;
            spans.push_back(std::move(sp));
        }
        js["spans"] = std::move(spans);
        js["meta"] = ordered_json::object();
        out += js.dump();
        out += '\n';
    }
    return out;
}

void write_jsonl_file(const std::string& path, const std::vector<AnnotatedDocument>& docs) {
    atomic_write_file(path, to_jsonl(docs));
}

std::vector<AnnotatedDocument> filter_reports(const std::vector<AnnotatedDocument>& docs,
                                              const RuleSet& dictionary) {
    std::vector<AnnotatedDocument> kept;
    for (const auto& doc : docs) {
        const size_t len = utf8_cp_count(doc.text);
        if (len < 15) continue;
        if (len < 30) {
            const TokenizedDocument tok = tokenize(doc.text, doc.doc_id);
            if (match_document(tok, dictionary).empty()) continue;
        }
        kept.push_back(doc);
    }
    return kept;
}

CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& docs, double ratio, uint64_t seed) {
    if (docs.empty()) throw ValidationError("split: empty corpus");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("split: ratio must lie in (0,1)");
    std::vector<std::string> ids;
    ids.reserve(docs.size());
    for (const auto& d : docs) ids.push_back(d.doc_id);
    Rng rng(seed);
    rng.shuffle(ids);

    size_t n_train = static_cast<size_t>(std::llround(ratio * static_cast<double>(ids.size())));
    if (ids.size() >= 2) n_train = std::clamp<size_t>(n_train, 1, ids.size() - 1);

    CorpusSplit split;
    split.seed = seed;
    split.train_ids.assign(ids.begin(), ids.begin() + static_cast<ptrdiff_t>(n_train));
    split.test_ids.assign(ids.begin() + static_cast<ptrdiff_t>(n_train), ids.end());
    return split;
}

std::string split_to_json(const CorpusSplit& split) {
    ordered_json js;
    js["seed"] = split.seed;
    js["train_ids"] = split.train_ids;
    js["test_ids"] = split.test_ids;
    return js.dump(2) + "\n";
}

CorpusSplit split_from_json(const std::string& json_text) {
    CorpusSplit split;
    try {
        const ordered_json js = ordered_json::parse(json_text);
        split.seed = js.at("seed").get<uint64_t>();
        split.train_ids = js.at("train_ids").get<std::vector<std::string>>();
        split.test_ids = js.at("test_ids").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("split manifest: ") + e.what());
    }
    return split;
}

std::pair<std::vector<AnnotatedDocument>, std::vector<AnnotatedDocument>> apply_split(
    const std::vector<AnnotatedDocument>& docs, const CorpusSplit& split) {
    std::unordered_map<std::string, int> part;  // 0 train, 1 test
    for (const auto& id : split.train_ids) part.emplace(id, 0);
    for (const auto& id : split.test_ids) part.emplace(id, 1);
    std::vector<AnnotatedDocument> train, test;
    for (const auto& d : docs) {
        auto it = part.find(d.doc_id);
        if (it == part.end())
            throw ValidationError("split manifest does not cover doc '" + d.doc_id + "'");
        (it->second == 0 ? train : test).push_back(d);
    }
    return {std::move(train), std::move(test)};
}

LabelDistribution label_distribution(const std::vector<AnnotatedDocument>& docs,
                                     const Ontology& ontology) {
    LabelDistribution dist;
    dist.cases = static_cast<long>(docs.size());
    for (const auto& c : ontology.characteristics()) {
        auto& row = dist.table[c.id];
        for (Severity s : c.admissible) row[s] = LabelCount{};
    }
    for (const auto& doc : docs)
        for (const auto& [cid, label] : doc.doc_labels) ++dist.table[cid][label].count;
    if (dist.cases > 0)
        for (auto& [cid, row] : dist.table)
            for (auto& [label, lc] : row)
                lc.percent = static_cast<double>(lc.count) / static_cast<double>(dist.cases);
    return dist;
}

std::string label_distribution_csv(const LabelDistribution& dist, const Ontology& ontology) {
    std::ostringstream out;
    out << "characteristic,label,count,percent\n";
    for (const auto& c : ontology.characteristics()) {
        auto it = dist.table.find(c.id);
        if (it == dist.table.end()) continue;
        for (const auto& [label, lc] : it->second) {
            char pct[32];
            std::snprintf(pct, sizeof pct, "%.4f", lc.percent);
            out << c.id << ',' << to_string(label) << ',' << lc.count << ',' << pct << "\n";
        }
    }
    return out.str();
}

std::pair<int, int> span_token_range(const TokenizedDocument& doc, int char_start, int char_end) {
    int first = doc.size(), last = 0;
    for (int i = 0; i < doc.size(); ++i) {
        const Token& t = doc.tokens[static_cast<size_t>(i)];
        if (t.start < char_end && char_start < t.end) {
            first = std::min(first, i);
            last = std::max(last, i + 1);
        }
    }
    if (first >= last) return {0, 0};
    return {first, last};
}

namespace {

struct UnigramCounts {
    std::unordered_map<std::string, long> counts;
    long total = 0;

    void add(const std::string& w) {
        ++counts[w];
        ++total;
    }
};

/// KL(class || corpus) with add-one smoothing over the corpus vocabulary.
double kl_distinctiveness(const UnigramCounts& cls, const UnigramCounts& corpus, size_t vocab) {
    if (cls.total == 0) return 0.0;
    const double v = static_cast<double>(vocab);
    const double cls_denom = static_cast<double>(cls.total) + v;
    const double corpus_denom = static_cast<double>(corpus.total) + v;
    double kl = 0.0;
    // Terms where the class count is zero contribute p*ln(p/q) with p the
    // smoothing floor; fold them in by iterating the whole vocabulary via the
    // corpus table (it contains every word the class saw).
    for (const auto& [w, cw] : corpus.counts) {
        auto it = cls.counts.find(w);
        const double pc = (static_cast<double>(it == cls.counts.end() ? 0 : it->second) + 1.0) /
                          cls_denom;
        const double qc = (static_cast<double>(cw) + 1.0) / corpus_denom;
        kl += pc * std::log(pc / qc);
    }
    return kl;
}

}  // namespace

std::vector<SpanStatsRow> span_stats(const std::vector<AnnotatedDocument>& docs,
                                     const Ontology& ontology) {
    UnigramCounts corpus;
    struct ClassAcc {
        long n_spans = 0;
        long n_tokens = 0;
        UnigramCounts inside, boundary;
    };
    std::map<std::pair<std::string, int>, ClassAcc> classes;  // (char id, severity or -1 overall)

    for (const auto& doc : docs) {
        const TokenizedDocument tok = tokenize(doc.text, doc.doc_id);
        for (const auto& t : tok.tokens) corpus.add(t.norm);
        for (const auto& s : doc.spans) {
            const auto [first, last] = span_token_range(tok, s.start, s.end);
            if (first == last) continue;
            for (int key : {static_cast<int>(s.label), -1}) {
                ClassAcc& acc = classes[{s.characteristic_id, key}];
                ++acc.n_spans;
                acc.n_tokens += last - first;
                for (int i = first; i < last; ++i)
                    acc.inside.add(tok.tokens[static_cast<size_t>(i)].norm);
                acc.boundary.add(tok.tokens[static_cast<size_t>(first)].norm);
                if (last - first > 1)
                    acc.boundary.add(tok.tokens[static_cast<size_t>(last - 1)].norm);
            }
        }
    }

    const size_t vocab = corpus.counts.size();
    std::vector<SpanStatsRow> rows;
    for (const auto& c : ontology.characteristics()) {
        auto emit = [&](int key, const std::string& name) {
            auto it = classes.find({c.id, key});
            if (it == classes.end() || it->second.n_spans == 0) return;  // stats omitted
            const ClassAcc& acc = it->second;
            SpanStatsRow row;
            row.characteristic_id = c.id;
            row.severity = name;
            row.count = acc.n_spans;
            row.mean_len = static_cast<double>(acc.n_tokens) / static_cast<double>(acc.n_spans);
            row.sd = kl_distinctiveness(acc.inside, corpus, vocab);
            row.bd = kl_distinctiveness(acc.boundary, corpus, vocab);
            rows.push_back(std::move(row));
        };
        emit(-1, "Overall");
        for (Severity s : c.admissible)
            if (s != Severity::NoLabel) emit(static_cast<int>(s), to_string(s));
    }
    return rows;
}

std::string span_stats_csv(const std::vector<SpanStatsRow>& rows) {
    std::ostringstream out;
    out << "characteristic,severity,count,mean_len,sd,bd\n";
    for (const auto& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f", r.mean_len, r.sd, r.bd);
        out << r.characteristic_id << ',' << r.severity << ',' << r.count << ',' << buf << "\n";
    }
    return out.str();
}

}  // namespace echolab
