#include "echolab/synth.hpp"

#include <algorithm>

#include "echolab/corpus.hpp"
#include "echolab/util.hpp"

namespace echolab {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ValidationError("template file line " + std::to_string(line) + ": " + msg);
}

std::vector<TemplateAtom> parse_atoms(std::string_view t, int line_no, bool allow_span) {
    std::vector<TemplateAtom> atoms;
    bool in_span = false, saw_span = false;
    std::string text;
    auto flush = [&] {
        if (!text.empty()) {
            atoms.push_back({TemplateAtom::Kind::Text, text, {}, 0, 0});
            text.clear();
        }
    };
    for (size_t i = 0; i < t.size(); ++i) {
        const char c = t[i];
        if (c == '[') {
            if (!allow_span) fail(line_no, "distractor templates may not contain a span");
            if (in_span || saw_span) fail(line_no, "only one [..] span per template");
            flush();
            atoms.push_back({TemplateAtom::Kind::SpanOpen, "", {}, 0, 0});
            in_span = saw_span = true;
        } else if (c == ']') {
            if (!in_span) fail(line_no, "unmatched ']'");
            flush();
            atoms.push_back({TemplateAtom::Kind::SpanClose, "", {}, 0, 0});
            in_span = false;
        } else if (c == '{') {
            const size_t e = t.find('}', i);
            if (e == std::string_view::npos) fail(line_no, "unterminated '{'");
            flush();
            TemplateAtom a;
            a.kind = TemplateAtom::Kind::Choice;
            std::string_view body = t.substr(i + 1, e - i - 1);
            size_t pos = 0;
            while (pos <= body.size()) {
                const size_t bar = body.find('|', pos);
                std::string_view opt =
                    body.substr(pos, bar == std::string_view::npos ? bar : bar - pos);
                if (opt.empty()) fail(line_no, "empty choice option");
                a.options.emplace_back(opt);
                if (bar == std::string_view::npos) break;
                pos = bar + 1;
            }
            atoms.push_back(std::move(a));
            i = e;
        } else if (c == '<') {
            const size_t e = t.find('>', i);
            const size_t dash = t.find('-', i);
            if (e == std::string_view::npos || dash == std::string_view::npos || dash > e)
                fail(line_no, "number placeholder must look like <lo-hi>");
            flush();
            TemplateAtom a;
            a.kind = TemplateAtom::Kind::Number;
            try {
                a.lo = std::stoi(std::string(t.substr(i + 1, dash - i - 1)));
                a.hi = std::stoi(std::string(t.substr(dash + 1, e - dash - 1)));
            } catch (...) {
                fail(line_no, "bad number placeholder bounds");
            }
            if (a.lo > a.hi) fail(line_no, "number placeholder lo > hi");
            atoms.push_back(std::move(a));
            i = e;
        } else {
            text.push_back(c);
        }
    }
    flush();
    if (in_span) fail(line_no, "unterminated '['");
    if (allow_span && !saw_span) fail(line_no, "span template without [..] span");
    return atoms;
}

}  // namespace

SynthTemplates SynthTemplates::parse(std::string_view text, const Ontology& ontology) {
    SynthTemplates ts;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line[0] == '#') continue;

        const size_t t1 = line.find('\t');
        if (t1 == std::string_view::npos) fail(line_no, "expected tab-separated fields");
        const std::string_view kind = line.substr(0, t1);

        SentenceTemplate st;
        if (kind == "distractor") {
            st.distractor = true;
            st.atoms = parse_atoms(line.substr(t1 + 1), line_no, /*allow_span=*/false);
            ts.distractor_idx_.push_back(static_cast<int>(ts.sentences_.size()));
        } else if (kind == "span") {
            const size_t t2 = line.find('\t', t1 + 1);
            const size_t t3 = t2 == std::string_view::npos ? t2 : line.find('\t', t2 + 1);
            if (t3 == std::string_view::npos)
                fail(line_no, "expected 'span<TAB>characteristic<TAB>label<TAB>template'");
            st.characteristic_id = std::string(line.substr(t1 + 1, t2 - t1 - 1));
            const Characteristic* chr = ontology.find(st.characteristic_id);
            if (!chr) fail(line_no, "unknown characteristic '" + st.characteristic_id + "'");
            const std::string label_str{line.substr(t2 + 1, t3 - t2 - 1)};
            auto label = severity_from_string(label_str);
            if (!label || *label == Severity::NoLabel || !chr->admits(*label))
                fail(line_no, "inadmissible label '" + label_str + "'");
            st.label = *label;
            st.atoms = parse_atoms(line.substr(t3 + 1), line_no, /*allow_span=*/true);
            ts.index_[{st.characteristic_id, static_cast<int>(st.label)}].push_back(
                static_cast<int>(ts.sentences_.size()));
        } else {
            fail(line_no, "unknown template kind '" + std::string(kind) + "'");
        }
        ts.sentences_.push_back(std::move(st));
    }
    if (ts.sentences_.empty()) throw ValidationError("template file: no templates");
    return ts;
}

SynthTemplates SynthTemplates::load_file(const std::string& path, const Ontology& ontology) {
    return parse(read_file(path), ontology);
}

const std::vector<int>& SynthTemplates::for_class(const std::string& characteristic_id,
                                                  Severity s) const {
    static const std::vector<int> kEmpty;
    auto it = index_.find({characteristic_id, static_cast<int>(s)});
    return it == index_.end() ? kEmpty : it->second;
}

SynthProfile table2_profile() {
    // Document label shares per characteristic: Normal, Mild, Moderate,
    // Severe, Present; NoLabel takes the remainder.
    struct Row {
        const char* id;
        double normal, mild, moderate, severe, present;
    };
    static const Row rows[] = {
        {"aortic_regurgitation", .306, .090, .024, .009, .000},
        {"aortic_stenosis", .292, .022, .014, .016, .000},
        {"diastolic_dysfunction", .104, .126, .049, .026, .000},
        {"lv_dilatation", .374, .050, .018, .010, .028},
        {"lv_systolic_dysfunction", .576, .176, .076, .073, .000},
        {"mitral_regurgitation", .321, .147, .037, .013, .000},
        {"pericardial_effusion", .112, .018, .006, .006, .005},
        {"rv_dilatation", .261, .032, .015, .006, .017},
        {"rv_systolic_dysfunction", .361, .082, .038, .012, .000},
        {"tricuspid_regurgitation", .267, .052, .028, .013, .000},
        {"wall_motion_abnormalities", .078, .000, .000, .000, .167},
    };
    SynthProfile p;
    for (const Row& r : rows) {
        std::array<double, kNumSeverities> a{};
        a[static_cast<int>(Severity::Normal)] = r.normal;
        a[static_cast<int>(Severity::Mild)] = r.mild;
        a[static_cast<int>(Severity::Moderate)] = r.moderate;
        a[static_cast<int>(Severity::Severe)] = r.severe;
        a[static_cast<int>(Severity::Present)] = r.present;
        a[static_cast<int>(Severity::NoLabel)] =
            1.0 - (r.normal + r.mild + r.moderate + r.severe + r.present);
        p.probs[r.id] = a;
    }
    return p;
}

SynthProfile uniform_profile(const Ontology& ontology) {
    SynthProfile p;
    for (const auto& c : ontology.characteristics()) {
        std::array<double, kNumSeverities> a{};
        for (Severity s : c.admissible)
            a[static_cast<size_t>(severity_rank(s))] = 1.0 / static_cast<double>(c.admissible.size());
        p.probs[c.id] = a;
    }
    return p;
}

namespace {

struct EmittedSentence {
    std::string text;
    bool has_span = false;
    int span_start = 0, span_end = 0;  // scalar-value offsets within text
    std::string characteristic_id;
    Severity label = Severity::NoLabel;
};

EmittedSentence emit_sentence(const SentenceTemplate& st, Rng& rng) {
    EmittedSentence out;
    out.characteristic_id = st.characteristic_id;
    out.label = st.label;
    size_t cp_len = 0;
    auto append = [&](std::string_view piece) {
        out.text.append(piece);
        cp_len += utf8_cp_count(piece);
    };
    for (const auto& a : st.atoms) {
        switch (a.kind) {
            case TemplateAtom::Kind::Text:
                append(a.text);
                break;
            case TemplateAtom::Kind::Choice:
                append(a.options[rng.below(a.options.size())]);
                break;
            case TemplateAtom::Kind::Number:
                append(std::to_string(rng.uniform_int(a.lo, a.hi)));
                break;
            case TemplateAtom::Kind::SpanOpen:
                out.has_span = true;
                out.span_start = static_cast<int>(cp_len);
                break;
            case TemplateAtom::Kind::SpanClose:
                out.span_end = static_cast<int>(cp_len);
                break;
        }
    }
    if (rng.uniform01() < 0.5) append(" .");
    return out;
}

}  // namespace

std::vector<AnnotatedDocument> generate_synthetic(const Ontology& ontology,
                                                  const SynthTemplates& templates, int n_docs,
                                                  uint64_t seed, const SynthProfile& profile) {
    if (n_docs <= 0) throw ValidationError("generate: n_docs must be positive");
    for (const auto& [cid, probs] : profile.probs) {
        const Characteristic* chr = ontology.find(cid);
        if (!chr) throw ValidationError("profile references unknown characteristic '" + cid + "'");
        for (Severity s : kAllSeverities) {
            const double p = probs[static_cast<size_t>(severity_rank(s))];
            if (p < 0.0) throw ValidationError("profile: negative probability for '" + cid + "'");
            if (p > 0.0 && s != Severity::NoLabel) {
                if (!chr->admits(s))
                    throw ValidationError("profile assigns inadmissible label " +
                                          std::string(to_string(s)) + " to '" + cid + "'");
                if (templates.for_class(cid, s).empty())
                    throw ValidationError("no template for " + cid + "/" + to_string(s));
            }
        }
    }

    std::vector<AnnotatedDocument> docs;
    docs.reserve(static_cast<size_t>(n_docs));
    for (int di = 0; di < n_docs; ++di) {
        char idbuf[24];
        std::snprintf(idbuf, sizeof idbuf, "synth%05d", di);
        Rng rng(mix_seed(seed, idbuf));

        // Draw one severity per characteristic; redraw until something is mentioned.
        std::vector<std::pair<std::string, Severity>> mentions;
        for (int attempt = 0;; ++attempt) {
            mentions.clear();
            for (const auto& c : ontology.characteristics()) {
                auto it = profile.probs.find(c.id);
                if (it == profile.probs.end()) continue;
                const auto& a = it->second;
                const Severity s =
                    kAllSeverities[rng.categorical(std::vector<double>(a.begin(), a.end()))];
                if (s != Severity::NoLabel) mentions.emplace_back(c.id, s);
            }
            if (!mentions.empty()) break;
            if (attempt > 10000)
                throw ValidationError("profile never emits a mention; all mass on NoLabel");
        }

        std::vector<EmittedSentence> sentences;
        for (const auto& [cid, sev] : mentions) {
            const auto& idx = templates.for_class(cid, sev);
            const int ti = idx[static_cast<size_t>(rng.below(idx.size()))];
            sentences.push_back(emit_sentence(templates.sentences()[static_cast<size_t>(ti)], rng));
        }
        const double r = rng.uniform01();
        const int n_distractors = templates.distractors().empty() ? 0 : (r < 0.45 ? 0 : r < 0.80 ? 1 : 2);
        for (int k = 0; k < n_distractors; ++k) {
            const int ti = templates.distractors()[static_cast<size_t>(
                rng.below(templates.distractors().size()))];
            sentences.push_back(emit_sentence(templates.sentences()[static_cast<size_t>(ti)], rng));
        }
        rng.shuffle(sentences);

        AnnotatedDocument doc;
        doc.doc_id = idbuf;
        size_t cp_off = 0;
        for (size_t i = 0; i < sentences.size(); ++i) {
            if (i > 0) {
                doc.text += ' ';
                ++cp_off;
            }
            const EmittedSentence& s = sentences[i];
            if (s.has_span) {
                SpanAnnotation span;
                span.start = static_cast<int>(cp_off) + s.span_start;
                span.end = static_cast<int>(cp_off) + s.span_end;
                span.characteristic_id = s.characteristic_id;
                span.label = s.label;
                doc.spans.push_back(std::move(span));
            }
            doc.text += s.text;
            cp_off += utf8_cp_count(s.text);
        }
        derive_doc_labels(doc, ontology);
        validate_document(doc, ontology);
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace echolab
