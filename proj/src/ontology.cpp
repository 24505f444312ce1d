#include "echolab/ontology.hpp"

#include <algorithm>
#include <sstream>

#include "echolab/util.hpp"

namespace echolab {

const char* to_string(Severity s) {
    switch (s) {
        case Severity::NoLabel: return "NoLabel";
        case Severity::Normal: return "Normal";
        case Severity::Present: return "Present";
        case Severity::Mild: return "Mild";
        case Severity::Moderate: return "Moderate";
        case Severity::Severe: return "Severe";
    }
    return "?";
}

std::optional<Severity> severity_from_string(std::string_view name) {
    for (Severity s : kAllSeverities)
        if (name == to_string(s)) return s;
    return std::nullopt;
}

Severity aggregate_labels(std::span<const Severity> labels) {
    Severity best = Severity::NoLabel;
    for (Severity s : labels)
        if (severity_rank(s) > severity_rank(best)) best = s;
    return best;
}

Severity simplify_label(Severity s) {
    switch (s) {
        case Severity::NoLabel: return Severity::NoLabel;
        case Severity::Normal: return Severity::Normal;
        default: return Severity::Present;
    }
}

bool Characteristic::admits(Severity s) const {
    return std::find(admissible.begin(), admissible.end(), s) != admissible.end();
}

Ontology::Ontology(std::vector<Characteristic> characteristics, int version)
    : chars_(std::move(characteristics)), version_(version) {
    if (chars_.empty()) throw ValidationError("ontology: no characteristics defined");
    for (size_t i = 0; i < chars_.size(); ++i) {
        const auto& c = chars_[i];
        if (c.id.empty()) throw ValidationError("ontology: empty characteristic id");
        for (size_t j = i + 1; j < chars_.size(); ++j)
            if (chars_[j].id == c.id)
                throw ValidationError("ontology: duplicate characteristic id '" + c.id + "'");
        if (!c.admits(Severity::NoLabel) || !c.admits(Severity::Normal))
            throw ValidationError("ontology: characteristic '" + c.id +
                                  "' must admit NoLabel and Normal");
    }
}

namespace {

std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ValidationError("ontology config line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Ontology Ontology::parse(std::string_view config_text) {
    std::vector<Characteristic> chars;
    int version = 1;
    Characteristic* current = nullptr;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= config_text.size()) {
        const size_t nl = config_text.find('\n', pos);
        std::string_view raw =
            config_text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = (nl == std::string_view::npos) ? config_text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            std::string id{trim(line.substr(1, line.size() - 2))};
            if (id.empty()) fail(line_no, "empty section id");
            for (const auto& c : chars)
                if (c.id == id) fail(line_no, "duplicate characteristic id '" + id + "'");
            chars.push_back(Characteristic{id, id, {Severity::NoLabel, Severity::Normal}});
            current = &chars.back();
            current->admissible.clear();
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        std::string key{trim(line.substr(0, eq))};
        std::string value{trim(line.substr(eq + 1))};

        if (!current) {
            if (key == "version") {
                try {
                    version = std::stoi(value);
                } catch (...) {
                    fail(line_no, "version must be an integer");
                }
            } else {
                fail(line_no, "unknown top-level key '" + key + "'");
            }
            continue;
        }

        if (key == "display_name") {
            current->display_name = value;
        } else if (key == "labels") {
            std::istringstream ss(value);
            std::string tok;
            while (ss >> tok) {
                auto s = severity_from_string(tok);
                if (!s) fail(line_no, "unknown label '" + tok + "'");
                if (current->admits(*s)) fail(line_no, "repeated label '" + tok + "'");
                current->admissible.push_back(*s);
            }
            std::sort(current->admissible.begin(), current->admissible.end(),
                      [](Severity a, Severity b) { return severity_rank(a) < severity_rank(b); });
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    return Ontology(std::move(chars), version);
}

Ontology Ontology::load_file(const std::string& path) { return parse(read_file(path)); }

namespace {

constexpr std::string_view kDefaultOntology = R"(# Cardiac characteristic ontology.
# One section per characteristic; `labels` lists the admissible severities.
version = 1

[aortic_regurgitation]
display_name = Aortic regurgitation
labels = NoLabel Normal Mild Moderate Severe

[aortic_stenosis]
display_name = Aortic stenosis
labels = NoLabel Normal Mild Moderate Severe

[diastolic_dysfunction]
display_name = Diastolic dysfunction
labels = NoLabel Normal Mild Moderate Severe

[lv_dilatation]
display_name = Left ventricular dilatation
labels = NoLabel Normal Mild Moderate Severe Present

[lv_systolic_dysfunction]
display_name = Left ventricular systolic dysfunction
labels = NoLabel Normal Mild Moderate Severe

[mitral_regurgitation]
display_name = Mitral regurgitation
labels = NoLabel Normal Mild Moderate Severe

[pericardial_effusion]
display_name = Pericardial effusion
labels = NoLabel Normal Mild Moderate Severe Present

[rv_dilatation]
display_name = Right ventricular dilatation
labels = NoLabel Normal Mild Moderate Severe Present

[rv_systolic_dysfunction]
display_name = Right ventricular systolic dysfunction
labels = NoLabel Normal Mild Moderate Severe

[tricuspid_regurgitation]
display_name = Tricuspid regurgitation
labels = NoLabel Normal Mild Moderate Severe

[wall_motion_abnormalities]
display_name = Wall motion abnormalities
labels = NoLabel Normal Present
)";

}  // namespace

const Ontology& Ontology::bundled_default() {
    static const Ontology ont = Ontology::parse(kDefaultOntology);
    return ont;
}

std::string_view Ontology::bundled_default_text() { return kDefaultOntology; }

const Characteristic* Ontology::find(std::string_view id) const {
    for (const auto& c : chars_)
        if (c.id == id) return &c;
    return nullptr;
}

const Characteristic& Ontology::require(std::string_view id) const {
    const Characteristic* c = find(id);
    if (!c) throw ValidationError("unknown characteristic '" + std::string(id) + "'");
    return *c;
}

}  // namespace echolab
