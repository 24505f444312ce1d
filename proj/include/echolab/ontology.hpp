#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace echolab {

/// Severity of a cardiac characteristic as stated in a report. Enum values
/// equal the aggregation rank: a graded statement outranks a bare "present",
/// which outranks a normal finding, which outranks no statement at all.
enum class Severity : int {
    NoLabel = 0,
    Normal = 1,
    Present = 2,
    Mild = 3,
    Moderate = 4,
    Severe = 5,
};

inline constexpr int kNumSeverities = 6;
inline constexpr Severity kAllSeverities[kNumSeverities] = {
    Severity::NoLabel, Severity::Normal, Severity::Present,
    Severity::Mild,    Severity::Moderate, Severity::Severe,
};

inline int severity_rank(Severity s) { return static_cast<int>(s); }

const char* to_string(Severity s);
std::optional<Severity> severity_from_string(std::string_view name);

/// Most severe label in the multiset; NoLabel for an empty one.
Severity aggregate_labels(std::span<const Severity> labels);

/// Collapse to the three-label scheme: not mentioned, normal, or present.
Severity simplify_label(Severity s);

struct Characteristic {
    std::string id;
    std::string display_name;
    std::vector<Severity> admissible;  // always contains NoLabel and Normal

    bool admits(Severity s) const;
};

class Ontology {
public:
    Ontology(std::vector<Characteristic> characteristics, int version);

    /// Parses the key/value config format (see data/ontology.txt). Throws
    /// ValidationError with a line number on malformed input or duplicate ids.
    static Ontology parse(std::string_view config_text);
    static Ontology load_file(const std::string& path);

    /// The eleven-characteristic default shipped with the toolkit.
    static const Ontology& bundled_default();
    static std::string_view bundled_default_text();

    const std::vector<Characteristic>& characteristics() const { return chars_; }
    int version() const { return version_; }

    const Characteristic* find(std::string_view id) const;
    const Characteristic& require(std::string_view id) const;

private:
    std::vector<Characteristic> chars_;
    int version_ = 1;
};

}  // namespace echolab
