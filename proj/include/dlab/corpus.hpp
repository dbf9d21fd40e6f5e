#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dlab::corpus {

// Class order is fixed everywhere (reports, confusion matrices, model files).
enum class Severity { Routine = 0, Safety = 1, Urgency = 2, Distress = 3 };
inline constexpr int kNumClasses = 4;

enum class Style { Formal = 0, Informal = 1, ThirdParty = 2 };
inline constexpr int kNumStyles = 3;

const std::array<std::string, 4>& severity_names();
const std::array<std::string, 3>& style_names();
const std::string& to_string(Severity s);
const std::string& to_string(Style s);
std::optional<Severity> severity_from_string(const std::string& s);
std::optional<Style> style_from_string(const std::string& s);

// The fixed 12-name scenario vocabulary.
const std::vector<std::string>& scenario_names();
bool is_known_scenario(const std::string& name);

// One synthetic maritime radio message with ground-truth annotations.
struct MessageRecord {
    std::string id;
    std::string text;
    Severity severity = Severity::Routine;
    Style style = Style::Formal;
    std::string scenario;
    bool has_codeword = false;
    std::string codeword;  // canonical form; empty when absent
    std::string text_masked;

    // Ground-truth operational fields.
    std::string vessel_name;
    std::string call_sign;
    std::string mmsi;      // exactly nine decimal digits
    std::string position;  // degrees/minutes with hemisphere, as spoken
    int pob = 0;           // persons on board, >= 0
    std::string nature_of_incident;
};

using MessageSet = std::vector<MessageRecord>;

// Canonical codewords with their accepted surface variants. Variants are
// matched case-insensitively on token boundaries; spaced and hyphenated
// reduplications count as a single occurrence.
struct CodewordLexicon {
    struct Entry {
        std::string canonical;
        std::vector<std::string> variants;
    };
    std::vector<Entry> entries;

    static const CodewordLexicon& standard();
};

struct MaskResult {
    std::string text;
    std::vector<std::string> found;  // canonical forms, in occurrence order
};

// Replaces every lexicon variant occurrence with the literal token [SIGNAL].
// Text outside the replaced spans is preserved byte for byte.
MaskResult mask_codewords(const std::string& text, const CodewordLexicon& lexicon);

struct SplitRatios {
    double train = 0.70;
    double val = 0.15;
    double test = 0.15;
    bool valid() const;
};

struct SplitResult {
    MessageSet train;
    MessageSet val;
    MessageSet test;
};

// Stratified split with largest-remainder rounding: global part sizes are
// rounded first, then per-class counts are rounded under the global totals so
// every class deviates from exact proportionality by at most one record.
// Records are assigned per class by a seeded shuffle over ids, so the
// partition is independent of input order.
SplitResult stratified_split(const MessageSet& set, const SplitRatios& ratios,
                             std::uint64_t seed);

// Returns an empty string when the record satisfies all invariants, otherwise
// a description of the first violation.
std::string validate(const MessageRecord& rec, const CodewordLexicon& lexicon);

// JSONL persistence: one object per line, fixed field order, unknown fields
// rejected. load_jsonl validates every record and rejects the whole file on
// the first malformed line, reporting its line number.
MessageSet load_jsonl(const std::string& path);
void save_jsonl(const MessageSet& set, const std::string& path);

}  // namespace dlab::corpus
