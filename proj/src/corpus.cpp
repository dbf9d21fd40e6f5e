#include "dlab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dlab/rng.hpp"
#include "dlab/textutil.hpp"

namespace dlab::corpus {

const std::array<std::string, 4>& severity_names() {
    static const std::array<std::string, 4> names = {"Routine", "Safety", "Urgency",
                                                     "Distress"};
    return names;
}

const std::array<std::string, 3>& style_names() {
    static const std::array<std::string, 3> names = {"formal", "informal", "third_party"};
    return names;
}

const std::string& to_string(Severity s) { return severity_names()[static_cast<int>(s)]; }
const std::string& to_string(Style s) { return style_names()[static_cast<int>(s)]; }

std::optional<Severity> severity_from_string(const std::string& s) {
    for (int i = 0; i < kNumClasses; ++i) {
        if (s == severity_names()[i]) return static_cast<Severity>(i);
    }
    return std::nullopt;
}

std::optional<Style> style_from_string(const std::string& s) {
    for (int i = 0; i < kNumStyles; ++i) {
        if (s == style_names()[i]) return static_cast<Style>(i);
    }
    return std::nullopt;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "Water Ingress", "Engine Failure", "Fire Smoke",   "Collision",
        "Grounding",     "Man Overboard",  "Medical",      "Flooding",
        "Capsize",       "Piracy",         "Adrift",       "Navigation Hazard"};
    return names;
}

bool is_known_scenario(const std::string& name) {
    const auto& names = scenario_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

const CodewordLexicon& CodewordLexicon::standard() {
    static const CodewordLexicon lex{{
        {"MAYDAY", {"mayday", "may-day", "may day"}},
        {"PAN-PAN", {"pan-pan", "pan pan", "panpan"}},
        {"SECURITE", {"securite", "say-curitay", "saycuritay"}},
    }};
    return lex;
}

// ---------------------------------------------------------------------------
// Codeword masking
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kMaskToken = "[SIGNAL]";

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-';
}

struct TokenSpan {
    std::size_t begin;
    std::size_t end;  // one past the last character
};

std::vector<TokenSpan> word_spans(const std::string& s) {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_word_char(s[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && is_word_char(s[j])) ++j;
        spans.push_back({i, j});
        i = j;
    }
    return spans;
}

// A variant compiled to its lowercase token sequence ("pan pan" -> 2 tokens).
struct CompiledVariant {
    std::vector<std::string> tokens;
    const std::string* canonical;
};

std::vector<CompiledVariant> compile(const CodewordLexicon& lexicon) {
    std::vector<CompiledVariant> out;
    for (const auto& entry : lexicon.entries) {
        for (const auto& variant : entry.variants) {
            CompiledVariant cv;
            cv.tokens = text::split_ws(text::to_lower(variant));
            cv.canonical = &entry.canonical;
            out.push_back(std::move(cv));
        }
    }
    // Longest variants first so "pan pan" wins over a hypothetical "pan".
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.tokens.size() > b.tokens.size();
    });
    return out;
}

// Tokens of a multi-token variant must be separated by whitespace only.
bool whitespace_between(const std::string& s, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
        if (std::isspace(static_cast<unsigned char>(s[i])) == 0) return false;
    }
    return true;
}

}  // namespace

MaskResult mask_codewords(const std::string& input, const CodewordLexicon& lexicon) {
    const auto& variants = compile(lexicon);
    const auto spans = word_spans(input);

    std::vector<std::string> lowered(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        lowered[i] =
            text::to_lower(input.substr(spans[i].begin, spans[i].end - spans[i].begin));
    }

    MaskResult result;
    std::string out;
    out.reserve(input.size());
    std::size_t copied = 0;  // characters of input already emitted
    std::size_t t = 0;       // current token index

    while (t < spans.size()) {
        const CompiledVariant* hit = nullptr;
        for (const auto& v : variants) {
            if (t + v.tokens.size() > spans.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < v.tokens.size() && ok; ++k) {
                if (lowered[t + k] != v.tokens[k]) ok = false;
                if (ok && k > 0 &&
                    !whitespace_between(input, spans[t + k - 1].end, spans[t + k].begin)) {
                    ok = false;
                }
            }
            if (ok) {
                hit = &v;
                break;
            }
        }
        if (hit == nullptr) {
            ++t;
            continue;
        }
        const std::size_t first = spans[t].begin;
        const std::size_t last = spans[t + hit->tokens.size() - 1].end;
        out.append(input, copied, first - copied);
        out.append(kMaskToken);
        copied = last;
        result.found.push_back(*hit->canonical);
        t += hit->tokens.size();
    }
    out.append(input, copied, input.size() - copied);
    result.text = std::move(out);
    return result;
}

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

bool SplitRatios::valid() const {
    auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
    return in_unit(train) && in_unit(val) && in_unit(test) &&
           std::abs(train + val + test - 1.0) <= 1e-9;
}

namespace {

// Largest-remainder apportionment of `total` across `weights`.
std::vector<std::size_t> largest_remainder(std::size_t total,
                                           const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    std::vector<std::size_t> counts(n);
    std::vector<std::pair<double, std::size_t>> remainders(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = static_cast<double>(total) * weights[i];
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = {exact - std::floor(exact), i};
        assigned += counts[i];
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
        counts[remainders[k % n].second] += 1;
    }
    return counts;
}

}  // namespace

SplitResult stratified_split(const MessageSet& set, const SplitRatios& ratios,
                             std::uint64_t seed) {
    if (!ratios.valid()) {
        throw std::invalid_argument("stratified_split: ratios must lie in [0,1] and sum to 1");
    }
    if (set.empty()) {
        throw std::invalid_argument("stratified_split: empty message set");
    }

    // Class membership, ordered by id so the partition ignores input order.
    std::array<std::vector<const MessageRecord*>, kNumClasses> members;
    for (const auto& rec : set) members[static_cast<int>(rec.severity)].push_back(&rec);
    for (auto& m : members) {
        std::sort(m.begin(), m.end(),
                  [](const MessageRecord* a, const MessageRecord* b) { return a->id < b->id; });
    }

    const std::vector<double> part_ratios = {ratios.train, ratios.val, ratios.test};
    constexpr int kParts = 3;

    // Stage 1: global part sizes.
    const auto part_sizes = largest_remainder(set.size(), part_ratios);

    // Stage 2: controlled rounding of the class x part quota matrix. Floors
    // first, then spare slots go to the cells with the largest fractional
    // remainders, subject to row (class) and column (part) totals.
    std::array<std::array<std::size_t, kParts>, kNumClasses> alloc{};
    std::array<std::size_t, kNumClasses> row_left{};
    std::array<long long, kParts> col_left{};
    for (int p = 0; p < kParts; ++p) col_left[p] = static_cast<long long>(part_sizes[p]);

    struct Cell {
        double remainder;
        int cls;
        int part;
    };
    std::vector<Cell> cells;
    for (int c = 0; c < kNumClasses; ++c) {
        const auto n_c = members[c].size();
        std::size_t floored = 0;
        for (int p = 0; p < kParts; ++p) {
            const double exact = static_cast<double>(n_c) * part_ratios[p];
            alloc[c][p] = static_cast<std::size_t>(std::floor(exact));
            col_left[p] -= static_cast<long long>(alloc[c][p]);
            floored += alloc[c][p];
            cells.push_back({exact - std::floor(exact), c, p});
        }
        row_left[c] = n_c - floored;
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell& a, const Cell& b) { return a.remainder > b.remainder; });
    for (const auto& cell : cells) {
        if (row_left[cell.cls] > 0 && col_left[cell.part] > 0) {
            alloc[cell.cls][cell.part] += 1;
            row_left[cell.cls] -= 1;
            col_left[cell.part] -= 1;
        }
    }
    // Ties can leave a slot unplaced; sweep once more without the +1 cap.
    for (int c = 0; c < kNumClasses; ++c) {
        for (int p = 0; p < kParts && row_left[c] > 0; ++p) {
            while (row_left[c] > 0 && col_left[p] > 0) {
                alloc[c][p] += 1;
                row_left[c] -= 1;
                col_left[p] -= 1;
            }
        }
    }

    SplitResult result;
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<const MessageRecord*> order = members[c];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c) + 1));
        rng.shuffle(order);
        std::size_t i = 0;
        for (std::size_t k = 0; k < alloc[c][0]; ++k) result.train.push_back(*order[i++]);
        for (std::size_t k = 0; k < alloc[c][1]; ++k) result.val.push_back(*order[i++]);
        for (std::size_t k = 0; k < alloc[c][2]; ++k) result.test.push_back(*order[i++]);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Validation and JSONL persistence
// ---------------------------------------------------------------------------

std::string validate(const MessageRecord& rec, const CodewordLexicon& lexicon) {
    if (rec.id.empty()) return "id is empty";
    if (rec.severity == Severity::Routine && (rec.has_codeword || !rec.codeword.empty())) {
        return "Routine record carries a codeword";
    }
    if (rec.has_codeword != !rec.codeword.empty()) {
        return "has_codeword flag disagrees with codeword field";
    }
    if (rec.has_codeword) {
        bool known = false;
        for (const auto& e : lexicon.entries) known = known || e.canonical == rec.codeword;
        if (!known) return "unknown codeword '" + rec.codeword + "'";
        const auto mask = mask_codewords(rec.text, lexicon);
        if (std::find(mask.found.begin(), mask.found.end(), rec.codeword) ==
            mask.found.end()) {
            return "text does not contain claimed codeword " + rec.codeword;
        }
    }
    if (rec.text_masked != mask_codewords(rec.text, lexicon).text) {
        return "text_masked does not equal mask_codewords(text)";
    }
    if (rec.mmsi.size() != 9 || !text::is_digits(rec.mmsi)) {
        return "mmsi must be exactly nine decimal digits";
    }
    if (rec.pob < 0) return "pob must be non-negative";
    if (!is_known_scenario(rec.scenario)) return "unknown scenario '" + rec.scenario + "'";
    return {};
}

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string>& record_fields() {
    static const std::vector<std::string> fields = {
        "id",          "text",      "severity",  "style",
        "scenario",    "has_codeword", "codeword", "text_masked",
        "vessel_name", "call_sign", "mmsi",      "position",
        "pob",         "nature_of_incident"};
    return fields;
}

ordered_json record_to_json(const MessageRecord& rec) {
    ordered_json j;
    j["id"] = rec.id;
    j["text"] = rec.text;
    j["severity"] = to_string(rec.severity);
    j["style"] = to_string(rec.style);
    j["scenario"] = rec.scenario;
    j["has_codeword"] = rec.has_codeword;
    if (rec.has_codeword) j["codeword"] = rec.codeword;
    j["text_masked"] = rec.text_masked;
    j["vessel_name"] = rec.vessel_name;
    j["call_sign"] = rec.call_sign;
    j["mmsi"] = rec.mmsi;
    j["position"] = rec.position;
    j["pob"] = rec.pob;
    j["nature_of_incident"] = rec.nature_of_incident;
    return j;
}

std::string get_string(const ordered_json& j, const char* key) {
    if (!j.contains(key)) throw std::runtime_error(std::string("missing field '") + key + "'");
    if (!j[key].is_string()) throw std::runtime_error(std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

MessageRecord record_from_json(const ordered_json& j) {
    if (!j.is_object()) throw std::runtime_error("line is not a JSON object");
    for (const auto& item : j.items()) {
        const auto& known = record_fields();
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw std::runtime_error("unknown field '" + item.key() + "'");
        }
    }
    MessageRecord rec;
    rec.id = get_string(j, "id");
    rec.text = get_string(j, "text");
    const auto sev = severity_from_string(get_string(j, "severity"));
    if (!sev) throw std::runtime_error("invalid severity");
    rec.severity = *sev;
    const auto style = style_from_string(get_string(j, "style"));
    if (!style) throw std::runtime_error("invalid style");
    rec.style = *style;
    rec.scenario = get_string(j, "scenario");
    if (!j.contains("has_codeword") || !j["has_codeword"].is_boolean()) {
        throw std::runtime_error("field 'has_codeword' must be a boolean");
    }
    rec.has_codeword = j["has_codeword"].get<bool>();
    if (j.contains("codeword") && !j["codeword"].is_null()) {
        rec.codeword = get_string(j, "codeword");
    }
    rec.text_masked = get_string(j, "text_masked");
    rec.vessel_name = get_string(j, "vessel_name");
    rec.call_sign = get_string(j, "call_sign");
    rec.mmsi = get_string(j, "mmsi");
    rec.position = get_string(j, "position");
    if (!j.contains("pob") || !j["pob"].is_number_integer()) {
        throw std::runtime_error("field 'pob' must be an integer");
    }
    rec.pob = j["pob"].get<int>();
    rec.nature_of_incident = get_string(j, "nature_of_incident");
    return rec;
}

}  // namespace

MessageSet load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    MessageSet set;
    std::string line;
    std::size_t lineno = 0;
    const auto& lexicon = CodewordLexicon::standard();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = ordered_json::parse(line);
            MessageRecord rec = record_from_json(j);
            const std::string problem = validate(rec, lexicon);
            if (!problem.empty()) throw std::runtime_error(problem);
            set.push_back(std::move(rec));
        } catch (const std::exception& ex) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": " << ex.what();
            throw std::runtime_error(msg.str());
        }
    }
    return set;
}

void save_jsonl(const MessageSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    for (const auto& rec : set) {
        out << record_to_json(rec).dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dlab::corpus
