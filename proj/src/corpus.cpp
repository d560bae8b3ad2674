#include "themetrace/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "themetrace/errors.hpp"

namespace themetrace {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits a keyword cell on ';', normalizing each piece; empties dropped.
std::set<std::string> split_keywords(const std::string& cell) {
    std::set<std::string> terms;
    std::string piece;
    std::istringstream in(cell);
    while (std::getline(in, piece, ';')) {
        std::string t = normalize_term(piece);
        if (!t.empty()) terms.insert(t);
    }
    return terms;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

Corpus parse_tabular(std::istream& in, const ParseOptions& opts) {
    Corpus corpus;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("tabular input is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_fields(line, opts.delimiter);
    auto column = [&](const std::string& name) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int id_col = column(opts.columns.id);
    const int year_col = column(opts.columns.year);
    const std::string& kw_name = opts.field == KeywordField::author_keywords
                                     ? opts.columns.author_keywords
                                     : opts.columns.index_keywords;
    const int kw_col = column(kw_name);
    if (id_col < 0 || year_col < 0 || kw_col < 0)
        throw ParseError("line 1: header is missing required column '" +
                         (id_col < 0 ? opts.columns.id : (year_col < 0 ? opts.columns.year : kw_name)) +
                         "'");

    std::unordered_set<std::string> seen_ids;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line, opts.delimiter);
        auto cell = [&](int col) -> std::string {
            return col < static_cast<int>(fields.size()) ? fields[col] : std::string();
        };

        const std::string id = trim(cell(id_col));
        if (id.empty()) { ++corpus.drops.missing_id; continue; }
        if (!seen_ids.insert(id).second)
            throw ParseError("line " + std::to_string(lineno) + ": duplicate document id '" + id + "'");

        const std::string year_str = trim(cell(year_col));
        int year = 0;
        bool year_ok = !year_str.empty() &&
                       std::all_of(year_str.begin(), year_str.end(),
                                   [](unsigned char c) { return std::isdigit(c); });
        if (year_ok) year = std::stoi(year_str);
        if (!year_ok) { ++corpus.drops.missing_year; continue; }

        std::set<std::string> terms = split_keywords(cell(kw_col));
        if (terms.empty()) { ++corpus.drops.missing_terms; continue; }

        corpus.documents.push_back(Document{id, year, std::move(terms)});
    }
    return corpus;
}

Corpus parse_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("documents") || !doc["documents"].is_array())
        throw ParseError("canonical JSON must be an object with a 'documents' array");

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    std::size_t index = 0;
    for (const auto& rec : doc["documents"]) {
        ++index;
        if (!rec.is_object())
            throw ParseError("document #" + std::to_string(index) + " is not an object");

        std::string id;
        if (rec.contains("id") && rec["id"].is_string()) id = trim(rec["id"].get<std::string>());
        if (id.empty()) { ++corpus.drops.missing_id; continue; }
        if (!seen_ids.insert(id).second)
            throw ParseError("document #" + std::to_string(index) + ": duplicate id '" + id + "'");

        if (!rec.contains("year") || !rec["year"].is_number_integer()) {
            ++corpus.drops.missing_year;
            continue;
        }
        const int year = rec["year"].get<int>();

        std::set<std::string> terms;
        if (rec.contains("terms") && rec["terms"].is_array()) {
            for (const auto& t : rec["terms"]) {
                if (!t.is_string()) continue;
                std::string norm = normalize_term(t.get<std::string>());
                if (!norm.empty()) terms.insert(std::move(norm));
            }
        }
        if (terms.empty()) { ++corpus.drops.missing_terms; continue; }

        corpus.documents.push_back(Document{std::move(id), year, std::move(terms)});
    }
    return corpus;
}

} // namespace

std::string normalize_term(const std::string& raw) { return lower(trim(raw)); }

std::vector<const Document*> Corpus::docs_in_period(int t) const {
    std::vector<const Document*> out;
    for (const auto& d : documents) {
        auto it = period_of.find(d.id);
        if (it != period_of.end() && it->second == t) out.push_back(&d);
    }
    return out;
}

SynonymTable::SynonymTable(const std::map<std::string, std::string>& entries) {
    for (const auto& [variant, canonical] : entries) {
        const std::string v = normalize_term(variant);
        const std::string c = normalize_term(canonical);
        if (v.empty() || c.empty())
            throw ValidationError("synonym table contains an empty term");
        entries_[v] = c;
    }
    // Reject variant -> variant chains before any replacement happens.
    for (const auto& [variant, canonical] : entries_) {
        auto it = entries_.find(canonical);
        if (it != entries_.end() && it->second != canonical)
            throw ValidationError("synonym chain: '" + variant + "' -> '" + canonical +
                                  "' -> '" + it->second + "'");
    }
}

const std::string& SynonymTable::resolve(const std::string& term) const {
    auto it = entries_.find(normalize_term(term));
    return it == entries_.end() ? term : it->second;
}

SynonymTable load_synonyms(std::istream& in) {
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("synonyms line " + std::to_string(lineno) +
                             ": expected two tab-separated columns");
        const std::string variant = normalize_term(line.substr(0, tab));
        const std::string canonical = normalize_term(line.substr(tab + 1));
        if (variant.empty() || canonical.empty())
            throw ParseError("synonyms line " + std::to_string(lineno) + ": empty term");
        entries[variant] = canonical;
    }
    return SynonymTable(entries);
}

Corpus parse_corpus(std::istream& in, const ParseOptions& opts) {
    Corpus corpus = opts.format == InputFormat::tabular ? parse_tabular(in, opts) : parse_json(in);
    if (corpus.documents.empty())
        throw ParseError("empty-corpus: no valid records in input (" +
                         std::to_string(corpus.drops.total()) + " dropped)");
    return corpus;
}

Corpus harmonize(const Corpus& corpus, const SynonymTable& table) {
    Corpus out = corpus;
    if (table.empty()) return out;
    for (auto& doc : out.documents) {
        std::set<std::string> terms;
        for (const auto& t : doc.terms) terms.insert(table.resolve(t));
        doc.terms = std::move(terms);
    }
    return out;
}

void validate_period_specs(const std::vector<PeriodSpec>& specs) {
    if (specs.empty()) throw ValidationError("no period specs given");
    for (const auto& s : specs)
        if (s.start_year > s.end_year)
            throw ValidationError("period '" + s.label + "': start year after end year");
    for (std::size_t i = 1; i < specs.size(); ++i)
        if (specs[i].start_year <= specs[i - 1].end_year)
            throw ValidationError("periods '" + specs[i - 1].label + "' and '" + specs[i].label +
                                  "' overlap or are out of order");
}

Corpus slice_periods(const Corpus& corpus, const std::vector<PeriodSpec>& specs) {
    validate_period_specs(specs);
    Corpus out;
    out.periods = specs;
    out.drops = corpus.drops;
    for (const auto& doc : corpus.documents) {
        int period = -1;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (doc.year >= specs[i].start_year && doc.year <= specs[i].end_year) {
                period = static_cast<int>(i);
                break;
            }
        }
        if (period < 0) {
            ++out.drops.outside_periods;
            continue;
        }
        out.period_of[doc.id] = period;
        out.documents.push_back(doc);
    }
    return out;
}

} // namespace themetrace
