#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace themetrace {

/// One publication: opaque id, publication year, normalized keyword set.
struct Document {
    std::string id;
    int year = 0;
    std::set<std::string> terms;
};

/// A labelled, inclusive year range.
struct PeriodSpec {
    std::string label;
    int start_year = 0;
    int end_year = 0;
};

/// Counters for records discarded during parsing and slicing.
struct DropStats {
    std::size_t missing_id = 0;
    std::size_t missing_year = 0;
    std::size_t missing_terms = 0;
    std::size_t outside_periods = 0;

    std::size_t total() const {
        return missing_id + missing_year + missing_terms + outside_periods;
    }
};

/// A document collection, optionally partitioned into time periods.
///
/// After slice_periods() every retained document maps to exactly one
/// period; period document sets are disjoint by construction.
struct Corpus {
    std::vector<Document> documents;
    std::vector<PeriodSpec> periods;
    std::unordered_map<std::string, int> period_of; // doc id -> period index
    DropStats drops;

    /// Documents assigned to period `t`, in corpus order.
    std::vector<const Document*> docs_in_period(int t) const;
};

/// Variant -> canonical term mapping, case-insensitive, idempotent.
class SynonymTable {
public:
    SynonymTable() = default;

    /// Builds the table and validates that no canonical target is itself a
    /// variant of something else. Throws ValidationError on a chain.
    explicit SynonymTable(const std::map<std::string, std::string>& entries);

    /// Canonical form of `term` (lowercased lookup), or `term` itself.
    const std::string& resolve(const std::string& term) const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string> entries_;
};

enum class InputFormat { tabular, canonical_json };
enum class KeywordField { author_keywords, index_keywords };

/// Column names for tabular input (Web of Science style defaults).
struct TabularColumns {
    std::string id = "UT";
    std::string year = "PY";
    std::string author_keywords = "DE";
    std::string index_keywords = "ID";
};

struct ParseOptions {
    InputFormat format = InputFormat::canonical_json;
    KeywordField field = KeywordField::author_keywords;
    TabularColumns columns;
    char delimiter = '\t'; // field separator for tabular input
};

/// Parses a corpus from `in`. Records lacking an id, a year, or any term
/// are dropped and counted in Corpus::drops. Term strings are trimmed,
/// lowercased and deduplicated. Throws ParseError on malformed input or
/// when no valid record remains.
Corpus parse_corpus(std::istream& in, const ParseOptions& opts);

/// Reads a two-column delimited synonym file (variant, then canonical).
SynonymTable load_synonyms(std::istream& in);

/// Replaces every variant term by its canonical form and re-deduplicates.
Corpus harmonize(const Corpus& corpus, const SynonymTable& table);

/// Assigns documents to periods; documents outside every spec are dropped
/// and counted. Specs must be disjoint and ordered ascending.
Corpus slice_periods(const Corpus& corpus, const std::vector<PeriodSpec>& specs);

/// Throws ValidationError unless the specs are non-empty, individually
/// well-formed, disjoint and ordered ascending.
void validate_period_specs(const std::vector<PeriodSpec>& specs);

/// Lowercases ASCII letters and trims surrounding whitespace.
std::string normalize_term(const std::string& raw);

} // namespace themetrace
