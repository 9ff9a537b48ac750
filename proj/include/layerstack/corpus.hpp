#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace layerstack {

// Term -> occurrence count. std::map keeps iteration lexicographic, which the
// rest of the pipeline relies on for reproducible output.
using TermCounts = std::map<std::string, std::uint64_t>;

struct TokenizePolicy {
    std::set<std::string> stop_words;

    // Built-in English function-word list.
    static TokenizePolicy english();
    // One term per line; blank lines and lines starting with '#' are ignored.
    static TokenizePolicy from_file(const std::filesystem::path& path);
};

const std::set<std::string>& default_stop_words();

/// Lowercases ASCII letters, splits on every byte that is not an ASCII letter
/// or digit, then drops purely numeric tokens and stop words. Order is kept.
std::vector<std::string> tokenize(std::string_view text, const TokenizePolicy& policy);

TermCounts term_frequencies(const std::vector<std::string>& tokens);

std::uint64_t total_count(const TermCounts& counts);

struct Document {
    std::string id;
    std::string title;
    TermCounts token_counts;
    std::uint64_t total_tokens = 0;
    // Empty for documents that were not read from disk.
    std::filesystem::path source;

    static Document from_counts(std::string id, std::string title, TermCounts counts);
    static Document from_text(std::string id, std::string title, std::string_view text,
                              const TokenizePolicy& policy);
};

class Corpus {
public:
    Corpus() = default;
    // Sorts documents by id and rejects duplicate ids.
    Corpus(std::vector<Document> documents, std::set<std::string> stop_words);

    const std::vector<Document>& documents() const { return documents_; }
    const std::set<std::string>& vocabulary() const { return vocabulary_; }
    const std::set<std::string>& stop_words() const { return stop_words_; }
    std::size_t size() const { return documents_.size(); }
    bool empty() const { return documents_.empty(); }

    // Index of the document with the given id; throws if absent.
    std::size_t index_of(std::string_view id) const;
    const Document& at(std::string_view id) const { return documents_[index_of(id)]; }

    // Counts summed over every document.
    TermCounts aggregate_counts() const;
    // Counts summed over every document except documents()[excluded].
    TermCounts leave_one_out(std::size_t excluded) const;

    // New corpus holding only the listed ids (same stop words).
    Corpus subset(const std::vector<std::string>& ids) const;

private:
    std::vector<Document> documents_;
    std::set<std::string> vocabulary_;
    std::set<std::string> stop_words_;
};

/// Reads a directory of .txt files (id = file stem, title = id) or a
/// JSON-lines manifest of {"id", "title", "path"} records. Relative manifest
/// paths resolve against the manifest's directory.
Corpus ingest_corpus(const std::filesystem::path& source, const TokenizePolicy& policy);

// Paths in the order ingest_corpus reads them; used for content hashing and
// the bit layer.
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& source);

bool is_valid_utf8(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

struct RankedTerm {
    std::string term;
    std::uint64_t count = 0;
};

// Descending by count, ties by ascending term.
std::vector<RankedTerm> top_k_terms(const Document& doc, std::size_t k);
std::vector<RankedTerm> top_k_terms(const TermCounts& counts, std::size_t k);

struct ScatterPoint {
    std::string term;
    double doc_proportion = 0.0;
    double reference_proportion = 0.0;
    // log10(doc_proportion) - log10(reference_proportion)
    double deviation = 0.0;
};

// One point per term present on both sides, in term order.
std::vector<ScatterPoint> frequency_scatter(const Document& doc, const TermCounts& reference);

} // namespace layerstack
