#include "layerstack/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "layerstack/error.hpp"

namespace layerstack {

namespace fs = std::filesystem;

namespace {

bool is_alnum_ascii(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_numeric(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

} // namespace

const std::set<std::string>& default_stop_words() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "ain", "all", "also", "am",
        "an", "and", "any", "are", "aren", "as", "at", "be", "because", "been",
        "before", "being", "below", "between", "both", "but", "by", "can", "could",
        "couldn", "d", "did", "didn", "do", "does", "doesn", "doing", "don", "down",
        "during", "each", "et", "etc", "few", "for", "from", "further", "had", "hadn",
        "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers", "herself",
        "him", "himself", "his", "how", "i", "if", "in", "into", "is", "isn", "it",
        "its", "itself", "just", "ll", "m", "ma", "may", "me", "might", "more", "most",
        "must", "mustn", "my", "myself", "no", "nor", "not", "now", "o", "of", "off",
        "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
        "own", "re", "s", "same", "shall", "shan", "she", "should", "shouldn", "so",
        "some", "such", "t", "than", "that", "the", "their", "theirs", "them",
        "themselves", "then", "there", "these", "they", "this", "those", "through", "to",
        "too", "under", "until", "up", "us", "ve", "very", "was", "wasn", "we", "were",
        "weren", "what", "when", "where", "which", "while", "who", "whom", "why", "will",
        "with", "won", "would", "wouldn", "y", "you", "your", "yours", "yourself",
        "yourselves",
    };
    return words;
}

TokenizePolicy TokenizePolicy::english() { return TokenizePolicy{default_stop_words()}; }

TokenizePolicy TokenizePolicy::from_file(const fs::path& path) {
    const std::string text = read_file(path);
    if (!is_valid_utf8(text))
        throw Error("stop-word file is not valid UTF-8: " + path.string());
    TokenizePolicy policy;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        // Normalize through the tokenizer so "The" and "the " both match.
        for (auto& term : tokenize(line, TokenizePolicy{}))
            policy.stop_words.insert(std::move(term));
    }
    return policy;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizePolicy& policy) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !is_numeric(current) && !policy.stop_words.contains(current))
            out.push_back(current);
        current.clear();
    };
    for (unsigned char c : text) {
        if (is_alnum_ascii(c)) {
            current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

TermCounts term_frequencies(const std::vector<std::string>& tokens) {
    TermCounts counts;
    for (const auto& t : tokens)
        ++counts[t];
    return counts;
}

std::uint64_t total_count(const TermCounts& counts) {
    std::uint64_t total = 0;
    for (const auto& [term, n] : counts)
        total += n;
    return total;
}

Document Document::from_counts(std::string id, std::string title, TermCounts counts) {
    for (auto it = counts.begin(); it != counts.end();) {
        if (it->first.empty())
            throw Error("document '" + id + "' has an empty term");
        it = it->second == 0 ? counts.erase(it) : std::next(it);
    }
    Document doc;
    doc.id = std::move(id);
    doc.title = std::move(title);
    doc.total_tokens = total_count(counts);
    doc.token_counts = std::move(counts);
    return doc;
}

Document Document::from_text(std::string id, std::string title, std::string_view text,
                             const TokenizePolicy& policy) {
    return from_counts(std::move(id), std::move(title), term_frequencies(tokenize(text, policy)));
}

Corpus::Corpus(std::vector<Document> documents, std::set<std::string> stop_words)
    : documents_(std::move(documents)), stop_words_(std::move(stop_words)) {
    std::sort(documents_.begin(), documents_.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < documents_.size(); ++i) {
        if (documents_[i].id == documents_[i - 1].id)
            throw Error("duplicate document id: " + documents_[i].id);
    }
    for (const auto& doc : documents_) {
        for (const auto& [term, n] : doc.token_counts) {
            if (stop_words_.contains(term))
                throw Error("stop word '" + term + "' present in document " + doc.id);
            vocabulary_.insert(term);
        }
    }
}

std::size_t Corpus::index_of(std::string_view id) const {
    auto it = std::lower_bound(documents_.begin(), documents_.end(), id,
                               [](const Document& d, std::string_view key) { return d.id < key; });
    if (it == documents_.end() || it->id != id)
        throw Error("unknown document id: " + std::string(id));
    return static_cast<std::size_t>(it - documents_.begin());
}

TermCounts Corpus::aggregate_counts() const {
    TermCounts total;
    for (const auto& doc : documents_)
        for (const auto& [term, n] : doc.token_counts)
            total[term] += n;
    return total;
}

TermCounts Corpus::leave_one_out(std::size_t excluded) const {
    TermCounts total;
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        if (i == excluded)
            continue;
        for (const auto& [term, n] : documents_[i].token_counts)
            total[term] += n;
    }
    return total;
}

Corpus Corpus::subset(const std::vector<std::string>& ids) const {
    std::vector<Document> docs;
    docs.reserve(ids.size());
    for (const auto& id : ids)
        docs.push_back(at(id));
    return Corpus(std::move(docs), stop_words_);
}

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n)
            return false;
        for (std::size_t j = 1; j < len; ++j) {
            const auto cc = static_cast<unsigned char>(bytes[i + j]);
            if ((cc & 0xC0) != 0x80)
                return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong encodings, surrogates, out of range.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
            return false;
        i += len;
    }
    return true;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw Error("cannot read file: " + path.string());
    return data;
}

namespace {

struct SourceEntry {
    std::string id;
    std::string title;
    fs::path path;
};

std::vector<SourceEntry> list_sources(const fs::path& source) {
    std::error_code ec;
    if (!fs::exists(source, ec))
        throw Error("corpus source does not exist: " + source.string());

    std::vector<SourceEntry> entries;
    if (fs::is_directory(source, ec)) {
        for (const auto& entry : fs::directory_iterator(source)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".txt")
                continue;
            const std::string stem = entry.path().stem().string();
            entries.push_back({stem, stem, entry.path()});
        }
    } else {
        const std::string text = read_file(source);
        if (!is_valid_utf8(text))
            throw Error("manifest is not valid UTF-8: " + source.string());
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw Error("manifest line " + std::to_string(line_no) + ": " + e.what());
            }
            if (!rec.is_object() || !rec.contains("path") || !rec["path"].is_string())
                throw Error("manifest line " + std::to_string(line_no) +
                            ": record needs a string \"path\"");
            fs::path path = rec["path"].get<std::string>();
            if (path.is_relative())
                path = source.parent_path() / path;
            std::string id = rec.contains("id") ? rec["id"].get<std::string>() : path.stem().string();
            std::string title = rec.contains("title") ? rec["title"].get<std::string>() : id;
            entries.push_back({std::move(id), std::move(title), std::move(path)});
        }
    }
    if (entries.empty())
        throw Error("empty corpus");
    std::sort(entries.begin(), entries.end(),
              [](const SourceEntry& a, const SourceEntry& b) { return a.id < b.id; });
    return entries;
}

} // namespace

std::vector<fs::path> corpus_files(const fs::path& source) {
    std::vector<fs::path> paths;
    for (auto& e : list_sources(source))
        paths.push_back(std::move(e.path));
    return paths;
}

Corpus ingest_corpus(const fs::path& source, const TokenizePolicy& policy) {
    std::vector<Document> docs;
    for (auto& entry : list_sources(source)) {
        const std::string text = read_file(entry.path);
        if (!is_valid_utf8(text))
            throw Error("file is not valid UTF-8: " + entry.path.string());
        Document doc = Document::from_text(std::move(entry.id), std::move(entry.title), text, policy);
        doc.source = entry.path;
        docs.push_back(std::move(doc));
    }
    return Corpus(std::move(docs), policy.stop_words);
}

std::vector<RankedTerm> top_k_terms(const TermCounts& counts, std::size_t k) {
    if (k == 0)
        throw Error("k must be at least 1");
    std::vector<RankedTerm> ranked;
    ranked.reserve(counts.size());
    for (const auto& [term, n] : counts)
        ranked.push_back({term, n});
    auto by_rank = [](const RankedTerm& a, const RankedTerm& b) {
        return a.count != b.count ? a.count > b.count : a.term < b.term;
    };
    const std::size_t keep = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                      ranked.end(), by_rank);
    ranked.resize(keep);
    return ranked;
}

std::vector<RankedTerm> top_k_terms(const Document& doc, std::size_t k) {
    return top_k_terms(doc.token_counts, k);
}

std::vector<ScatterPoint> frequency_scatter(const Document& doc, const TermCounts& reference) {
    const auto doc_total = static_cast<double>(doc.total_tokens);
    const auto ref_total = static_cast<double>(total_count(reference));
    if (doc_total == 0 || ref_total == 0)
        throw Error("frequency scatter needs non-empty document and reference");

    std::vector<ScatterPoint> points;
    for (const auto& [term, n] : doc.token_counts) {
        auto it = reference.find(term);
        if (it == reference.end() || it->second == 0)
            continue;
        ScatterPoint p;
        p.term = term;
        p.doc_proportion = static_cast<double>(n) / doc_total;
        p.reference_proportion = static_cast<double>(it->second) / ref_total;
        p.deviation = p.doc_proportion == p.reference_proportion
                          ? 0.0
                          : std::log10(p.doc_proportion / p.reference_proportion);
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace layerstack
