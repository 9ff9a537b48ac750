#include "layerstack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <openssl/evp.h>

#include "layerstack/belief.hpp"
#include "layerstack/error.hpp"
#include "layerstack/infotheory.hpp"
#include "layerstack/intelligence.hpp"
#include "layerstack/wisdom.hpp"

namespace layerstack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kFig3Terms = 10;

// Entropies and derived information quantities are reported to 6 decimals.
double round6(double x) {
    const double r = std::round(x * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

json skipped(const std::string& reason) { return json{{"skipped", true}, {"reason", reason}}; }

json row_json(const CorrelationResult& r) {
    return json{{"doc_id", r.doc_id}, {"title", r.title}, {"r", r.r}, {"p_value", r.p_value}, {"n", r.n}};
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
            throw Error("cannot initialize SHA-256");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(std::string_view bytes) {
        if (EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()) != 1)
            throw Error("SHA-256 update failed");
    }
    // Length-prefixed so concatenation boundaries are part of the digest.
    void field(std::string_view bytes) {
        update(std::to_string(bytes.size()));
        update(":");
        update(bytes);
    }
    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_, digest, &len) != 1)
            throw Error("SHA-256 finalization failed");
        static const char* digits = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out += digits[digest[i] >> 4];
            out += digits[digest[i] & 0xF];
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

std::string corpus_content_hash(const Corpus& corpus) {
    Sha256 h;
    for (const auto& doc : corpus.documents()) {
        h.field(doc.id);
        for (const auto& [term, n] : doc.token_counts) {
            h.field(term);
            h.field(std::to_string(n));
        }
    }
    for (const auto& w : corpus.stop_words())
        h.field(w);
    return h.hex();
}

std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string tsv_field(std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return s;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot write " + path.string());
    f << contents;
    if (!f)
        throw Error("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw Error("cannot create output directory " + dir.string());
}

template <typename F>
auto run_layer(const char* name, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(std::string(name) + " layer: " + e.what());
    }
}

json bit_layer(const RunConfig& config, const Corpus& corpus) {
    if (!config.force_bit_layer)
        return skipped("input is digital text; bit layer not needed (use --force-bit-layer)");
    json docs = json::array();
    for (const auto& doc : corpus.documents()) {
        if (doc.source.empty())
            return skipped("documents were not read from files");
        const std::string bytes = read_file(doc.source);
        json entry{{"doc_id", doc.id}, {"bytes", bytes.size()}};
        if (bytes.empty())
            entry["entropy_bits_per_byte"] = nullptr;
        else
            entry["entropy_bits_per_byte"] = round6(bitstream_entropy(
                {reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()}));
        docs.push_back(std::move(entry));
    }
    return json{{"documents", std::move(docs)}};
}

json data_layer(const Corpus& corpus) {
    json docs = json::array();
    for (const auto& doc : corpus.documents()) {
        json entry{{"doc_id", doc.id},
                   {"total_tokens", doc.total_tokens},
                   {"distinct_terms", doc.token_counts.size()}};
        if (doc.total_tokens == 0) {
            entry["token_entropy"] = nullptr;
            entry["max_entropy"] = nullptr;
        } else {
            entry["token_entropy"] = round6(count_entropy(doc.token_counts));
            entry["max_entropy"] = round6(hartley_entropy({doc.token_counts.size()}));
        }
        docs.push_back(std::move(entry));
    }
    const TermCounts all = corpus.aggregate_counts();
    json out{{"documents", std::move(docs)}, {"vocabulary_size", corpus.vocabulary().size()}};
    out["corpus_token_entropy"] = all.empty() ? json(nullptr) : json(round6(count_entropy(all)));
    return out;
}

// Joint over (source, term) where source is the document or the rest of the
// corpus; the residual is the term uncertainty left once the source is known.
json information_layer(const Corpus& corpus) {
    json docs = json::array();
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Document& doc = corpus.documents()[i];
        const TermCounts rest = corpus.leave_one_out(i);
        const auto total = static_cast<double>(doc.total_tokens + total_count(rest));
        if (doc.total_tokens == 0 || total_count(rest) == 0)
            continue;
        std::map<JointDistribution::Key, double> cells;
        for (const auto& [term, n] : doc.token_counts)
            cells[{"document", term}] = static_cast<double>(n) / total;
        for (const auto& [term, n] : rest)
            cells[{"rest", term}] = static_cast<double>(n) / total;
        const JointDistribution joint(std::move(cells));
        const double residual = residual_entropy(joint);
        const double information = shannon_entropy(joint.receiver_marginal()) - residual;
        docs.push_back(json{{"doc_id", doc.id},
                            {"residual_entropy", round6(residual)},
                            {"source_term_information", round6(information)}});
        sum += residual;
        ++counted;
    }
    json out{{"documents", std::move(docs)}};
    out["mean_residual_entropy"] = counted ? json(round6(sum / static_cast<double>(counted))) : json(nullptr);
    return out;
}

json ranking_json(const std::vector<CorrelationResult>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(row_json(r));
    return arr;
}

json clustering_json(const AggregationRound& round) {
    json clusters = json::array();
    for (const auto& sel : round.selection.clusters) {
        clusters.push_back(json{{"cluster", sel.cluster},
                                {"members", sel.members},
                                {"selected", ranking_json(sel.selected)}});
    }
    return json{{"k", round.clustering.k},
                {"seed", round.clustering.seed},
                {"iterations", round.clustering.iterations},
                {"inertia", round6(round.clustering.inertia)},
                {"clusters", std::move(clusters)}};
}

json entropic_gains(const RunConfig& config, const Corpus& corpus, const Ranking& knowledge) {
    if (knowledge.rows.empty())
        return skipped("knowledge ranking is empty");
    EntropicState state;
    state.reservoir_strength = config.reservoir_strength;
    std::vector<std::string> selected;
    for (const auto& row : knowledge.rows) {
        selected.push_back(row.doc_id);
        for (const auto& [term, n] : corpus.at(row.doc_id).token_counts)
            state.macrostate[term] += n;
    }
    std::vector<std::pair<std::string, double>> gains;
    for (const auto& doc : corpus.documents()) {
        if (doc.total_tokens == 0 ||
            std::find(selected.begin(), selected.end(), doc.id) != selected.end())
            continue;
        gains.emplace_back(doc.id, entropic_gain(state, doc));
    }
    std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    json candidates = json::array();
    for (const auto& [id, g] : gains)
        candidates.push_back(json{{"doc_id", id}, {"gain", round6(g)}});
    std::sort(selected.begin(), selected.end());
    return json{{"reservoir_strength", config.reservoir_strength},
                {"macrostate", selected},
                {"macrostate_entropy", round6(count_entropy(state.macrostate))},
                {"candidates", std::move(candidates)}};
}

json decomposition_json(const CrowdDecomposition& d) {
    return json{{"crowd_mean", d.crowd_mean},
                {"crowd_sq_error", d.crowd_sq_error},
                {"avg_individual_sq_error", d.avg_individual_sq_error},
                {"diversity", d.diversity}};
}

// Keyword frame: the top_k corpus terms. Evidence per keyword: its share of
// sum over ranked documents of max(r, 0) * proportion of the keyword.
json belief_layer(const RunConfig& config, const Corpus& corpus, const Ranking& knowledge) {
    const auto keywords = top_k_terms(corpus.aggregate_counts(), std::min(config.top_k, kMaxFrameSize));
    if (keywords.empty())
        return skipped("corpus has no terms");
    std::vector<std::string> names;
    for (const auto& kw : keywords)
        names.push_back(kw.term);
    const Frame frame(names);

    std::map<std::string, double> contribution;
    double total = 0.0;
    for (const auto& row : knowledge.rows) {
        const Document& doc = corpus.at(row.doc_id);
        const double weight = std::max(row.r, 0.0);
        for (const auto& name : names) {
            auto it = doc.token_counts.find(name);
            const double p = it == doc.token_counts.end()
                                 ? 0.0
                                 : static_cast<double>(it->second) / static_cast<double>(doc.total_tokens);
            contribution[name] += weight * p;
            total += weight * p;
        }
    }
    std::map<std::string, double> evidence;
    for (const auto& name : names)
        evidence[name] = total > 0.0 ? contribution[name] / total : 0.0;

    const MassFunction posterior = keyword_belief_update(MassFunction::vacuous(frame), evidence);
    json evidence_json = json::object();
    for (const auto& [name, s] : evidence)
        evidence_json[name] = s;
    json out = belief_summary(posterior);
    out["evidence"] = std::move(evidence_json);
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (k == 0)
        throw Error("k must be at least 1");
    if (top_k == 0)
        throw Error("top must be at least 1");
    if (per_cluster == 0)
        throw Error("per-cluster must be at least 1");
    if (!(reservoir_strength > 0.0) || !std::isfinite(reservoir_strength))
        throw Error("reservoir strength must be positive");
}

json RunConfig::to_json() const {
    return json{{"source", source.generic_string()},
                {"stopwords", stopwords ? json(stopwords->generic_string()) : json(nullptr)},
                {"k", k},
                {"rounds", rounds},
                {"per_cluster", per_cluster},
                {"top_k", top_k},
                {"seed", seed},
                {"reservoir_strength", reservoir_strength},
                {"output_dir", output_dir.generic_string()},
                {"force_bit_layer", force_bit_layer}};
}

std::string input_content_hash(const RunConfig& config) {
    Sha256 h;
    for (const auto& path : corpus_files(config.source)) {
        h.field(path.filename().generic_string());
        h.field(read_file(path));
    }
    if (config.source.has_filename() && fs::is_regular_file(config.source))
        h.field(read_file(config.source));
    if (config.stopwords)
        h.field(read_file(*config.stopwords));
    return h.hex();
}

RunReport run_pipeline(const RunConfig& config) {
    config.validate();
    const TokenizePolicy policy =
        config.stopwords ? TokenizePolicy::from_file(*config.stopwords) : TokenizePolicy::english();
    const Corpus corpus = run_layer("ingest", [&] { return ingest_corpus(config.source, policy); });
    RunReport report = run_pipeline(config, corpus);
    report.summary["provenance"]["input_sha256"] = input_content_hash(config);
    return report;
}

RunReport run_pipeline(const RunConfig& config, const Corpus& corpus) {
    config.validate();
    if (corpus.empty())
        throw Error("empty corpus");
    RunReport report;
    json& s = report.summary;
    s["provenance"] = json{{"config", config.to_json()},
                           {"input_sha256", corpus_content_hash(corpus)},
                           {"documents", corpus.size()}};

    s["bit"] = run_layer("bit", [&] { return bit_layer(config, corpus); });
    s["data"] = run_layer("data", [&] { return data_layer(corpus); });

    for (const auto& doc : corpus.documents()) {
        std::size_t rank = 0;
        for (auto& t : top_k_terms(doc, kFig3Terms))
            report.fig3.push_back({doc.id, ++rank, std::move(t.term), t.count});
    }

    if (corpus.size() < 2) {
        const std::string reason = "corpus has fewer than 2 documents";
        report.warnings.push_back("fig4: " + reason + "; no leave-one-out reference");
        for (const char* layer : {"information", "knowledge", "intelligence", "wisdom", "belief"})
            s[layer] = skipped(reason);
        s["warnings"] = report.warnings;
        return report;
    }

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Document& doc = corpus.documents()[i];
        const TermCounts reference = corpus.leave_one_out(i);
        if (doc.total_tokens == 0 || reference.empty())
            continue;
        for (auto& p : frequency_scatter(doc, reference))
            report.fig4.push_back({doc.id, std::move(p)});
    }

    s["information"] = run_layer("information", [&] { return information_layer(corpus); });

    report.knowledge = run_layer("knowledge", [&] { return rank_documents(corpus, config.top_k); });
    for (const auto& w : report.knowledge.warnings)
        report.warnings.push_back("knowledge: " + w);
    s["knowledge"] = json{{"ranking", ranking_json(report.knowledge.rows)},
                          {"warnings", report.knowledge.warnings}};

    const AggregationResult aggregation = run_layer("intelligence", [&] {
        return iterate_aggregation(corpus, config.k, config.rounds, config.per_cluster, config.seed);
    });
    report.aggregated = aggregation.ranking;
    if (report.aggregated.rows.size() > config.top_k)
        report.aggregated.rows.resize(config.top_k);
    for (const auto& w : aggregation.warnings)
        report.warnings.push_back("intelligence: " + w);
    for (const auto& w : aggregation.ranking.warnings)
        report.warnings.push_back("intelligence: " + w);
    json rounds = json::array();
    for (const auto& round : aggregation.rounds)
        rounds.push_back(clustering_json(round));
    s["intelligence"] = json{
        {"rounds", std::move(rounds)},
        {"survivors", aggregation.survivors},
        {"ranking", ranking_json(report.aggregated.rows)},
        {"entropic_gains", run_layer("intelligence", [&] { return entropic_gains(config, corpus, report.knowledge); })},
        {"warnings", aggregation.warnings}};

    s["wisdom"] = run_layer("wisdom", [&]() -> json {
        if (aggregation.rounds.empty())
            return skipped("no aggregation rounds were run");
        if (aggregation.ranking.rows.empty())
            return skipped("aggregated ranking is empty");
        std::vector<double> cluster_best;
        for (const auto& sel : aggregation.rounds.back().selection.clusters)
            if (!sel.selected.empty())
                cluster_best.push_back(sel.selected.front().r);
        if (cluster_best.empty())
            return skipped("no cluster produced a representative");
        const double global = aggregation.ranking.rows.front().r;
        json out = decomposition_json(aggregate_round_quality(cluster_best, global));
        out["individuals"] = cluster_best;
        out["truth"] = global;
        return out;
    });

    s["belief"] = run_layer("belief", [&] { return belief_layer(config, corpus, report.knowledge); });
    if (config.top_k > kMaxFrameSize)
        report.warnings.push_back("belief: keyword frame capped at " + std::to_string(kMaxFrameSize) + " terms");
    s["warnings"] = report.warnings;
    return report;
}

MassFunction mass_from_json(const Frame& frame, const json& doc) {
    if (!doc.is_object())
        throw Error("mass file must be a JSON object of \"a,b\": mass entries");
    std::map<std::string, double> assignments;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number())
            throw Error("mass for '" + key + "' is not a number");
        assignments[key] = value.get<double>();
    }
    return make_mass(frame, assignments);
}

json mass_to_json(const MassFunction& m) {
    json out = json::object();
    for (const auto& [set, mass] : m.masses())
        out[m.frame().format(set)] = mass;
    return out;
}

std::map<std::string, double> evidence_from_json(const json& doc) {
    if (!doc.is_object())
        throw Error("evidence file must be a JSON object of keyword: score entries");
    std::map<std::string, double> evidence;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number())
            throw Error("evidence for '" + key + "' is not a number");
        evidence[key] = value.get<double>();
    }
    return evidence;
}

json belief_summary(const MassFunction& posterior) {
    const Frame& frame = posterior.frame();
    json singletons = json::object();
    for (const auto& name : frame.elements()) {
        const FocalSet s = frame.singleton(name);
        singletons[name] = json{{"belief", belief(posterior, s)}, {"plausibility", plausibility(posterior, s)}};
    }
    return json{{"frame", frame.elements()},
                {"posterior", json{{"masses", mass_to_json(posterior)}, {"singletons", std::move(singletons)}}}};
}

std::string format_table_tsv(const std::vector<CorrelationResult>& rows) {
    std::string out = "title\tcorrelation\tp_value\n";
    for (const auto& r : rows) {
        out += tsv_field(r.title.empty() ? r.doc_id : r.title);
        out += '\t';
        out += format_double("%.3f", r.r);
        out += '\t';
        out += format_double("%.2e", r.p_value);
        out += '\n';
    }
    return out;
}

json table_json(const std::vector<CorrelationResult>& rows) { return ranking_json(rows); }

std::string format_fig3_csv(const std::vector<Fig3Row>& rows) {
    std::string out = "doc_id,rank,term,count\n";
    for (const auto& r : rows)
        out += csv_field(r.doc_id) + ',' + std::to_string(r.rank) + ',' + csv_field(r.term) + ',' +
               std::to_string(r.count) + '\n';
    return out;
}

std::string format_fig4_csv(const std::vector<Fig4Row>& rows) {
    std::string out = "doc_id,term,doc_proportion,reference_proportion,deviation\n";
    for (const auto& r : rows)
        out += csv_field(r.doc_id) + ',' + csv_field(r.point.term) + ',' +
               format_double("%.9g", r.point.doc_proportion) + ',' +
               format_double("%.9g", r.point.reference_proportion) + ',' +
               format_double("%.6f", r.point.deviation == 0.0 ? 0.0 : r.point.deviation) + '\n';
    return out;
}

std::string format_report_json(const RunReport& report) { return report.summary.dump(2) + "\n"; }

std::vector<fs::path> emit_tables(const RunReport& report, TableFormat format, const fs::path& dir) {
    ensure_dir(dir);
    const char* ext = format == TableFormat::tsv ? ".tsv" : ".json";
    std::vector<fs::path> written;
    auto emit = [&](const char* stem, const std::vector<CorrelationResult>& rows) {
        const fs::path path = dir / (std::string(stem) + ext);
        write_file(path, format == TableFormat::tsv ? format_table_tsv(rows) : table_json(rows).dump(2) + "\n");
        written.push_back(path);
    };
    emit("table1", report.knowledge.rows);
    emit("table2", report.aggregated.rows);
    return written;
}

std::vector<fs::path> emit_plot_data(const RunReport& report, const fs::path& dir) {
    ensure_dir(dir);
    write_file(dir / "fig3.csv", format_fig3_csv(report.fig3));
    write_file(dir / "fig4.csv", format_fig4_csv(report.fig4));
    return {dir / "fig3.csv", dir / "fig4.csv"};
}

std::vector<fs::path> emit_all(const RunReport& report, const fs::path& dir) {
    ensure_dir(dir);
    std::vector<fs::path> written;
    write_file(dir / "report.json", format_report_json(report));
    written.push_back(dir / "report.json");
    for (auto format : {TableFormat::tsv, TableFormat::json})
        for (auto& p : emit_tables(report, format, dir))
            written.push_back(std::move(p));
    for (auto& p : emit_plot_data(report, dir))
        written.push_back(std::move(p));
    return written;
}

} // namespace layerstack
