// layerstack command-line front end.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "layerstack/belief.hpp"
#include "layerstack/corpus.hpp"
#include "layerstack/error.hpp"
#include "layerstack/infotheory.hpp"
#include "layerstack/intelligence.hpp"
#include "layerstack/knowledge.hpp"
#include "layerstack/pipeline.hpp"
#include "layerstack/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace layerstack;

namespace {

constexpr int kExitFatal = 1;
constexpr int kExitUsage = 2;

TokenizePolicy load_policy(const std::string& stopwords) {
    return stopwords.empty() ? TokenizePolicy::english() : TokenizePolicy::from_file(stopwords);
}

json read_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

void print_table(const std::vector<CorrelationResult>& rows, const std::string& format) {
    if (format == "json")
        std::cout << table_json(rows).dump(2) << '\n';
    else
        std::cout << format_table_tsv(rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"layerstack: layered corpus analysis from bits to beliefs"};
    app.require_subcommand(1);

    // run
    RunConfig run;
    std::string run_source, run_stopwords, run_out = run.output_dir.string();
    auto* run_cmd = app.add_subcommand("run", "Run every layer and write the report tree");
    run_cmd->add_option("source", run_source, "Directory of .txt files or JSON-lines manifest")->required();
    run_cmd->add_option("--k", run.k, "Number of clusters")->capture_default_str();
    run_cmd->add_option("--rounds", run.rounds, "Cluster-and-reselect rounds")->capture_default_str();
    run_cmd->add_option("--per-cluster", run.per_cluster, "Representatives kept per cluster")->capture_default_str();
    run_cmd->add_option("--top", run.top_k, "Rows in the ranking tables")->capture_default_str();
    run_cmd->add_option("--seed", run.seed, "Clustering seed")->capture_default_str();
    run_cmd->add_option("--strength", run.reservoir_strength, "Reservoir strength for entropic gains")
        ->capture_default_str();
    run_cmd->add_option("--stopwords", run_stopwords, "Stop-word file, one term per line");
    run_cmd->add_option("--out", run_out, "Output directory")->capture_default_str();
    run_cmd->add_flag("--force-bit-layer", run.force_bit_layer, "Compute byte entropies of the input files");

    // entropy
    std::string entropy_file, entropy_stopwords;
    auto* entropy_cmd = app.add_subcommand("entropy", "Byte and token entropy of one file as JSON");
    entropy_cmd->add_option("file", entropy_file, "Input file")->required();
    entropy_cmd->add_option("--stopwords", entropy_stopwords, "Stop-word file");

    // rank
    std::string rank_source, rank_stopwords, rank_format = "tsv";
    std::size_t rank_top = 5;
    auto* rank_cmd = app.add_subcommand("rank", "Leave-one-out correlation ranking");
    rank_cmd->add_option("source", rank_source, "Corpus directory or manifest")->required();
    rank_cmd->add_option("--top", rank_top, "Rows to keep")->capture_default_str();
    rank_cmd->add_option("--stopwords", rank_stopwords, "Stop-word file");
    rank_cmd->add_option("--format", rank_format, "tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();

    // aggregate
    std::string agg_source, agg_stopwords, agg_format = "tsv";
    std::size_t agg_k = 9, agg_rounds = 1, agg_per_cluster = 5, agg_top = 5;
    std::uint64_t agg_seed = 42;
    auto* agg_cmd = app.add_subcommand("aggregate", "Cluster, reselect and re-rank");
    agg_cmd->add_option("source", agg_source, "Corpus directory or manifest")->required();
    agg_cmd->add_option("--k", agg_k, "Number of clusters")->capture_default_str();
    agg_cmd->add_option("--rounds", agg_rounds, "Rounds")->capture_default_str();
    agg_cmd->add_option("--per-cluster", agg_per_cluster, "Representatives per cluster")->capture_default_str();
    agg_cmd->add_option("--seed", agg_seed, "Clustering seed")->capture_default_str();
    agg_cmd->add_option("--top", agg_top, "Rows to keep")->capture_default_str();
    agg_cmd->add_option("--stopwords", agg_stopwords, "Stop-word file");
    agg_cmd->add_option("--format", agg_format, "tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();

    // belief
    std::vector<std::string> belief_frame;
    std::string belief_prior, belief_evidence;
    auto* belief_cmd = app.add_subcommand("belief", "Update keyword beliefs and report Bel/Pl");
    belief_cmd->add_option("--frame", belief_frame, "Comma-separated keywords")->delimiter(',')->required();
    belief_cmd->add_option("--prior", belief_prior, "Prior mass file (default: vacuous)");
    belief_cmd->add_option("--evidence", belief_evidence, "Evidence file of keyword scores");

    // scatter
    std::string scatter_source, scatter_stopwords, scatter_doc;
    auto* scatter_cmd = app.add_subcommand("scatter", "Document vs rest-of-corpus term proportions (CSV)");
    scatter_cmd->add_option("source", scatter_source, "Corpus directory or manifest")->required();
    scatter_cmd->add_option("--doc", scatter_doc, "Only this document id");
    scatter_cmd->add_option("--stopwords", scatter_stopwords, "Stop-word file");

    // top
    std::string top_source, top_stopwords;
    std::size_t top_k = 10;
    auto* top_cmd = app.add_subcommand("top", "Most frequent terms per document (CSV)");
    top_cmd->add_option("source", top_source, "Corpus directory or manifest")->required();
    top_cmd->add_option("--k", top_k, "Terms per document")->capture_default_str();
    top_cmd->add_option("--stopwords", top_stopwords, "Stop-word file");

    // synth
    SyntheticSpec synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic topic corpus");
    synth_cmd->add_option("--docs", synth.documents, "Number of documents")->capture_default_str();
    synth_cmd->add_option("--shares", synth.topic_shares, "Topic shares")->delimiter(',')->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*run_cmd) {
            run.source = run_source;
            run.output_dir = run_out;
            if (!run_stopwords.empty())
                run.stopwords = fs::path(run_stopwords);
            const RunReport report = run_pipeline(run);
            emit_all(report, run.output_dir);
            for (const auto& w : report.warnings)
                std::cerr << "layerstack: warning: " << w << '\n';
            std::cout << "wrote report to " << run.output_dir.string() << '\n';
        } else if (*entropy_cmd) {
            const std::string bytes = read_file(entropy_file);
            json out{{"file", entropy_file}, {"bytes", bytes.size()}};
            out["bitstream_entropy"] =
                bytes.empty() ? json(nullptr)
                              : json(bitstream_entropy({reinterpret_cast<const std::uint8_t*>(bytes.data()),
                                                        bytes.size()}));
            if (!is_valid_utf8(bytes))
                throw Error("file is not valid UTF-8: " + entropy_file);
            const TermCounts counts = term_frequencies(tokenize(bytes, load_policy(entropy_stopwords)));
            out["tokens"] = total_count(counts);
            out["distinct_terms"] = counts.size();
            out["token_entropy"] = counts.empty() ? json(nullptr) : json(count_entropy(counts));
            out["max_token_entropy"] =
                counts.empty() ? json(nullptr) : json(hartley_entropy({counts.size()}));
            std::cout << out.dump(2) << '\n';
        } else if (*rank_cmd) {
            const Corpus corpus = ingest_corpus(rank_source, load_policy(rank_stopwords));
            const Ranking ranking = rank_documents(corpus, rank_top);
            for (const auto& w : ranking.warnings)
                std::cerr << "layerstack: warning: " << w << '\n';
            print_table(ranking.rows, rank_format);
        } else if (*agg_cmd) {
            if (agg_top == 0)
                throw Error("top must be at least 1");
            const Corpus corpus = ingest_corpus(agg_source, load_policy(agg_stopwords));
            AggregationResult result = iterate_aggregation(corpus, agg_k, agg_rounds, agg_per_cluster, agg_seed);
            for (const auto& w : result.warnings)
                std::cerr << "layerstack: warning: " << w << '\n';
            if (result.ranking.rows.size() > agg_top)
                result.ranking.rows.resize(agg_top);
            print_table(result.ranking.rows, agg_format);
        } else if (*belief_cmd) {
            const Frame frame(belief_frame);
            MassFunction prior = belief_prior.empty() ? MassFunction::vacuous(frame)
                                                      : mass_from_json(frame, read_json_file(belief_prior));
            std::map<std::string, double> evidence;
            if (!belief_evidence.empty())
                evidence = evidence_from_json(read_json_file(belief_evidence));
            std::cout << belief_summary(keyword_belief_update(prior, evidence)).dump(2) << '\n';
        } else if (*scatter_cmd) {
            const Corpus corpus = ingest_corpus(scatter_source, load_policy(scatter_stopwords));
            std::vector<Fig4Row> rows;
            for (std::size_t i = 0; i < corpus.size(); ++i) {
                const Document& doc = corpus.documents()[i];
                if (!scatter_doc.empty() && doc.id != scatter_doc)
                    continue;
                const TermCounts reference = corpus.leave_one_out(i);
                if (doc.total_tokens == 0 || reference.empty())
                    continue;
                for (auto& p : frequency_scatter(doc, reference))
                    rows.push_back({doc.id, std::move(p)});
            }
            if (!scatter_doc.empty())
                corpus.index_of(scatter_doc);
            std::cout << format_fig4_csv(rows);
        } else if (*top_cmd) {
            const Corpus corpus = ingest_corpus(top_source, load_policy(top_stopwords));
            std::vector<Fig3Row> rows;
            for (const auto& doc : corpus.documents()) {
                std::size_t rank = 0;
                for (auto& t : top_k_terms(doc, top_k))
                    rows.push_back({doc.id, ++rank, std::move(t.term), t.count});
            }
            std::cout << format_fig3_csv(rows);
        } else if (*synth_cmd) {
            const SyntheticCorpus corpus = generate_synthetic_corpus(synth);
            write_synthetic_corpus(corpus, synth_out);
            std::cout << "wrote " << corpus.corpus.size() << " documents to " << synth_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "layerstack: error: " << e.what() << '\n';
        return kExitFatal;
    }
    return 0;
}
