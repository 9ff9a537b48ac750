#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerstack/belief.hpp"
#include "layerstack/corpus.hpp"
#include "layerstack/knowledge.hpp"

namespace layerstack {

struct RunConfig {
    std::filesystem::path source;
    std::optional<std::filesystem::path> stopwords;
    std::size_t k = 9;
    std::size_t rounds = 1;
    std::size_t per_cluster = 5;
    std::size_t top_k = 5;
    std::uint64_t seed = 42;
    double reservoir_strength = 1.0;
    std::filesystem::path output_dir = "layerstack-out";
    bool force_bit_layer = false;

    // Throws on k = 0, top_k = 0, per_cluster = 0 or non-positive strength.
    void validate() const;
    nlohmann::json to_json() const;
};

struct Fig3Row {
    std::string doc_id;
    std::size_t rank = 0;
    std::string term;
    std::uint64_t count = 0;
};

struct Fig4Row {
    std::string doc_id;
    ScatterPoint point;
};

struct RunReport {
    // Per-layer sections plus provenance and warnings; keys sort on dump.
    nlohmann::json summary;
    Ranking knowledge;
    Ranking aggregated;
    std::vector<Fig3Row> fig3;
    std::vector<Fig4Row> fig4;
    std::vector<std::string> warnings;
};

enum class TableFormat { tsv, json };

/// Runs bit -> data -> information -> knowledge -> intelligence -> wisdom ->
/// belief over an ingested corpus. A layer failure is rethrown prefixed with
/// the layer name.
RunReport run_pipeline(const RunConfig& config);
RunReport run_pipeline(const RunConfig& config, const Corpus& corpus);

/// SHA-256 over ids and raw bytes of every corpus file plus the stop-word file.
std::string input_content_hash(const RunConfig& config);

std::string format_table_tsv(const std::vector<CorrelationResult>& rows);
nlohmann::json table_json(const std::vector<CorrelationResult>& rows);
std::string format_fig3_csv(const std::vector<Fig3Row>& rows);
std::string format_fig4_csv(const std::vector<Fig4Row>& rows);
std::string format_report_json(const RunReport& report);

/// table1 (knowledge ranking) and table2 (aggregated ranking) in `format`.
std::vector<std::filesystem::path> emit_tables(const RunReport& report, TableFormat format,
                                               const std::filesystem::path& dir);
/// fig3.csv and fig4.csv.
std::vector<std::filesystem::path> emit_plot_data(const RunReport& report,
                                                  const std::filesystem::path& dir);
// Mass files are JSON objects mapping comma-joined element names to masses.
MassFunction mass_from_json(const Frame& frame, const nlohmann::json& doc);
nlohmann::json mass_to_json(const MassFunction& m);
// Evidence files map keyword -> score in [0, 1].
std::map<std::string, double> evidence_from_json(const nlohmann::json& doc);
/// Posterior masses plus Bel/Pl of every singleton.
nlohmann::json belief_summary(const MassFunction& posterior);

/// report.json, both table formats and the plot data.
std::vector<std::filesystem::path> emit_all(const RunReport& report, const std::filesystem::path& dir);

} // namespace layerstack
