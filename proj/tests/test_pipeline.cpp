#include <doctest.h>

#include <fstream>
#include <sstream>

#include "layerstack/error.hpp"
#include "layerstack/pipeline.hpp"
#include "layerstack/synthetic.hpp"
#include "test_util.hpp"

using namespace layerstack;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("run config validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.k = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.top_k = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.reservoir_strength = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("table formatting") {
    std::vector<CorrelationResult> rows{{"d1", "Trustworthy\tAI", 0.75449, 1.234e-7, 30},
                                        {"d2", "", -0.1, 0.5, 12}};
    CHECK(format_table_tsv(rows) ==
          "title\tcorrelation\tp_value\n"
          "Trustworthy AI\t0.754\t1.23e-07\n"
          "d2\t-0.100\t5.00e-01\n");
    CHECK(format_table_tsv({}) == "title\tcorrelation\tp_value\n");
    const auto j = table_json(rows);
    REQUIRE(j.is_array());
    CHECK(j[0]["doc_id"] == "d1");
    CHECK(j[0]["n"] == 30);
    CHECK(j[1]["r"] == -0.1);
}

TEST_CASE("plot data formatting") {
    CHECK(format_fig3_csv({{"a,b", 1, "trust", 9}}) == "doc_id,rank,term,count\n\"a,b\",1,trust,9\n");
    CHECK(format_fig4_csv({{"d", {"ai", 0.01, 0.01, 0.0}}}) ==
          "doc_id,term,doc_proportion,reference_proportion,deviation\nd,ai,0.01,0.01,0.000000\n");
}

TEST_CASE("pipeline on a 36-document synthetic corpus") {
    SyntheticSpec spec;
    const auto synthetic = generate_synthetic_corpus(spec);
    RunConfig config;
    config.k = 3;
    config.top_k = 5;
    const auto report = run_pipeline(config, synthetic.corpus);

    CHECK(report.knowledge.rows.size() == 5);
    const auto standalone = rank_documents(synthetic.corpus, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(report.knowledge.rows[i].doc_id == standalone.rows[i].doc_id);
        CHECK(report.knowledge.rows[i].r == standalone.rows[i].r);
    }
    const auto& s = report.summary;
    for (const char* layer : {"bit", "data", "information", "knowledge", "intelligence", "wisdom", "belief",
                              "provenance"})
        CHECK(s.contains(layer));
    CHECK(s["bit"]["skipped"] == true);
    CHECK(s["data"]["documents"].size() == 36);
    CHECK(s["information"]["documents"].size() == 36);
    CHECK(s["knowledge"]["ranking"].size() == 5);
    CHECK(s["intelligence"]["rounds"].size() == 1);
    CHECK(s["intelligence"]["ranking"].size() == 5);
    CHECK(s["belief"]["frame"].size() == 5);
    const auto& w = s["wisdom"];
    CHECK(std::abs(w["crowd_sq_error"].get<double>() + w["diversity"].get<double>() -
                   w["avg_individual_sq_error"].get<double>()) < 1e-9);
    CHECK(report.fig3.size() == 360);
    CHECK_FALSE(report.fig4.empty());
    for (const auto& row : report.summary["information"]["documents"])
        CHECK(row["residual_entropy"].get<double>() >= 0.0);
}

TEST_CASE("identity configuration: rounds 0, k 1") {
    SyntheticSpec spec;
    spec.documents = 20;
    const auto synthetic = generate_synthetic_corpus(spec);
    RunConfig config;
    config.k = 1;
    config.rounds = 0;
    const auto report = run_pipeline(config, synthetic.corpus);
    REQUIRE(report.aggregated.rows.size() == report.knowledge.rows.size());
    for (std::size_t i = 0; i < report.knowledge.rows.size(); ++i)
        CHECK(report.aggregated.rows[i].doc_id == report.knowledge.rows[i].doc_id);
    CHECK(report.summary["wisdom"]["skipped"] == true);
}

TEST_CASE("belief frame is capped with a warning") {
    SyntheticSpec spec;
    spec.documents = 12;
    const auto synthetic = generate_synthetic_corpus(spec);
    RunConfig config;
    config.k = 2;
    config.top_k = 25;
    const auto report = run_pipeline(config, synthetic.corpus);
    CHECK(report.summary["belief"]["frame"].size() == 20);
    CHECK(std::count(report.warnings.begin(), report.warnings.end(),
                     "belief: keyword frame capped at 20 terms") == 1);
}

TEST_CASE("single document corpus") {
    const Corpus corpus({Document::from_counts("only", "Only", {{"a", 2}, {"b", 1}})}, {});
    RunConfig config;
    const auto report = run_pipeline(config, corpus);
    CHECK(report.fig4.empty());
    CHECK_FALSE(report.warnings.empty());
    CHECK(report.summary["knowledge"]["skipped"] == true);
    CHECK(report.fig3.size() == 2);
}

TEST_CASE("run from disk, emit files, determinism and hashing") {
    TempDir dir;
    SyntheticSpec spec;
    spec.documents = 12;
    write_synthetic_corpus(generate_synthetic_corpus(spec), dir.path() / "corpus");

    RunConfig config;
    config.source = dir.path() / "corpus";
    config.k = 3;
    config.force_bit_layer = true;
    const auto first = run_pipeline(config);
    const auto second = run_pipeline(config);
    CHECK(format_report_json(first) == format_report_json(second));
    CHECK(first.summary["bit"]["documents"].size() == 12);

    const auto files = emit_all(first, dir.path() / "out");
    CHECK(files.size() == 7);
    const std::string table1 = slurp(dir.path() / "out" / "table1.tsv");
    CHECK(table1.rfind("title\tcorrelation\tp_value\n", 0) == 0);
    CHECK(line_count(table1) == 6);
    CHECK(line_count(slurp(dir.path() / "out" / "fig3.csv")) <= 121);
    const auto report = nlohmann::json::parse(slurp(dir.path() / "out" / "report.json"));
    CHECK(report["provenance"]["input_sha256"].get<std::string>().size() == 64);

    const std::string hash = input_content_hash(config);
    {
        std::ofstream f(dir.path() / "corpus" / "doc000.txt", std::ios::binary | std::ios::app);
        f << "x";
    }
    CHECK(input_content_hash(config) != hash);
}

TEST_CASE("emit to an unwritable location fails") {
    TempDir dir;
    const auto blocker = dir.write("file", "not a directory");
    RunReport report;
    CHECK_THROWS_AS(emit_tables(report, TableFormat::tsv, blocker / "sub"), Error);
    CHECK_THROWS_AS(emit_plot_data(report, blocker / "sub"), Error);
}

TEST_CASE("empty ranking emits a header-only table") {
    TempDir dir;
    RunReport report;
    emit_tables(report, TableFormat::tsv, dir.path());
    CHECK(slurp(dir.path() / "table1.tsv") == "title\tcorrelation\tp_value\n");
    emit_tables(report, TableFormat::json, dir.path());
    CHECK(nlohmann::json::parse(slurp(dir.path() / "table2.json")).empty());
}

TEST_CASE("pipeline layer failures name the layer") {
    TempDir dir;
    RunConfig config;
    config.source = dir.path();
    try {
        run_pipeline(config);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "ingest layer: empty corpus");
    }
}

TEST_CASE("mass json helpers") {
    const Frame f({"ai", "trust"});
    const auto m = mass_from_json(f, nlohmann::json::parse(R"({"ai": 0.6, "ai,trust": 0.4})"));
    CHECK(m.mass(0b01) == 0.6);
    CHECK(mass_to_json(m) == nlohmann::json::parse(R"({"ai": 0.6, "ai,trust": 0.4})"));
    CHECK_THROWS_AS(mass_from_json(f, nlohmann::json::parse("[1]")), Error);
    const auto summary = belief_summary(m);
    CHECK(summary["posterior"]["singletons"]["ai"]["belief"] == 0.6);
    CHECK(summary["posterior"]["singletons"]["trust"]["plausibility"] == 0.4);
}
