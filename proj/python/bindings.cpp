#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "layerstack/belief.hpp"
#include "layerstack/corpus.hpp"
#include "layerstack/error.hpp"
#include "layerstack/infotheory.hpp"
#include "layerstack/intelligence.hpp"
#include "layerstack/knowledge.hpp"
#include "layerstack/pipeline.hpp"
#include "layerstack/synthetic.hpp"
#include "layerstack/wisdom.hpp"

namespace py = pybind11;
using namespace layerstack;

namespace {

TokenizePolicy policy_for(const std::optional<std::filesystem::path>& stopwords) {
    return stopwords ? TokenizePolicy::from_file(*stopwords) : TokenizePolicy::english();
}

py::list ranking_rows(const std::vector<CorrelationResult>& rows) {
    py::list out;
    for (const auto& r : rows)
        out.append(py::dict(py::arg("doc_id") = r.doc_id, py::arg("title") = r.title, py::arg("r") = r.r,
                            py::arg("p_value") = r.p_value, py::arg("n") = r.n));
    return out;
}

MassFunction mass_from_dict(const std::vector<std::string>& frame, const std::map<std::string, double>& masses) {
    return make_mass(Frame(frame), masses);
}

std::map<std::string, double> mass_to_dict(const MassFunction& m) {
    std::map<std::string, double> out;
    for (const auto& [s, v] : m.masses())
        out[m.frame().format(s)] = v;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Seven-layer corpus analysis";
    py::register_exception<Error>(m, "LayerstackError", PyExc_ValueError);

    m.def("tokenize", [](const std::string& text, const std::optional<std::filesystem::path>& stopwords) {
        return tokenize(text, policy_for(stopwords));
    }, py::arg("text"), py::arg("stopwords") = py::none());
    m.def("term_frequencies", &term_frequencies, py::arg("tokens"));

    m.def("hartley_entropy", [](std::uint64_t n) { return hartley_entropy({n}); }, py::arg("message_count"));
    m.def("shannon_entropy", [](const std::map<std::string, double>& probs) {
        return shannon_entropy(TokenDistribution(probs));
    }, py::arg("probabilities"));
    m.def("residual_entropy", [](const std::map<std::pair<std::string, std::string>, double>& cells) {
        return residual_entropy(JointDistribution(cells));
    }, py::arg("joint"));
    m.def("bitstream_entropy", [](const py::bytes& data) {
        const std::string s = data;
        return bitstream_entropy(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }, py::arg("data"));

    m.def("pearson_r", [](const std::vector<double>& x, const std::vector<double>& y) {
        return pearson_r(x, y);
    }, py::arg("x"), py::arg("y"));
    m.def("correlation_p_value", &correlation_p_value, py::arg("r"), py::arg("n"));
    m.def("justification_score", [](const std::vector<double>& weights, OutcomeSet belief_set,
                                    const std::vector<OutcomeSet>& testimonies) {
        return justification_score(EventSpace{weights, belief_set, testimonies});
    }, py::arg("weights"), py::arg("belief"), py::arg("testimonies"));

    m.def("crowd_decomposition", [](const std::vector<double>& predictions, double truth) {
        const auto d = crowd_decomposition({predictions, truth});
        return py::dict(py::arg("crowd_mean") = d.crowd_mean, py::arg("crowd_sq_error") = d.crowd_sq_error,
                        py::arg("avg_individual_sq_error") = d.avg_individual_sq_error,
                        py::arg("diversity") = d.diversity);
    }, py::arg("predictions"), py::arg("truth"));

    m.def("entropic_gain", [](const std::map<std::string, std::uint64_t>& macrostate,
                              const std::map<std::string, std::uint64_t>& candidate, double strength) {
        return entropic_gain({macrostate, strength}, Document::from_counts("candidate", "candidate", candidate));
    }, py::arg("macrostate"), py::arg("candidate"), py::arg("reservoir_strength") = 1.0);

    m.def("belief", [](const std::vector<std::string>& frame, const std::map<std::string, double>& masses,
                       const std::string& subset) {
        const auto mf = mass_from_dict(frame, masses);
        return belief(mf, mf.frame().parse(subset));
    }, py::arg("frame"), py::arg("masses"), py::arg("subset"));
    m.def("plausibility", [](const std::vector<std::string>& frame, const std::map<std::string, double>& masses,
                             const std::string& subset) {
        const auto mf = mass_from_dict(frame, masses);
        return plausibility(mf, mf.frame().parse(subset));
    }, py::arg("frame"), py::arg("masses"), py::arg("subset"));
    m.def("combine", [](const std::vector<std::string>& frame, const std::map<std::string, double>& m1,
                        const std::map<std::string, double>& m2) {
        return mass_to_dict(combine(mass_from_dict(frame, m1), mass_from_dict(frame, m2)));
    }, py::arg("frame"), py::arg("m1"), py::arg("m2"));
    m.def("keyword_belief_update", [](const std::vector<std::string>& frame,
                                      const std::map<std::string, double>& prior,
                                      const std::map<std::string, double>& evidence) {
        return mass_to_dict(keyword_belief_update(mass_from_dict(frame, prior), evidence));
    }, py::arg("frame"), py::arg("prior"), py::arg("evidence"));

    m.def("rank", [](const std::filesystem::path& source, std::size_t top,
                     const std::optional<std::filesystem::path>& stopwords) {
        return ranking_rows(rank_documents(ingest_corpus(source, policy_for(stopwords)), top).rows);
    }, py::arg("source"), py::arg("top") = 5, py::arg("stopwords") = py::none());
    m.def("aggregate", [](const std::filesystem::path& source, std::size_t k, std::size_t rounds,
                          std::size_t per_cluster, std::uint64_t seed, std::size_t top,
                          const std::optional<std::filesystem::path>& stopwords) {
        const auto result =
            iterate_aggregation(ingest_corpus(source, policy_for(stopwords)), k, rounds, per_cluster, seed);
        auto rows = result.ranking.rows;
        if (rows.size() > top)
            rows.resize(top);
        return py::dict(py::arg("rows") = ranking_rows(rows), py::arg("survivors") = result.survivors,
                        py::arg("warnings") = result.warnings);
    }, py::arg("source"), py::arg("k") = 9, py::arg("rounds") = 1, py::arg("per_cluster") = 5,
       py::arg("seed") = 42, py::arg("top") = 5, py::arg("stopwords") = py::none());

    m.def("_run_pipeline_json", [](const std::filesystem::path& source, std::size_t k, std::size_t rounds,
                                   std::size_t per_cluster, std::size_t top, std::uint64_t seed, double strength,
                                   const std::optional<std::filesystem::path>& stopwords,
                                   const std::optional<std::filesystem::path>& out, bool force_bit_layer) {
        RunConfig config;
        config.source = source;
        config.stopwords = stopwords;
        config.k = k;
        config.rounds = rounds;
        config.per_cluster = per_cluster;
        config.top_k = top;
        config.seed = seed;
        config.reservoir_strength = strength;
        config.force_bit_layer = force_bit_layer;
        if (out)
            config.output_dir = *out;
        const auto report = run_pipeline(config);
        if (out)
            emit_all(report, *out);
        return format_report_json(report);
    }, py::arg("source"), py::arg("k"), py::arg("rounds"), py::arg("per_cluster"), py::arg("top"),
       py::arg("seed"), py::arg("reservoir_strength"), py::arg("stopwords"), py::arg("out"),
       py::arg("force_bit_layer"));

    m.def("generate_synthetic", [](const std::filesystem::path& out, std::size_t documents,
                                   const std::vector<double>& shares, std::uint64_t seed) {
        SyntheticSpec spec;
        spec.documents = documents;
        spec.topic_shares = shares;
        spec.seed = seed;
        const auto synthetic = generate_synthetic_corpus(spec);
        write_synthetic_corpus(synthetic, out);
        return py::dict(py::arg("topic_of") = synthetic.topic_of,
                        py::arg("majority_topic") = synthetic.majority_topic);
    }, py::arg("out"), py::arg("documents") = 36, py::arg("shares") = std::vector<double>{0.6, 0.2, 0.2},
       py::arg("seed") = 7);
}
