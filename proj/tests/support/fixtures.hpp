#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "taxokit/config.hpp"
#include "taxokit/pipeline.hpp"
#include "tempdir.hpp"

namespace oracles {

// Stage one-liners go to stdout and warnings to stderr; keep test output
// clean and capture both for assertions.
struct StreamCapture {
  std::ostringstream out;
  std::ostringstream err;
  std::streambuf* old_out;
  std::streambuf* old_err;

  StreamCapture()
      : old_out(std::cout.rdbuf(out.rdbuf())), old_err(std::cerr.rdbuf(err.rdbuf())) {}
  ~StreamCapture() {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
  }
};

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

inline std::string doc_line(const std::string& id, const std::string& category,
                            const std::string& text) {
  nlohmann::json doc;
  doc["doc_id"] = id;
  doc["category_ids"] =
      category.empty() ? nlohmann::json::array() : nlohmann::json::array({category});
  doc["text"] = text;
  return doc.dump() + "\n";
}

// Two-category project small enough for a full pipeline run in well under a
// second: five entities that only appear in survey documents, three that only
// appear in logging documents.
struct MiniProject {
  TempDir dir;
  taxokit::PipelineConfig config;

  MiniProject() {
    dir.write("base.json", R"({
      "tag": "methodology", "level": 1, "provenance": "manual", "entities": [],
      "children": [
        {"tag": "collection", "level": 2, "provenance": "manual", "entities": [],
         "children": [
           {"tag": "survey", "level": 3, "provenance": "manual", "children": [], "entities": []},
           {"tag": "logging", "level": 3, "provenance": "manual", "children": [], "entities": []}
         ]}
      ]
    })");

    std::string corpus;
    for (int i = 0; i < 6; ++i) {
      corpus += doc_line(
          "s" + std::to_string(i), "survey",
          "we ran anova regression correlation sampling ttest on the responses\n"
          "participants completed sampling ttest anova regression correlation forms");
      corpus += doc_line(
          "l" + std::to_string(i), "logging",
          "the service wrote logfile tracing telemetry records all day\n"
          "we parsed telemetry tracing logfile streams from production");
    }
    corpus += doc_line("u0", "",
                       "general discussion of methods without labels\n"
                       "nothing specific happened here");
    dir.write("corpus.jsonl", corpus);

    dir.write("lexicon.tsv",
              "anova\t40\n"
              "regression\t36\n"
              "correlation\t32\n"
              "sampling\t28\n"
              "ttest\t24\n"
              "logfile\t30\n"
              "tracing\t26\n"
              "telemetry\t22\n");

    config.paths.corpus = (dir.path() / "corpus.jsonl").string();
    config.paths.lexicon = (dir.path() / "lexicon.tsv").string();
    config.paths.base_taxonomy = (dir.path() / "base.json").string();
    config.paths.output_dir = (dir.path() / "out").string();
    config.preprocessing.min_frequency = 1;
    config.preprocessing.min_count = 1;
    config.embedding.dim = 8;
    config.embedding.window = 2;
    config.embedding.negatives = 2;
    config.embedding.epochs = 2;
    config.assignment.min_entities = 3;
    config.sweeps.ap_preferences = taxokit::GridSpec{0.0, 1.0, 0.5};
    config.sweeps.agglomerative_levels = taxokit::GridSpec{0.0, 1.0, 0.25};
    config.sweeps.kmeans_ks = taxokit::IntGridSpec{2, 2, 1};
    config.sweeps.kmeans_restarts = 2;
    config.sweeps.min_clusters = 2;
    config.taxonomy.top_k = 2;
    config.seed = 7;
  }

  taxokit::ArtifactPaths artifacts() const {
    return taxokit::ArtifactPaths{std::filesystem::path(config.paths.output_dir)};
  }

  void touch(const std::filesystem::path& file) const {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
  }
};

}  // namespace oracles
