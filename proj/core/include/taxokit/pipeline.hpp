#pragma once

#include <filesystem>
#include <string>

#include "taxokit/config.hpp"

namespace taxokit {

// Artifact locations inside the output directory.
struct ArtifactPaths {
  std::filesystem::path output_dir;

  std::filesystem::path tokens() const { return output_dir / "tokens.jsonl"; }
  std::filesystem::path lexicon() const { return output_dir / "lexicon.tsv"; }
  std::filesystem::path vocabulary() const { return output_dir / "vocabulary.tsv"; }
  std::filesystem::path embeddings() const { return output_dir / "embeddings.vec"; }
  std::filesystem::path assignments() const { return output_dir / "assignments.tsv"; }
  std::filesystem::path rosters() const { return output_dir / "rosters.json"; }
  std::filesystem::path runs() const { return output_dir / "runs.jsonl"; }
  std::filesystem::path selection() const { return output_dir / "selection.json"; }
  std::filesystem::path comparison() const { return output_dir / "comparison.json"; }
  std::filesystem::path comparison_csv() const { return output_dir / "comparison.csv"; }
  std::filesystem::path taxonomy() const { return output_dir / "taxonomy.json"; }
  std::filesystem::path taxonomy_html() const { return output_dir / "taxonomy.html"; }
  std::filesystem::path manifest() const { return output_dir / "manifest.json"; }
};

// Each stage reads its upstream artifacts from the output directory, writes
// its own, and records digests in the manifest. A missing upstream artifact
// raises a DataError naming the subcommand that produces it.
void run_ingest(const PipelineConfig& config);
void run_train(const PipelineConfig& config);
void run_assign(const PipelineConfig& config);
void run_cluster(const PipelineConfig& config);
void run_evaluate(const PipelineConfig& config);
void run_build(const PipelineConfig& config);
void run_export(const PipelineConfig& config);
void run_all(const PipelineConfig& config);

}  // namespace taxokit
