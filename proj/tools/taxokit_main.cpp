#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taxokit/config.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/pipeline.hpp"
#include "taxokit/version.hpp"

namespace {

using taxokit::PipelineConfig;

// Config edits queued by option callbacks during parsing, applied to the
// loaded config afterwards. Only options actually given end up here, so the
// precedence is config file < TAXOKIT_OUTPUT_DIR < command line.
using Edit = std::function<void(PipelineConfig&)>;

template <typename T, typename Field>
void mirror(CLI::App* cmd, std::vector<Edit>& edits, const std::string& flag,
            const std::string& help, Field field) {
  cmd->add_option_function<T>(
      flag, [&edits, field](const T& value) { edits.push_back([field, value](
                                                  PipelineConfig& c) { field(c, value); }); },
      help);
}

void add_ingest_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<int>(cmd, edits, "--min-frequency", "lexicon frequency floor",
              [](PipelineConfig& c, int v) { c.preprocessing.min_frequency = v; });
  mirror<int>(cmd, edits, "--min-count", "vocabulary count floor",
              [](PipelineConfig& c, int v) { c.preprocessing.min_count = v; });
}

void add_train_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<int>(cmd, edits, "--dim", "embedding dimensions",
              [](PipelineConfig& c, int v) { c.embedding.dim = v; });
  mirror<int>(cmd, edits, "--window", "context window size",
              [](PipelineConfig& c, int v) { c.embedding.window = v; });
  mirror<int>(cmd, edits, "--negatives", "negative samples per pair",
              [](PipelineConfig& c, int v) { c.embedding.negatives = v; });
  mirror<int>(cmd, edits, "--epochs", "training epochs",
              [](PipelineConfig& c, int v) { c.embedding.epochs = v; });
  mirror<double>(cmd, edits, "--learning-rate", "initial learning rate",
                 [](PipelineConfig& c, double v) { c.embedding.learning_rate = v; });
}

void add_assign_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<int>(cmd, edits, "--min-entities", "eligibility threshold per category",
              [](PipelineConfig& c, int v) { c.assignment.min_entities = v; });
}

void add_cluster_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<double>(cmd, edits, "--damping", "affinity propagation damping factor",
                 [](PipelineConfig& c, double v) { c.sweeps.damping = v; });
  mirror<int>(cmd, edits, "--kmeans-restarts", "k-means restarts per K",
              [](PipelineConfig& c, int v) { c.sweeps.kmeans_restarts = v; });
  mirror<int>(cmd, edits, "--min-clusters", "smallest admissible cluster count",
              [](PipelineConfig& c, int v) { c.sweeps.min_clusters = v; });
}

void add_evaluate_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<std::string>(cmd, edits, "--dissimilarity", "cosine or euclidean",
                      [](PipelineConfig& c, const std::string& v) {
                        c.evaluation.dissimilarity = taxokit::parse_dissimilarity(v);
                      });
  mirror<std::string>(cmd, edits, "--neighbor", "cluster_mean or point_min",
                      [](PipelineConfig& c, const std::string& v) {
                        c.evaluation.neighbor = taxokit::parse_neighbor(v);
                      });
}

void add_build_options(CLI::App* cmd, std::vector<Edit>& edits) {
  mirror<int>(cmd, edits, "--top-k", "clusters kept per category",
              [](PipelineConfig& c, int v) { c.taxonomy.top_k = v; });
  mirror<std::string>(cmd, edits, "--overrides", "tag override file",
                      [](PipelineConfig& c, const std::string& v) {
                        c.taxonomy.overrides = v;
                      });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus-to-taxonomy pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(taxokit::kVersion));

  std::string config_path;
  app.add_option("--config", config_path, "pipeline config JSON")
      ->required()
      ->check(CLI::ExistingFile);

  std::string output_dir;
  auto* output_opt =
      app.add_option("--output", output_dir, "output directory (beats TAXOKIT_OUTPUT_DIR)");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
  bool deterministic = true;
  auto* det_opt = app.add_flag("--deterministic,!--no-deterministic", deterministic,
                               "bit-reproducible mode");
  int jobs = 1;
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads");

  std::vector<Edit> edits;
  auto* ingest = app.add_subcommand("ingest", "tokenize the corpus and build the vocabulary");
  add_ingest_options(ingest, edits);
  auto* train = app.add_subcommand("train", "train entity embeddings");
  add_train_options(train, edits);
  auto* assign = app.add_subcommand("assign", "assign entities to base categories");
  add_assign_options(assign, edits);
  auto* cluster = app.add_subcommand("cluster", "sweep the three clustering algorithms");
  add_cluster_options(cluster, edits);
  auto* evaluate = app.add_subcommand("evaluate", "select best runs and compare algorithms");
  add_evaluate_options(evaluate, edits);
  auto* build = app.add_subcommand("build", "assemble the five-level taxonomy");
  add_build_options(build, edits);
  auto* export_cmd = app.add_subcommand("export", "render the taxonomy as HTML");
  auto* run_all = app.add_subcommand("run-all", "run every stage in order");
  add_ingest_options(run_all, edits);
  add_train_options(run_all, edits);
  add_assign_options(run_all, edits);
  add_cluster_options(run_all, edits);
  add_evaluate_options(run_all, edits);
  add_build_options(run_all, edits);

  try {
    app.parse(argc, argv);

    PipelineConfig config = taxokit::load_config(config_path);
    if (const char* env = std::getenv("TAXOKIT_OUTPUT_DIR"); env != nullptr && *env != '\0') {
      config.paths.output_dir = env;
    }
    if (output_opt->count() > 0) config.paths.output_dir = output_dir;
    if (seed_opt->count() > 0) config.seed = seed;
    if (det_opt->count() > 0) config.deterministic = deterministic;
    if (jobs_opt->count() > 0) config.jobs = jobs;
    for (const auto& edit : edits) edit(config);
    config.validate();

    if (ingest->parsed()) taxokit::run_ingest(config);
    else if (train->parsed()) taxokit::run_train(config);
    else if (assign->parsed()) taxokit::run_assign(config);
    else if (cluster->parsed()) taxokit::run_cluster(config);
    else if (evaluate->parsed()) taxokit::run_evaluate(config);
    else if (build->parsed()) taxokit::run_build(config);
    else if (export_cmd->parsed()) taxokit::run_export(config);
    else if (run_all->parsed()) taxokit::run_all(config);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const taxokit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const taxokit::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
