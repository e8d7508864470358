#include "taxokit/pipeline.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "taxokit/assignment.hpp"
#include "taxokit/corpus.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/manifest.hpp"
#include "taxokit/sweeps.hpp"
#include "taxokit/taxonomy.hpp"

namespace taxokit {

namespace {

namespace fs = std::filesystem;

ArtifactPaths prepare(const PipelineConfig& config) {
  ArtifactPaths paths{fs::path(config.paths.output_dir)};
  fs::create_directories(paths.output_dir);
  return paths;
}

void require_artifact(const fs::path& file, const std::string& what,
                      const std::string& producer) {
  if (!fs::exists(file)) {
    throw DataError(what + " not found; run `" + producer + "`");
  }
}

RunManifest open_manifest(const ArtifactPaths& paths, const PipelineConfig& config) {
  return RunManifest::open(paths.manifest(), config_to_json(config));
}

IngestOptions ingest_options(const PipelineConfig& config) {
  IngestOptions options;
  options.delimiters = config.preprocessing.delimiters;
  options.min_frequency = config.preprocessing.min_frequency;
  options.min_count = config.preprocessing.min_count;
  options.normalize.fold_case = config.preprocessing.fold_case;
  options.normalize.fold_width = config.preprocessing.fold_width;
  options.jobs = config.jobs;
  return options;
}

SweepOptions sweep_options(const PipelineConfig& config) {
  SweepOptions options;
  options.ap_preferences = config.sweeps.ap_preferences.values();
  options.agglomerative_levels = config.sweeps.agglomerative_levels.values();
  options.kmeans_ks = config.sweeps.kmeans_ks.values();
  options.damping = config.sweeps.damping;
  options.max_iter = config.sweeps.max_iter;
  options.stable_iters = config.sweeps.stable_iters;
  options.kmeans_restarts = config.sweeps.kmeans_restarts;
  options.kmeans_max_rounds = config.sweeps.kmeans_max_rounds;
  options.seed = config.seed;
  options.dissimilarity = config.evaluation.dissimilarity;
  options.neighbor = config.evaluation.neighbor;
  options.min_clusters = config.sweeps.min_clusters;
  options.jobs = config.jobs;
  return options;
}

Corpus load_corpus_artifacts(const ArtifactPaths& paths) {
  require_artifact(paths.tokens(), "token artifacts", "ingest");
  require_artifact(paths.vocabulary(), "vocabulary artifact", "ingest");
  return load_tokens(paths.tokens(), paths.vocabulary());
}

struct CategorySelection {
  std::string category_id;
  std::vector<std::string> entities;
  ClusterRun best;
};

void save_selection(const fs::path& path, const std::vector<CategorySelection>& selections) {
  nlohmann::json doc;
  auto& list = doc["categories"] = nlohmann::json::array();
  for (const auto& selection : selections) {
    nlohmann::json item;
    item["id"] = selection.category_id;
    item["entities"] = selection.entities;
    item["algorithm"] = selection.best.algorithm;
    item["parameter"] = selection.best.parameter;
    if (!selection.best.parameter_aliases.empty()) {
      item["parameter_aliases"] = selection.best.parameter_aliases;
    }
    if (selection.best.algorithm == "kmeans") item["seed"] = selection.best.seed;
    item["k"] = selection.best.partition.cluster_count;
    item["labels"] = selection.best.partition.labels;
    item["mean_silhouette"] = selection.best.mean_silhouette;
    list.push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write selection file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed while writing selection file: " + path.string());
}

std::vector<CategorySelection> load_selection(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open selection file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, "json", e.what());
  }

  std::vector<CategorySelection> selections;
  try {
    for (const auto& item : doc.at("categories")) {
      CategorySelection selection;
      selection.category_id = item.at("id").get<std::string>();
      selection.entities = item.at("entities").get<std::vector<std::string>>();
      selection.best.category_id = selection.category_id;
      selection.best.algorithm = item.at("algorithm").get<std::string>();
      selection.best.parameter = item.at("parameter").get<double>();
      selection.best.seed = item.value("seed", std::uint64_t{0});
      selection.best.partition.labels = item.at("labels").get<std::vector<std::uint32_t>>();
      selection.best.partition.cluster_count = item.at("k").get<std::size_t>();
      selection.best.mean_silhouette = item.at("mean_silhouette").get<double>();
      if (selection.best.partition.labels.size() != selection.entities.size()) {
        throw ParseError(path.string(), 0, selection.category_id,
                         "label count differs from the entity count");
      }
      selections.push_back(std::move(selection));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, "categories", e.what());
  }
  return selections;
}

}  // namespace

void run_ingest(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);

  TaxonomyNode base = load_taxonomy(config.paths.base_taxonomy);
  auto categories = third_level_categories(base);
  std::set<std::string> known(categories.begin(), categories.end());

  IngestResult result =
      ingest(config.paths.corpus, config.paths.lexicon, known, ingest_options(config));

  for (const auto& surface : result.report.lexicon_merged_surfaces) {
    std::cerr << "warning: lexicon surfaces merged after normalization: " << surface
              << "\n";
  }
  if (!result.report.entities_missing_from_corpus.empty()) {
    std::cerr << "warning: " << result.report.entities_missing_from_corpus.size()
              << " lexicon entities never occur in the corpus\n";
  }

  save_tokens(paths.tokens(), result.corpus);
  save_vocabulary(paths.vocabulary(), result.corpus.vocabulary);
  save_lexicon(paths.lexicon(), result.lexicon);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_input("corpus", config.paths.corpus);
  manifest.record_input("lexicon", config.paths.lexicon);
  manifest.record_input("base_taxonomy", config.paths.base_taxonomy);
  manifest.record_stage("ingest", {{"tokens", paths.tokens()},
                                   {"vocabulary", paths.vocabulary()},
                                   {"lexicon", paths.lexicon()}});
  manifest.save();

  std::cout << "ingest: " << result.report.documents << " documents ("
            << result.report.labeled_documents << " labeled), "
            << result.report.sentences << " sentences, " << result.report.tokens
            << " tokens, vocabulary " << result.corpus.vocabulary.surfaces.size()
            << "\n";
}

void run_train(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  Corpus corpus = load_corpus_artifacts(paths);

  EmbeddingConfig embedding = config.embedding;
  embedding.seed = config.seed;
  embedding.deterministic = config.deterministic;
  embedding.threads = config.jobs;

  TrainResult result = train_embeddings(corpus, embedding);
  save_model(paths.embeddings(), result.model);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_stage("train", {{"embeddings", paths.embeddings()}});
  manifest.save();

  std::cout << "train: " << result.model.size() << " vectors of dim "
            << result.model.dim() << ", mean pair loss " << result.epoch_losses.front()
            << " -> " << result.epoch_losses.back() << " over "
            << result.epoch_losses.size() << " epochs\n";
}

void run_assign(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  Corpus corpus = load_corpus_artifacts(paths);
  require_artifact(paths.lexicon(), "lexicon artifact", "ingest");

  TaxonomyNode base = load_taxonomy(config.paths.base_taxonomy);
  auto categories = third_level_categories(base);

  auto assignments = assign_entities(corpus, categories, config.jobs);
  save_audit(paths.assignments(), assignments);

  EntityLexicon lexicon =
      load_lexicon(paths.lexicon(), 0, ingest_options(config).normalize);
  auto rosters = eligible_categories(assignments, lexicon, config.assignment.min_entities);
  if (rosters.empty()) {
    std::cerr << "warning: no category reached min_entities="
              << config.assignment.min_entities << "; clustering will be skipped\n";
  }
  save_rosters(paths.rosters(), rosters, config.assignment.min_entities);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_input("base_taxonomy", config.paths.base_taxonomy);
  manifest.record_stage("assign", {{"assignments", paths.assignments()},
                                   {"rosters", paths.rosters()}});
  manifest.save();

  std::cout << "assign: " << assignments.size() << " entities over "
            << categories.size() << " categories, " << rosters.size()
            << " eligible\n";
}

void run_cluster(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  require_artifact(paths.embeddings(), "embedding model", "train");
  require_artifact(paths.rosters(), "category rosters", "assign");

  auto rosters = load_rosters(paths.rosters());
  EmbeddingModel model = load_model(paths.embeddings());
  SweepOptions options = sweep_options(config);

  std::vector<CategoryRuns> categories;
  std::size_t total_runs = 0;
  for (const auto& roster : rosters) {
    auto vectors = gather_vectors(roster.entities, model);
    categories.push_back(
        cluster_category(roster.category_id, roster.entities, vectors, options));
    total_runs += categories.back().runs.size();
  }
  save_runs(paths.runs(), categories);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_stage("cluster", {{"runs", paths.runs()}});
  manifest.save();

  std::cout << "cluster: " << total_runs << " recorded runs over "
            << categories.size() << " categories\n";
}

void run_evaluate(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  require_artifact(paths.runs(), "run ledger", "cluster");

  auto categories = load_runs(paths.runs());
  std::vector<CategorySelection> selections;
  std::vector<ClusterRun> best_per_algorithm;
  for (const auto& category : categories) {
    if (category.runs.empty()) {
      std::cerr << "warning: category '" << category.category_id
                << "' has no admissible runs\n";
      continue;
    }
    CategorySelection selection;
    selection.category_id = category.category_id;
    selection.entities = category.entities;
    selection.best = select_best(category.runs);
    selections.push_back(std::move(selection));

    for (const char* algorithm : {"ap", "agglomerative", "kmeans"}) {
      std::vector<ClusterRun> subset;
      for (const auto& run : category.runs) {
        if (run.algorithm == algorithm) subset.push_back(run);
      }
      if (!subset.empty()) best_per_algorithm.push_back(select_best(subset));
    }
  }

  save_selection(paths.selection(), selections);
  if (best_per_algorithm.empty()) {
    std::cerr << "warning: no runs to compare\n";
    ComparisonReport empty;
    save_comparison_json(paths.comparison(), empty);
    save_comparison_csv(paths.comparison_csv(), empty);
  } else {
    ComparisonReport report = compare_algorithms(best_per_algorithm);
    save_comparison_json(paths.comparison(), report);
    save_comparison_csv(paths.comparison_csv(), report);
  }

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_stage("evaluate", {{"selection", paths.selection()},
                                     {"comparison", paths.comparison()},
                                     {"comparison_csv", paths.comparison_csv()}});
  manifest.save();

  std::cout << "evaluate: best runs selected for " << selections.size()
            << " categories\n";
}

void run_build(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  require_artifact(paths.selection(), "selection artifact", "evaluate");
  require_artifact(paths.rosters(), "category rosters", "assign");

  TaxonomyNode base = load_taxonomy(config.paths.base_taxonomy);
  auto selections = load_selection(paths.selection());
  auto rosters = load_rosters(paths.rosters());

  std::map<std::string, const CategoryRoster*> roster_index;
  for (const auto& roster : rosters) roster_index[roster.category_id] = &roster;

  TagOverrides overrides;
  if (!config.taxonomy.overrides.empty()) overrides = load_overrides(config.taxonomy.overrides);

  std::vector<CategoryClustering> clusterings;
  for (const auto& selection : selections) {
    auto it = roster_index.find(selection.category_id);
    if (it == roster_index.end()) {
      throw DataError("selection names a category without a roster: " +
                      selection.category_id);
    }
    std::unordered_map<std::string, std::int64_t> frequencies;
    for (std::size_t i = 0; i < it->second->entities.size(); ++i) {
      frequencies[it->second->entities[i]] = it->second->frequencies[i];
    }

    CategoryClustering clustering;
    clustering.category_id = selection.category_id;
    clustering.entities = selection.entities;
    clustering.partition.labels = selection.best.partition.labels;
    clustering.partition.cluster_count = selection.best.partition.cluster_count;
    for (const auto& entity : selection.entities) {
      auto freq = frequencies.find(entity);
      if (freq == frequencies.end()) {
        throw DataError("selection entity missing from roster: " + entity);
      }
      clustering.frequencies.push_back(freq->second);
    }
    clusterings.push_back(std::move(clustering));
  }

  if (clusterings.empty()) {
    std::cerr << "warning: no selections; taxonomy equals the base taxonomy\n";
  }
  TaxonomyNode taxonomy = assemble(base, clusterings, overrides, config.taxonomy.top_k);
  save_taxonomy(paths.taxonomy(), taxonomy);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_input("base_taxonomy", config.paths.base_taxonomy);
  if (!config.taxonomy.overrides.empty()) {
    manifest.record_input("overrides", config.taxonomy.overrides);
  }
  manifest.record_stage("build", {{"taxonomy", paths.taxonomy()}});
  manifest.save();

  std::cout << "build: taxonomy with " << clusterings.size()
            << " clustered categories\n";
}

void run_export(const PipelineConfig& config) {
  ArtifactPaths paths = prepare(config);
  require_artifact(paths.taxonomy(), "taxonomy artifact", "build");

  TaxonomyNode taxonomy = load_taxonomy(paths.taxonomy());
  save_taxonomy_html(paths.taxonomy_html(), taxonomy);

  RunManifest manifest = open_manifest(paths, config);
  manifest.record_stage("export", {{"taxonomy_html", paths.taxonomy_html()}});
  manifest.save();

  std::cout << "export: " << paths.taxonomy_html().string() << "\n";
}

void run_all(const PipelineConfig& config) {
  run_ingest(config);
  run_train(config);
  run_assign(config);
  run_cluster(config);
  run_evaluate(config);
  run_build(config);
  run_export(config);
}

}  // namespace taxokit
