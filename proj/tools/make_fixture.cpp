// Generates the bundled synthetic fixture: a corpus with planted cluster
// structure plus a matching entity lexicon. Three categories carry 13 tight
// co-occurrence blobs of 3 entities each (eligible for clustering); a fourth
// small category stays below the eligibility threshold; unlabeled noise
// documents pad the embedding corpus. Output is deterministic.
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

struct Category {
  std::string id;
  std::vector<std::string> stems;
  int docs = 0;
};

const std::array<const char*, 3> kSuffixes = {"analysis", "method", "model"};

const std::array<const char*, 3> kGlue = {"we study", "this work uses",
                                          "results from"};

// Two context words per blob, unique across the whole fixture.
const std::array<const char*, 86> kBlobWords = {
    "kernel",     "sparse",      "lattice",    "spline",     "wavelet",
    "prior",      "posterior",   "gradient",   "manifold",   "tensor",
    "quadrature", "convex",      "stochastic", "parametric", "residual",
    "covariate",  "likelihood",  "entropy",    "bandwidth",  "smoothing",
    "shrinkage",  "penalty",     "orthogonal", "projection", "eigenvalue",
    "adjacency",  "vertex",      "edge",       "walk",       "diffusion",
    "cascade",    "percolation", "clique",     "bridge",     "hub",
    "authority",  "assortative", "reciprocity",  "brokerage", "cohesion",
    "density",    "layering",    "pathway",    "flow",       "routing",
    "backbone",   "spectrum",    "embedding",  "partition",  "conductance",
    "corpus",     "lemma",       "morpheme",   "syntax",     "register",
    "genre",      "stance",      "valence",    "polarity",   "salience",
    "cooccurrence", "collocate", "concordance", "windowing", "weighting",
    "ontology",   "schema",      "annotation", "segment",    "boundary",
    "narrative",  "rhetoric",    "cohort",     "sampling",   "transcript",
    "protocol",   "fieldwork",   "artifact",   "archive",    "dossier",
    "timeline",   "setting",     "context",    "informant",  "site",
    "episode"};

const std::array<const char*, 40> kNoiseWords = {
    "dataset",    "baseline",   "pipeline",  "metric",     "benchmark",
    "replication", "appendix",  "figure",    "table",      "abstract",
    "journal",    "volume",     "issue",     "citation",   "reference",
    "author",     "reviewer",   "editor",    "draft",      "revision",
    "hypothesis", "premise",    "finding",   "limitation", "outlook",
    "summary",    "discussion", "framework", "criterion",  "threshold",
    "instrument", "measure",    "indicator", "variable",   "factor",
    "procedure",  "session",    "colloquium", "workshop",  "seminar"};

std::vector<Category> categories() {
  return {
      {"statistical method",
       {"ridge regression", "lasso regression", "logistic regression",
        "anova variance", "bayesian inference", "markov chain", "monte carlo",
        "bootstrap resampling", "time series", "factor rotation",
        "principal component", "survival hazard", "quantile regression"},
       40},
      {"social network analysis",
       {"degree centrality", "betweenness centrality", "closeness centrality",
        "eigenvector centrality", "community detection",
        "modularity optimization", "link prediction", "structural holes",
        "triadic census", "random graph", "small world",
        "preferential attachment"/* 12 */, "network motif"},
       40},
      {"content analysis",
       {"topic coding", "frame coding", "sentiment scoring",
        "keyword extraction", "co word mapping", "discourse tagging",
        "category agreement", "intercoder reliability", "latent dirichlet",
        "semantic differential", "lexical diversity", "word frequency",
        "collocation mining"},
       40},
  };
}

std::vector<std::string> case_study_entities() {
  std::vector<std::string> out;
  for (const char* kind :
       {"single", "multiple", "embedded", "longitudinal", "comparative",
        "exploratory", "descriptive", "explanatory", "instrumental",
        "intrinsic", "collective", "critical"}) {
    out.push_back(std::string(kind) + " case study");
  }
  return out;
}

std::string entity_surface(const Category& category, int blob, int member) {
  return category.stems[blob] + " " + kSuffixes[member];
}

std::string blob_sentence(const std::vector<std::string>& members, int doc,
                          int blob, const char* w1, const char* w2) {
  // Rotate member order per document so no single ordering dominates.
  const int r = (doc + blob) % 3;
  std::string s = kGlue[(doc + blob) % kGlue.size()];
  s += " ";
  s += w1;
  for (std::size_t m = 0; m < members.size(); ++m) {
    s += " " + members[(m + r) % members.size()];
  }
  s += " ";
  s += w2;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic fixture generator"};
  std::string out_dir = "data/synthetic";
  app.add_option("--out", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  const auto cats = categories();
  const auto case_entities = case_study_entities();

  std::ofstream corpus(std::filesystem::path(out_dir) / "corpus.jsonl");
  std::ofstream lexicon(std::filesystem::path(out_dir) / "lexicon.tsv");
  if (!corpus || !lexicon) {
    std::cerr << "error: cannot write into " << out_dir << "\n";
    return 2;
  }

  int doc_serial = 0;
  auto emit = [&corpus, &doc_serial](const std::vector<std::string>& labels,
                                     const std::vector<std::string>& sentences) {
    nlohmann::json doc;
    char id[16];
    std::snprintf(id, sizeof(id), "d%03d", ++doc_serial);
    doc["doc_id"] = id;
    doc["category_ids"] = labels;
    std::string text;
    for (const auto& sentence : sentences) {
      if (!text.empty()) text += "\n";
      text += sentence;
    }
    doc["text"] = text;
    corpus << doc.dump() << "\n";
  };

  std::size_t blob_word = 0;
  std::vector<std::vector<std::pair<const char*, const char*>>> cat_words;
  for (const auto& cat : cats) {
    auto& words = cat_words.emplace_back();
    for (std::size_t b = 0; b < cat.stems.size(); ++b) {
      words.emplace_back(kBlobWords[blob_word], kBlobWords[blob_word + 1]);
      blob_word += 2;
    }
  }
  std::vector<std::pair<const char*, const char*>> case_words;
  for (int b = 0; b < 4; ++b) {
    case_words.emplace_back(kBlobWords[blob_word], kBlobWords[blob_word + 1]);
    blob_word += 2;
  }

  for (std::size_t c = 0; c < cats.size(); ++c) {
    const auto& cat = cats[c];
    for (int d = 0; d < cat.docs; ++d) {
      std::vector<std::string> sentences;
      for (std::size_t b = 0; b < cat.stems.size(); ++b) {
        std::vector<std::string> members;
        for (std::size_t m = 0; m < kSuffixes.size(); ++m) {
          members.push_back(entity_surface(cat, b, m));
        }
        sentences.push_back(blob_sentence(members, d, static_cast<int>(b),
                                          cat_words[c][b].first,
                                          cat_words[c][b].second));
      }
      emit({cat.id}, sentences);
    }
  }

  for (int d = 0; d < 12; ++d) {
    std::vector<std::string> sentences;
    for (int b = 0; b < 4; ++b) {
      std::vector<std::string> members(case_entities.begin() + 3 * b,
                                       case_entities.begin() + 3 * b + 3);
      sentences.push_back(blob_sentence(members, d, b, case_words[b].first,
                                        case_words[b].second));
    }
    emit({"case analysis"}, sentences);
  }

  for (int d = 0; d < 18; ++d) {
    std::vector<std::string> sentences;
    for (int s = 0; s < 5; ++s) {
      std::string line = "the";
      for (int w = 0; w < 8; ++w) {
        line += " ";
        line += kNoiseWords[(d * 11 + s * 5 + w) % kNoiseWords.size()];
      }
      sentences.push_back(line);
    }
    emit({}, sentences);
  }

  // Curated frequencies: strictly decreasing across (category, blob, member)
  // so roster order, cluster impact order and tag choice are all unambiguous.
  for (std::size_t c = 0; c < cats.size(); ++c) {
    for (std::size_t b = 0; b < cats[c].stems.size(); ++b) {
      for (std::size_t m = 0; m < kSuffixes.size(); ++m) {
        const long f = 500 - static_cast<long>(c * 13 + b) * 10 -
                       static_cast<long>(m) * 2;
        lexicon << entity_surface(cats[c], b, m) << "\t" << f << "\n";
      }
    }
  }
  for (std::size_t j = 0; j < case_entities.size(); ++j) {
    lexicon << case_entities[j] << "\t" << (90 - 3 * static_cast<long>(j)) << "\n";
  }

  std::cout << "fixture: " << doc_serial << " documents, "
            << (cats.size() * 13 * 3 + case_entities.size()) << " lexicon entries in "
            << out_dir << "\n";
  return 0;
}
