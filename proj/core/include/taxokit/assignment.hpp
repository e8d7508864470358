#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxokit/corpus.hpp"

namespace taxokit {

// Bucket that collects entities whose association score is zero for every
// category. The name is reserved and cannot appear as a real category id.
inline constexpr const char* kUnassignedCategory = "__unassigned__";

// Document counts relating one entity to one category:
//   A: docs in the category containing the entity
//   B: docs outside the category containing the entity
//   C: docs in the category lacking the entity
//   D: docs with neither
struct ContingencyTable {
  std::int64_t A = 0;
  std::int64_t B = 0;
  std::int64_t C = 0;
  std::int64_t D = 0;

  std::int64_t N() const { return A + B + C + D; }
};

struct ChiSquareScore {
  double value = 0.0;
  bool degenerate = false;  // a zero marginal forced the value to 0
};

// N(AD-BC)^2 / ((A+B)(A+C)(B+D)(C+D)); 0 exactly when AD = BC. A zero
// marginal yields {0, degenerate=true} instead of an error.
ChiSquareScore chi_square(const ContingencyTable& table);

// Precomputed document-level presence sets. Containment is binary (the
// entity occurs at least once anywhere in the document) and only documents
// with category labels are counted.
class ContingencyCounter {
 public:
  ContingencyCounter(const Corpus& corpus, std::vector<std::string> categories);

  const std::vector<std::string>& categories() const { return categories_; }
  std::int64_t labeled_documents() const { return labeled_; }

  ContingencyTable table(std::uint32_t entity_id, std::size_t category_index) const;
  // Convenience by name; unknown entity or category throws DataError.
  ContingencyTable table(const std::string& entity, const std::string& category) const;

 private:
  const Corpus* corpus_;
  std::vector<std::string> categories_;
  std::unordered_map<std::string, std::size_t> category_index_;
  std::int64_t labeled_ = 0;
  std::vector<std::int64_t> category_doc_count_;
  std::vector<std::int64_t> entity_doc_count_;
  // docs_[e] holds, per labeled doc containing entity e, that doc's dense
  // labeled-doc index; category_docs_[c] likewise per category.
  std::vector<std::vector<std::uint32_t>> entity_docs_;
  std::vector<std::vector<std::uint32_t>> category_docs_;
  std::vector<std::vector<std::uint32_t>> doc_categories_;  // per labeled doc
};

struct EntityAssignment {
  std::string entity;
  std::string category_id;  // kUnassignedCategory when all scores are zero
  double score = 0.0;
  std::vector<double> scores;  // aligned with the category list
  bool tie = false;            // argmax attained by more than one category
  std::string runner_up;       // empty when there is no second category
  double runner_up_score = 0.0;
};

// Assigns every lexicon entity in the vocabulary to its argmax-score
// category. Ties prefer the larger A count, then the smaller category id.
std::vector<EntityAssignment> assign_entities(const Corpus& corpus,
                                              const std::vector<std::string>& categories,
                                              int jobs = 1);

struct CategoryRoster {
  std::string category_id;
  std::vector<std::string> entities;      // frequency descending, then surface
  std::vector<std::int64_t> frequencies;  // lexicon frequencies, same order
};

// Categories holding at least min_entities assigned entities, in category id
// order. Frequencies come from the lexicon, the curated counts.
std::vector<CategoryRoster> eligible_categories(
    const std::vector<EntityAssignment>& assignments, const EntityLexicon& lexicon,
    int min_entities = 100);

// Audit table: entity, category, score, runner-up, runner-up score, tie flag.
void save_audit(const std::filesystem::path& path,
                const std::vector<EntityAssignment>& assignments);

void save_rosters(const std::filesystem::path& path,
                  const std::vector<CategoryRoster>& rosters, int min_entities);
std::vector<CategoryRoster> load_rosters(const std::filesystem::path& path);

}  // namespace taxokit
