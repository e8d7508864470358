#include "taxokit/assignment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "taxokit/errors.hpp"
#include "taxokit/parallel.hpp"

namespace taxokit {

namespace {

std::string format_score(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// Size of the intersection of two ascending id lists.
std::int64_t intersection_count(const std::vector<std::uint32_t>& a,
                                const std::vector<std::uint32_t>& b) {
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

ChiSquareScore chi_square(const ContingencyTable& t) {
  if (t.A < 0 || t.B < 0 || t.C < 0 || t.D < 0) {
    throw DataError("contingency table has a negative count");
  }
  const double ab = static_cast<double>(t.A + t.B);
  const double ac = static_cast<double>(t.A + t.C);
  const double bd = static_cast<double>(t.B + t.D);
  const double cd = static_cast<double>(t.C + t.D);
  if (ab == 0.0 || ac == 0.0 || bd == 0.0 || cd == 0.0) {
    return {0.0, true};
  }
  const double delta = static_cast<double>(t.A) * static_cast<double>(t.D) -
                       static_cast<double>(t.B) * static_cast<double>(t.C);
  const double n = static_cast<double>(t.N());
  return {n * delta * delta / (ab * ac * bd * cd), false};
}

ContingencyCounter::ContingencyCounter(const Corpus& corpus,
                                       std::vector<std::string> categories)
    : corpus_(&corpus), categories_(std::move(categories)) {
  if (categories_.empty()) throw DataError("contingency counting needs at least one category");
  for (std::size_t c = 0; c < categories_.size(); ++c) {
    if (categories_[c].empty()) throw DataError("empty category id");
    if (categories_[c] == kUnassignedCategory) {
      throw DataError(std::string("category id '") + kUnassignedCategory +
                      "' is reserved");
    }
    if (!category_index_.emplace(categories_[c], c).second) {
      throw DataError("duplicate category id: " + categories_[c]);
    }
  }

  category_doc_count_.assign(categories_.size(), 0);
  category_docs_.resize(categories_.size());
  entity_doc_count_.assign(corpus.vocabulary.surfaces.size(), 0);
  entity_docs_.resize(corpus.vocabulary.surfaces.size());

  std::unordered_set<std::uint32_t> present;
  for (const auto& doc : corpus.documents) {
    if (doc.category_ids.empty()) continue;
    const auto ld = static_cast<std::uint32_t>(labeled_++);

    auto& cats = doc_categories_.emplace_back();
    for (const auto& id : doc.category_ids) {
      auto it = category_index_.find(id);
      if (it == category_index_.end()) {
        throw DataError("document " + doc.doc_id + " labeled with unknown category: " + id);
      }
      cats.push_back(static_cast<std::uint32_t>(it->second));
      category_doc_count_[it->second] += 1;
      category_docs_[it->second].push_back(ld);
    }

    present.clear();
    for (const auto& sentence : doc.sentences) {
      for (std::uint32_t token : sentence) {
        if (corpus.vocabulary.is_entity[token]) present.insert(token);
      }
    }
    for (std::uint32_t token : present) {
      entity_doc_count_[token] += 1;
      entity_docs_[token].push_back(ld);
    }
  }
}

ContingencyTable ContingencyCounter::table(std::uint32_t entity_id,
                                           std::size_t category_index) const {
  if (entity_id >= entity_docs_.size()) throw DataError("entity id out of range");
  if (category_index >= categories_.size()) throw DataError("category index out of range");

  ContingencyTable t;
  t.A = intersection_count(entity_docs_[entity_id], category_docs_[category_index]);
  t.B = entity_doc_count_[entity_id] - t.A;
  t.C = category_doc_count_[category_index] - t.A;
  t.D = labeled_ - t.A - t.B - t.C;
  return t;
}

ContingencyTable ContingencyCounter::table(const std::string& entity,
                                           const std::string& category) const {
  auto entity_id = corpus_->vocabulary.find(entity);
  if (!entity_id) throw DataError("unknown entity: " + entity);
  auto it = category_index_.find(category);
  if (it == category_index_.end()) throw DataError("unknown category: " + category);
  return table(*entity_id, it->second);
}

std::vector<EntityAssignment> assign_entities(const Corpus& corpus,
                                              const std::vector<std::string>& categories,
                                              int jobs) {
  ContingencyCounter counter(corpus, categories);
  const auto& vocab = corpus.vocabulary;

  std::vector<std::uint32_t> entity_ids;
  for (std::uint32_t id = 0; id < vocab.surfaces.size(); ++id) {
    if (vocab.is_entity[id]) entity_ids.push_back(id);
  }

  std::vector<EntityAssignment> assignments(entity_ids.size());
  parallel_for(entity_ids.size(), jobs, [&](std::size_t slot) {
    const std::uint32_t id = entity_ids[slot];
    EntityAssignment out;
    out.entity = vocab.surfaces[id];
    out.scores.resize(categories.size());

    double best = 0.0;
    for (std::size_t c = 0; c < categories.size(); ++c) {
      out.scores[c] = chi_square(counter.table(id, c)).value;
      best = std::max(best, out.scores[c]);
    }

    // Winner among the argmax set: larger A, then smaller category id.
    auto pick = [&](double target, const std::string& skip) {
      std::size_t chosen = categories.size();
      std::int64_t chosen_a = -1;
      std::size_t hits = 0;
      for (std::size_t c = 0; c < categories.size(); ++c) {
        if (out.scores[c] != target || categories[c] == skip) continue;
        ++hits;
        std::int64_t a = counter.table(id, c).A;
        if (chosen == categories.size() || a > chosen_a ||
            (a == chosen_a && categories[c] < categories[chosen])) {
          chosen = c;
          chosen_a = a;
        }
      }
      return std::pair<std::size_t, std::size_t>(chosen, hits);
    };

    if (best == 0.0) {
      out.category_id = kUnassignedCategory;
    } else {
      auto [chosen, hits] = pick(best, "");
      out.category_id = categories[chosen];
      out.score = best;
      out.tie = hits > 1;

      double second = -1.0;
      for (std::size_t c = 0; c < categories.size(); ++c) {
        if (categories[c] == out.category_id) continue;
        second = std::max(second, out.scores[c]);
      }
      if (second >= 0.0) {
        auto [runner, runner_hits] = pick(second, out.category_id);
        (void)runner_hits;
        out.runner_up = categories[runner];
        out.runner_up_score = second;
      }
    }
    assignments[slot] = std::move(out);
  });
  return assignments;
}

std::vector<CategoryRoster> eligible_categories(
    const std::vector<EntityAssignment>& assignments, const EntityLexicon& lexicon,
    int min_entities) {
  if (min_entities < 1) throw ConfigError("min_entities must be at least 1");

  std::map<std::string, std::vector<const EntityAssignment*>> by_category;
  for (const auto& a : assignments) {
    if (a.category_id == kUnassignedCategory) continue;
    by_category[a.category_id].push_back(&a);
  }

  std::vector<CategoryRoster> rosters;
  for (auto& [category, members] : by_category) {
    if (members.size() < static_cast<std::size_t>(min_entities)) continue;

    CategoryRoster roster;
    roster.category_id = category;
    std::vector<std::pair<std::string, std::int64_t>> ordered;
    ordered.reserve(members.size());
    for (const auto* a : members) {
      const EntityEntry* entry = lexicon.find(a->entity);
      if (entry == nullptr) throw DataError("entity missing from lexicon: " + a->entity);
      ordered.emplace_back(a->entity, entry->frequency);
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    for (auto& [surface, frequency] : ordered) {
      roster.entities.push_back(std::move(surface));
      roster.frequencies.push_back(frequency);
    }
    rosters.push_back(std::move(roster));
  }
  return rosters;
}

void save_audit(const std::filesystem::path& path,
                const std::vector<EntityAssignment>& assignments) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write audit file: " + path.string());
  out << "entity\tcategory\tscore\trunner_up\trunner_up_score\ttie\n";
  for (const auto& a : assignments) {
    out << a.entity << '\t' << a.category_id << '\t' << format_score(a.score) << '\t'
        << a.runner_up << '\t' << format_score(a.runner_up_score) << '\t'
        << (a.tie ? "true" : "false") << '\n';
  }
  if (!out) throw DataError("failed while writing audit file: " + path.string());
}

void save_rosters(const std::filesystem::path& path,
                  const std::vector<CategoryRoster>& rosters, int min_entities) {
  nlohmann::json doc;
  doc["min_entities"] = min_entities;
  auto& list = doc["categories"] = nlohmann::json::array();
  for (const auto& roster : rosters) {
    nlohmann::json item;
    item["id"] = roster.category_id;
    item["entities"] = roster.entities;
    item["frequencies"] = roster.frequencies;
    list.push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write roster file: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed while writing roster file: " + path.string());
}

std::vector<CategoryRoster> load_rosters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open roster file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, "json", e.what());
  }
  if (!doc.is_object() || !doc.contains("categories") || !doc["categories"].is_array()) {
    throw ParseError(path.string(), 0, "categories", "expected an object with a category array");
  }

  std::vector<CategoryRoster> rosters;
  for (const auto& item : doc["categories"]) {
    if (!item.is_object() || !item.contains("id") || !item.contains("entities") ||
        !item.contains("frequencies")) {
      throw ParseError(path.string(), 0, "categories",
                       "each category needs id, entities and frequencies");
    }
    CategoryRoster roster;
    roster.category_id = item["id"].get<std::string>();
    roster.entities = item["entities"].get<std::vector<std::string>>();
    roster.frequencies = item["frequencies"].get<std::vector<std::int64_t>>();
    if (roster.entities.size() != roster.frequencies.size()) {
      throw ParseError(path.string(), 0, roster.category_id,
                       "entities and frequencies differ in length");
    }
    rosters.push_back(std::move(roster));
  }
  return rosters;
}

}  // namespace taxokit
