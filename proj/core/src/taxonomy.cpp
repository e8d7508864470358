#include "taxokit/taxonomy.hpp"

#include <algorithm>
#include <fstream>

#include "taxokit/errors.hpp"

namespace taxokit {

namespace {

void validate_node(const TaxonomyNode& node, const std::string& path) {
  if (node.tag.empty()) throw DataError("taxonomy node at " + path + " has an empty tag");
  if (node.level < 1 || node.level > 4) {
    throw DataError("taxonomy node '" + node.tag + "' has level " +
                    std::to_string(node.level) + ", want 1..4");
  }
  if (node.provenance != "manual" && node.provenance != "clustered" &&
      node.provenance != "override") {
    throw DataError("taxonomy node '" + node.tag + "' has unknown provenance: " +
                    node.provenance);
  }
  if (!node.entities.empty() && node.level != 4) {
    throw DataError("taxonomy node '" + node.tag + "' carries entities at level " +
                    std::to_string(node.level) + "; only level 4 may");
  }
  if (node.level == 4 && !node.children.empty()) {
    throw DataError("taxonomy node '" + node.tag + "' at level 4 cannot have children");
  }
  for (const auto& entity : node.entities) {
    if (entity.surface.empty()) {
      throw DataError("taxonomy node '" + node.tag + "' holds an entity with an empty surface");
    }
    if (entity.frequency < 0) {
      throw DataError("taxonomy entity '" + entity.surface + "' has a negative frequency");
    }
  }
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    const auto& child = node.children[c];
    if (child.level != node.level + 1) {
      throw DataError("taxonomy node '" + child.tag + "' has level " +
                      std::to_string(child.level) + " under a level-" +
                      std::to_string(node.level) + " parent");
    }
    validate_node(child, path + "/" + node.tag);
  }
}

}  // namespace

void validate_taxonomy(const TaxonomyNode& root) {
  if (root.level != 1) throw DataError("taxonomy root must be level 1");
  validate_node(root, "");
}

std::vector<std::string> third_level_categories(const TaxonomyNode& root) {
  validate_taxonomy(root);
  std::vector<std::string> categories;
  std::unordered_map<std::string, bool> seen;
  for (const auto& group : root.children) {
    for (const auto& category : group.children) {
      if (seen[category.tag]) {
        throw DataError("duplicate third-level category tag: " + category.tag);
      }
      seen[category.tag] = true;
      categories.push_back(category.tag);
    }
  }
  return categories;
}

std::int64_t impact(const std::vector<std::string>& entities,
                    const std::unordered_map<std::string, std::int64_t>& frequencies) {
  std::int64_t total = 0;
  for (const auto& entity : entities) {
    auto it = frequencies.find(entity);
    if (it == frequencies.end()) {
      throw DataError("no frequency known for entity: " + entity);
    }
    total += it->second;
  }
  return total;
}

std::vector<RankedCluster> rank_and_take(
    const Partition& partition, const std::vector<std::string>& entities,
    const std::unordered_map<std::string, std::int64_t>& frequencies, int top_k) {
  if (top_k < 1) throw ConfigError("top_k must be at least 1");
  if (partition.labels.size() != entities.size()) {
    throw DataError("partition and entity list sizes differ");
  }

  struct Pool {
    std::vector<std::size_t> members;  // indices into the entity list
    std::int64_t impact = 0;
  };
  std::vector<Pool> pools(partition.cluster_count);
  for (std::size_t i = 0; i < entities.size(); ++i) {
    auto it = frequencies.find(entities[i]);
    if (it == frequencies.end()) {
      throw DataError("no frequency known for entity: " + entities[i]);
    }
    Pool& pool = pools[partition.labels[i]];
    pool.members.push_back(i);
    pool.impact += it->second;
  }

  std::vector<std::size_t> order(pools.size());
  for (std::size_t c = 0; c < pools.size(); ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (pools[x].impact != pools[y].impact) return pools[x].impact > pools[y].impact;
    if (pools[x].members.size() != pools[y].members.size()) {
      return pools[x].members.size() > pools[y].members.size();
    }
    return pools[x].members.front() < pools[y].members.front();
  });

  std::vector<RankedCluster> ranked;
  const std::size_t take = std::min(static_cast<std::size_t>(top_k), order.size());
  for (std::size_t r = 0; r < take; ++r) {
    const Pool& pool = pools[order[r]];
    RankedCluster cluster;
    cluster.cluster_id = order[r];
    cluster.rank = r + 1;
    cluster.impact = pool.impact;
    for (std::size_t i : pool.members) {
      cluster.members.push_back({entities[i], frequencies.at(entities[i])});
    }
    std::sort(cluster.members.begin(), cluster.members.end(),
              [](const TaxonomyEntity& x, const TaxonomyEntity& y) {
                if (x.frequency != y.frequency) return x.frequency > y.frequency;
                return x.surface < y.surface;
              });
    ranked.push_back(std::move(cluster));
  }
  return ranked;
}

void TagOverrides::add(const std::string& category_id, int rank, const std::string& tag) {
  if (rank < 1) throw ConfigError("override rank must be at least 1");
  if (tag.empty()) throw ConfigError("override tag must not be empty");
  if (!overrides_.emplace(std::make_pair(category_id, rank), tag).second) {
    throw ConfigError("duplicate override for category '" + category_id + "' rank " +
                      std::to_string(rank));
  }
}

const std::string* TagOverrides::find(const std::string& category_id, int rank) const {
  auto it = overrides_.find(std::make_pair(category_id, rank));
  return it == overrides_.end() ? nullptr : &it->second;
}

TagOverrides load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open overrides file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, "json", e.what());
  }
  if (!doc.is_array()) {
    throw ParseError(path.string(), 0, "overrides",
                     "expected an array of {category, rank, tag} objects");
  }
  TagOverrides overrides;
  for (const auto& item : doc) {
    try {
      overrides.add(item.at("category").get<std::string>(), item.at("rank").get<int>(),
                    item.at("tag").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), 0, "overrides", e.what());
    }
  }
  return overrides;
}

ClusterTag auto_tag(const std::vector<TaxonomyEntity>& members,
                    const TagOverrides& overrides, const std::string& category_id,
                    std::size_t rank) {
  if (members.empty()) throw DataError("cannot tag an empty cluster");
  if (const std::string* tag = overrides.find(category_id, static_cast<int>(rank))) {
    return {*tag, "override"};
  }
  return {members.front().surface, "clustered"};
}

TaxonomyNode assemble(const TaxonomyNode& base,
                      const std::vector<CategoryClustering>& selections,
                      const TagOverrides& overrides, int top_k) {
  validate_taxonomy(base);
  for (const auto& group : base.children) {
    if (group.level != 2) throw DataError("base taxonomy must be three levels deep");
    for (const auto& category : group.children) {
      if (category.level != 3 || !category.children.empty()) {
        throw DataError("base taxonomy must end at level-3 leaves");
      }
    }
  }

  TaxonomyNode result = base;
  std::unordered_map<std::string, TaxonomyNode*> leaves;
  for (auto& group : result.children) {
    for (auto& category : group.children) leaves[category.tag] = &category;
  }

  std::unordered_map<std::string, bool> used;
  for (const auto& selection : selections) {
    if (used[selection.category_id]) {
      throw DataError("duplicate selection for category: " + selection.category_id);
    }
    used[selection.category_id] = true;

    auto it = leaves.find(selection.category_id);
    if (it == leaves.end()) {
      throw DataError("selection for a category absent from the base taxonomy: " +
                      selection.category_id);
    }
    if (selection.entities.size() != selection.frequencies.size()) {
      throw DataError("entities and frequencies differ in length for category: " +
                      selection.category_id);
    }

    std::unordered_map<std::string, std::int64_t> frequencies;
    for (std::size_t i = 0; i < selection.entities.size(); ++i) {
      frequencies[selection.entities[i]] = selection.frequencies[i];
    }

    auto ranked = rank_and_take(selection.partition, selection.entities, frequencies, top_k);
    for (const auto& cluster : ranked) {
      ClusterTag tag = auto_tag(cluster.members, overrides, selection.category_id,
                                cluster.rank);
      TaxonomyNode node;
      node.tag = tag.tag;
      node.level = 4;
      node.provenance = tag.provenance;
      node.entities = cluster.members;
      it->second->children.push_back(std::move(node));
    }
  }

  validate_taxonomy(result);
  return result;
}

nlohmann::json taxonomy_to_json(const TaxonomyNode& root) {
  nlohmann::json doc;
  doc["tag"] = root.tag;
  doc["level"] = root.level;
  doc["provenance"] = root.provenance;
  auto& children = doc["children"] = nlohmann::json::array();
  for (const auto& child : root.children) children.push_back(taxonomy_to_json(child));
  auto& entities = doc["entities"] = nlohmann::json::array();
  for (const auto& entity : root.entities) {
    entities.push_back({{"surface", entity.surface}, {"frequency", entity.frequency}});
  }
  return doc;
}

namespace {

TaxonomyNode node_from_json(const nlohmann::json& doc, const std::string& path) {
  if (!doc.is_object()) throw DataError("taxonomy JSON at " + path + " is not an object");
  static const char* known[] = {"tag", "level", "provenance", "children", "entities"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* key) {
          return it.key() == key;
        }) == std::end(known)) {
      throw DataError("taxonomy JSON at " + path + " has unexpected key: " + it.key());
    }
  }

  TaxonomyNode node;
  try {
    node.tag = doc.at("tag").get<std::string>();
    node.level = doc.at("level").get<int>();
    node.provenance = doc.value("provenance", std::string("manual"));
    if (doc.contains("children")) {
      std::size_t index = 0;
      for (const auto& child : doc.at("children")) {
        node.children.push_back(
            node_from_json(child, path + "/children[" + std::to_string(index) + "]"));
        ++index;
      }
    }
    if (doc.contains("entities")) {
      for (const auto& entity : doc.at("entities")) {
        node.entities.push_back({entity.at("surface").get<std::string>(),
                                 entity.at("frequency").get<std::int64_t>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("taxonomy JSON at " + path + ": " + e.what());
  }
  return node;
}

}  // namespace

TaxonomyNode taxonomy_from_json(const nlohmann::json& doc) {
  TaxonomyNode root = node_from_json(doc, "");
  validate_taxonomy(root);
  return root;
}

void save_taxonomy(const std::filesystem::path& path, const TaxonomyNode& root) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write taxonomy file: " + path.string());
  out << taxonomy_to_json(root).dump(2) << '\n';
  if (!out) throw DataError("failed while writing taxonomy file: " + path.string());
}

TaxonomyNode load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open taxonomy file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, "json", e.what());
  }
  return taxonomy_from_json(doc);
}

}  // namespace taxokit
