#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "taxokit/clustering.hpp"

namespace taxokit {

struct TaxonomyEntity {
  std::string surface;
  std::int64_t frequency = 0;

  bool operator==(const TaxonomyEntity&) const = default;
};

// Tree node. Levels 1..3 come from the manually built base; level-4 nodes
// are cluster tags and carry the entity payload, which the schema counts as
// the fifth level.
struct TaxonomyNode {
  std::string tag;
  int level = 1;
  std::string provenance = "manual";  // manual | clustered | override
  std::vector<TaxonomyNode> children;
  std::vector<TaxonomyEntity> entities;

  bool operator==(const TaxonomyNode&) const = default;
};

// Structural checks: root at level 1, children one level deeper, nodes no
// deeper than 4, entities only on level 4, known provenance, non-empty tags.
void validate_taxonomy(const TaxonomyNode& root);

// Third-level tags in document order; duplicates rejected.
std::vector<std::string> third_level_categories(const TaxonomyNode& root);

// Sum of member frequencies; every entity must have one.
std::int64_t impact(const std::vector<std::string>& entities,
                    const std::unordered_map<std::string, std::int64_t>& frequencies);

struct RankedCluster {
  std::size_t cluster_id = 0;  // label in the source partition
  std::size_t rank = 0;        // dense from 1 by descending impact
  std::int64_t impact = 0;
  std::vector<TaxonomyEntity> members;  // frequency descending
};

// Clusters by impact descending (ties: larger size, then the member that
// appears earliest in the entity list), truncated to the top_k best.
std::vector<RankedCluster> rank_and_take(
    const Partition& partition, const std::vector<std::string>& entities,
    const std::unordered_map<std::string, std::int64_t>& frequencies, int top_k = 5);

// Curated (category, rank) -> tag replacements; the file-based form of the
// manual fusion step.
class TagOverrides {
 public:
  void add(const std::string& category_id, int rank, const std::string& tag);
  const std::string* find(const std::string& category_id, int rank) const;
  std::size_t size() const { return overrides_.size(); }

 private:
  std::map<std::pair<std::string, int>, std::string> overrides_;
};

TagOverrides load_overrides(const std::filesystem::path& path);

struct ClusterTag {
  std::string tag;
  std::string provenance;  // clustered | override
};

// Override when one matches, otherwise the most frequent member's surface.
ClusterTag auto_tag(const std::vector<TaxonomyEntity>& members,
                    const TagOverrides& overrides, const std::string& category_id,
                    std::size_t rank);

struct CategoryClustering {
  std::string category_id;  // a third-level tag of the base taxonomy
  std::vector<std::string> entities;
  std::vector<std::int64_t> frequencies;
  Partition partition;
};

// Grafts each category's top clusters onto its base node as level-4
// children; untouched categories pass through unchanged.
TaxonomyNode assemble(const TaxonomyNode& base,
                      const std::vector<CategoryClustering>& selections,
                      const TagOverrides& overrides, int top_k = 5);

nlohmann::json taxonomy_to_json(const TaxonomyNode& root);
TaxonomyNode taxonomy_from_json(const nlohmann::json& doc);

void save_taxonomy(const std::filesystem::path& path, const TaxonomyNode& root);
TaxonomyNode load_taxonomy(const std::filesystem::path& path);

// Self-contained collapsible-tree page.
std::string render_taxonomy_html(const TaxonomyNode& root);
void save_taxonomy_html(const std::filesystem::path& path, const TaxonomyNode& root);

}  // namespace taxokit
