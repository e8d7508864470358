#include <fstream>
#include <sstream>

#include "taxokit/errors.hpp"
#include "taxokit/taxonomy.hpp"

namespace taxokit {

namespace {

std::string escape_html(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

void render_node(const TaxonomyNode& node, std::ostringstream& out) {
  const std::string classes =
      "node level-" + std::to_string(node.level) + " provenance-" + node.provenance;

  if (node.children.empty() && node.entities.empty()) {
    out << "<div class=\"" << classes << "\"><span class=\"tag\">"
        << escape_html(node.tag) << "</span></div>\n";
    return;
  }

  out << "<details class=\"" << classes << "\""
      << (node.level < 4 ? " open" : "") << ">";
  out << "<summary><span class=\"tag\">" << escape_html(node.tag) << "</span>";
  if (!node.entities.empty()) {
    std::int64_t total = 0;
    for (const auto& entity : node.entities) total += entity.frequency;
    out << "<span class=\"meta\">" << node.entities.size() << " entities, impact "
        << total << "</span>";
  }
  out << "</summary>\n";

  for (const auto& child : node.children) render_node(child, out);
  if (!node.entities.empty()) {
    out << "<ol class=\"entities\">";
    for (const auto& entity : node.entities) {
      out << "<li>" << escape_html(entity.surface) << "<span class=\"freq\">"
          << entity.frequency << "</span></li>";
    }
    out << "</ol>\n";
  }
  out << "</details>\n";
}

}  // namespace

std::string render_taxonomy_html(const TaxonomyNode& root) {
  validate_taxonomy(root);
  std::ostringstream out;
  out << "<!doctype html>\n<html lang=\"en\">\n<head>\n"
      << "<meta charset=\"utf-8\">\n"
      << "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n"
      << "<title>" << escape_html(root.tag) << "</title>\n"
      << "<style>\n"
      << "body { font-family: sans-serif; margin: 2rem; color: #222; }\n"
      << "details { margin: 0.15rem 0 0.15rem 1.25rem; }\n"
      << "div.node { margin: 0.15rem 0 0.15rem 1.25rem; padding-left: 1.05rem; }\n"
      << "summary { cursor: pointer; }\n"
      << ".level-1 > summary .tag { font-size: 1.4rem; font-weight: bold; }\n"
      << ".level-2 > summary .tag { font-size: 1.15rem; font-weight: bold; }\n"
      << ".level-3 .tag { font-weight: 600; }\n"
      << ".level-4 .tag { color: #046; }\n"
      << ".provenance-override > summary .tag::after "
      << "{ content: \" *\"; color: #a40; }\n"
      << ".meta { color: #777; font-size: 0.85em; margin-left: 0.6em; }\n"
      << "ol.entities { margin: 0.2rem 0; }\n"
      << "ol.entities li { font-size: 0.95em; }\n"
      << ".freq { color: #999; font-size: 0.85em; margin-left: 0.5em; }\n"
      << ".freq::before { content: \"\\00d7 \"; }\n"
      << "</style>\n</head>\n<body>\n";
  render_node(root, out);
  out << "</body>\n</html>\n";
  return out.str();
}

void save_taxonomy_html(const std::filesystem::path& path, const TaxonomyNode& root) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write taxonomy page: " + path.string());
  out << render_taxonomy_html(root);
  if (!out) throw DataError("failed while writing taxonomy page: " + path.string());
}

}  // namespace taxokit
