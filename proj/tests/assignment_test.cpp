#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "taxokit/assignment.hpp"
#include "taxokit/corpus.hpp"
#include "taxokit/errors.hpp"
#include "taxokit/rng.hpp"
#include "tempdir.hpp"

using namespace taxokit;
using oracles::TempDir;

namespace {

// Builds a labeled corpus from (categories, contained entity ids) per doc.
Corpus make_corpus(const std::vector<std::pair<std::vector<std::string>,
                                               std::vector<std::uint32_t>>>& docs,
                   const std::vector<std::string>& entities) {
  Corpus corpus;
  for (const auto& surface : entities) {
    corpus.vocabulary.ids[surface] =
        static_cast<std::uint32_t>(corpus.vocabulary.surfaces.size());
    corpus.vocabulary.surfaces.push_back(surface);
    corpus.vocabulary.counts.push_back(0);
    corpus.vocabulary.is_entity.push_back(true);
  }
  int serial = 0;
  for (const auto& [categories, contained] : docs) {
    TokenizedDocument doc;
    doc.doc_id = "d" + std::to_string(++serial);
    doc.category_ids = categories;
    doc.sentences.push_back({});
    for (auto id : contained) {
      doc.sentences.back().push_back(id);
      corpus.vocabulary.counts[id] += 1;
    }
    if (!categories.empty()) corpus.labeled_count += 1;
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

EntityLexicon lexicon_with(const std::vector<std::pair<std::string, std::int64_t>>& rows) {
  EntityLexicon lexicon;
  for (const auto& [surface, freq] : rows) {
    lexicon.index[surface] = lexicon.entries.size();
    lexicon.entries.push_back({surface, freq});
  }
  return lexicon;
}

}  // namespace

TEST_CASE("chi_square matches the three hand oracles") {
  CHECK(chi_square({2, 2, 3, 3}).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(chi_square({5, 0, 0, 5}).value == doctest::Approx(10.0).epsilon(1e-12));
  const auto score = chi_square({3, 1, 1, 5});
  CHECK(std::fabs(score.value - 1960.0 / 576.0) <= 1e-12 * (1960.0 / 576.0));
  CHECK_FALSE(score.degenerate);
}

TEST_CASE("chi_square is zero exactly when AD equals BC") {
  Rng rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    ContingencyTable table{static_cast<std::int64_t>(rng.next_below(8)),
                           static_cast<std::int64_t>(rng.next_below(8)),
                           static_cast<std::int64_t>(rng.next_below(8)),
                           static_cast<std::int64_t>(rng.next_below(8))};
    const auto score = chi_square(table);
    CHECK(score.value >= 0.0);
    if (score.degenerate) continue;
    const bool independent = table.A * table.D == table.B * table.C;
    CHECK((score.value == 0.0) == independent);
  }
}

TEST_CASE("zero marginal gives degenerate zero score") {
  const auto empty_entity = chi_square({0, 0, 4, 6});
  CHECK(empty_entity.value == 0.0);
  CHECK(empty_entity.degenerate);
  const auto full_category = chi_square({3, 7, 0, 0});
  CHECK(full_category.degenerate);
  CHECK_THROWS_AS(chi_square({-1, 2, 3, 4}), DataError);
}

TEST_CASE("chi_square swap symmetry holds") {
  // Swapping the category with its complement maps (A,B,C,D)->(B,A,D,C).
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    ContingencyTable t{static_cast<std::int64_t>(1 + rng.next_below(9)),
                       static_cast<std::int64_t>(1 + rng.next_below(9)),
                       static_cast<std::int64_t>(1 + rng.next_below(9)),
                       static_cast<std::int64_t>(1 + rng.next_below(9))};
    ContingencyTable swapped{t.B, t.A, t.D, t.C};
    CHECK(chi_square(t).value == doctest::Approx(chi_square(swapped).value));
  }
}

TEST_CASE("contingency counts documents, not occurrences") {
  // 10 labeled docs, 5 in category x; entity 0 in every x doc and nowhere else.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
  for (int i = 0; i < 5; ++i) docs.push_back({{"x"}, {0, 0, 0}});  // repeats collapse
  for (int i = 0; i < 5; ++i) docs.push_back({{"y"}, {1}});
  const auto corpus = make_corpus(docs, {"e0", "e1"});
  ContingencyCounter counter(corpus, {"x", "y"});
  const auto table = counter.table("e0", "x");
  CHECK(table.A == 5);
  CHECK(table.B == 0);
  CHECK(table.C == 0);
  CHECK(table.D == 5);
  CHECK(table.N() == 10);
}

TEST_CASE("absent entity yields A=0 B=0") {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
  for (int i = 0; i < 4; ++i) docs.push_back({{"x"}, {}});
  for (int i = 0; i < 6; ++i) docs.push_back({{"y"}, {}});
  const auto corpus = make_corpus(docs, {"ghost"});
  ContingencyCounter counter(corpus, {"x", "y"});
  const auto table = counter.table("ghost", "x");
  CHECK(table.A == 0);
  CHECK(table.B == 0);
  CHECK(table.C == 4);
  CHECK(table.D == 6);
  CHECK_THROWS_AS(counter.table("ghost", "mystery"), DataError);
}

TEST_CASE("multi-label documents count toward each category and N once") {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs = {
      {{"x", "y"}, {0}},
      {{"x"}, {}},
      {{"y"}, {0}},
      {{}, {0}},  // unlabeled: excluded from contingency counting
  };
  const auto corpus = make_corpus(docs, {"e0"});
  ContingencyCounter counter(corpus, {"x", "y"});
  CHECK(counter.labeled_documents() == 3);
  const auto tx = counter.table("e0", "x");
  CHECK(tx.A == 1);
  CHECK(tx.B == 1);
  CHECK(tx.C == 1);
  CHECK(tx.D == 0);
  const auto ty = counter.table("e0", "y");
  CHECK(ty.A == 2);
  CHECK(ty.B == 0);
}

TEST_CASE("contingency matches a brute-force document scan on random corpora") {
  Rng rng(41);
  const std::vector<std::string> cats = {"c0", "c1", "c2"};
  std::vector<std::string> entities;
  for (int e = 0; e < 6; ++e) entities.push_back("e" + std::to_string(e));

  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
    for (int d = 0; d < 12; ++d) {
      std::vector<std::string> labels;
      for (const auto& cat : cats) {
        if (rng.next_below(3) == 0) labels.push_back(cat);
      }
      std::vector<std::uint32_t> contained;
      for (std::uint32_t e = 0; e < 6; ++e) {
        if (rng.next_below(2) == 0) contained.push_back(e);
      }
      docs.push_back({labels, contained});
    }
    const auto corpus = make_corpus(docs, entities);
    ContingencyCounter counter(corpus, cats);

    for (std::uint32_t e = 0; e < 6; ++e) {
      for (const auto& cat : cats) {
        std::int64_t A = 0, B = 0, C = 0, D = 0;
        for (const auto& [labels, contained] : docs) {
          if (labels.empty()) continue;
          const bool in_cat =
              std::find(labels.begin(), labels.end(), cat) != labels.end();
          const bool has =
              std::find(contained.begin(), contained.end(), e) != contained.end();
          if (in_cat && has) ++A;
          if (!in_cat && has) ++B;
          if (in_cat && !has) ++C;
          if (!in_cat && !has) ++D;
        }
        const auto table = counter.table(entities[e], cat);
        CHECK(table.A == A);
        CHECK(table.B == B);
        CHECK(table.C == C);
        CHECK(table.D == D);
      }
    }
  }
}

TEST_CASE("assign_entities picks the largest chi-square") {
  // Three categories keep the winner strict: with only two, each table is
  // the other's complement and the statistic always ties.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
  for (int i = 0; i < 2; ++i) docs.push_back({{"x"}, {0}});
  for (int i = 0; i < 2; ++i) docs.push_back({{"y"}, {1}});
  for (int i = 0; i < 2; ++i) docs.push_back({{"z"}, {}});
  const auto corpus = make_corpus(docs, {"ex", "ey"});
  const auto assignments = assign_entities(corpus, {"x", "y", "z"});
  REQUIRE(assignments.size() == 2);
  CHECK(assignments[0].entity == "ex");
  CHECK(assignments[0].category_id == "x");
  CHECK(assignments[0].score == 6.0);
  CHECK_FALSE(assignments[0].tie);
  CHECK(assignments[0].runner_up == "y");
  CHECK(assignments[0].runner_up_score == doctest::Approx(1.5));
  CHECK(assignments[0].scores == std::vector<double>{6.0, 1.5, 1.5});
  CHECK(assignments[1].category_id == "y");
}

TEST_CASE("tied argmax prefers larger A, then category id order") {
  // Two categories force equal scores on every nonzero entity (the tables
  // are complements); A is equal too, so the smaller id wins.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs = {
      {{"x"}, {0}}, {{"x"}, {}}, {{"x"}, {}}, {{"y"}, {0}}, {{"y"}, {}},
  };
  const auto corpus = make_corpus(docs, {"both"});
  const auto assignments = assign_entities(corpus, {"y", "x"});
  REQUIRE(assignments.size() == 1);
  CHECK(assignments[0].tie);
  CHECK(assignments[0].category_id == "x");
  CHECK(assignments[0].score == doctest::Approx(5.0 / 36.0));
  CHECK(assignments[0].runner_up == "y");

  // Same degeneracy, but the entity sits in two "b" docs and one "a" doc:
  // the larger A wins before id order is consulted.
  docs = {{{"b"}, {0}}, {{"b"}, {0}}, {{"b"}, {}}, {{"a"}, {0}}, {{"a"}, {}}};
  const auto corpus2 = make_corpus(docs, {"both"});
  const auto tied = assign_entities(corpus2, {"a", "b"});
  REQUIRE(tied.size() == 1);
  CHECK(tied[0].tie);
  CHECK(tied[0].category_id == "b");
  CHECK(tied[0].score == doctest::Approx(5.0 / 36.0));
}

TEST_CASE("all-zero scores land in the unassigned bucket") {
  // Entity in every doc of both categories: AD == BC for each.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs = {
      {{"x"}, {0}}, {{"x"}, {0}}, {{"y"}, {0}}, {{"y"}, {0}}};
  const auto corpus = make_corpus(docs, {"everywhere"});
  const auto assignments = assign_entities(corpus, {"x", "y"});
  REQUIRE(assignments.size() == 1);
  CHECK(assignments[0].category_id == kUnassignedCategory);
  CHECK(assignments[0].score == 0.0);
}

TEST_CASE("assignment equals brute-force argmax over the score matrix") {
  Rng rng(59);
  const std::vector<std::string> cats = {"c0", "c1", "c2"};
  std::vector<std::string> entities;
  for (int e = 0; e < 12; ++e) entities.push_back("e" + std::to_string(e));

  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
  for (int d = 0; d < 30; ++d) {
    std::vector<std::string> labels = {cats[rng.next_below(3)]};
    if (rng.next_below(4) == 0) {
      const auto extra = cats[rng.next_below(3)];
      if (extra != labels[0]) labels.push_back(extra);
    }
    std::vector<std::uint32_t> contained;
    for (std::uint32_t e = 0; e < 12; ++e) {
      if (rng.next_below(3) == 0) contained.push_back(e);
    }
    docs.push_back({labels, contained});
  }
  const auto corpus = make_corpus(docs, entities);
  const auto assignments = assign_entities(corpus, cats);
  ContingencyCounter counter(corpus, cats);

  REQUIRE(assignments.size() == 12);
  for (std::size_t e = 0; e < 12; ++e) {
    double best = 0.0;
    std::string best_cat = kUnassignedCategory;
    std::int64_t best_a = -1;
    for (const auto& cat : cats) {
      const auto table = counter.table(entities[e], cat);
      const auto score = chi_square(table);
      const bool better = score.value > best ||
                          (score.value == best && best_a >= 0 && table.A > best_a);
      if (score.value > 0.0 && (best_cat == kUnassignedCategory || better)) {
        best = score.value;
        best_cat = cat;
        best_a = table.A;
      }
    }
    CHECK(assignments[e].category_id == best_cat);
    if (best_cat != kUnassignedCategory) {
      CHECK(assignments[e].score == doctest::Approx(best));
    }
  }
}

TEST_CASE("eligible_categories applies threshold and frequency ordering") {
  std::vector<EntityAssignment> assignments;
  std::vector<std::pair<std::string, std::int64_t>> lex_rows;
  auto add = [&](const std::string& entity, const std::string& cat, std::int64_t freq) {
    EntityAssignment a;
    a.entity = entity;
    a.category_id = cat;
    a.score = 1.0;
    assignments.push_back(a);
    lex_rows.push_back({entity, freq});
  };
  add("big1", "big", 5);
  add("big2", "big", 50);
  add("big3", "big", 50);
  add("small1", "small", 99);
  EntityAssignment unassigned;
  unassigned.entity = "nowhere";
  unassigned.category_id = kUnassignedCategory;
  assignments.push_back(unassigned);
  lex_rows.push_back({"nowhere", 1});

  const auto lexicon = lexicon_with(lex_rows);
  const auto rosters = eligible_categories(assignments, lexicon, 2);
  REQUIRE(rosters.size() == 1);
  CHECK(rosters[0].category_id == "big");
  CHECK(rosters[0].entities == std::vector<std::string>{"big2", "big3", "big1"});
  CHECK(rosters[0].frequencies == std::vector<std::int64_t>{50, 50, 5});

  CHECK(eligible_categories(assignments, lexicon, 1).size() == 2);
  CHECK(eligible_categories(assignments, lexicon, 100).empty());
  CHECK_THROWS_AS(eligible_categories(assignments, lexicon, 0), ConfigError);
}

TEST_CASE("Table-3-sized rosters with threshold 100 give nine categories") {
  const std::vector<std::pair<std::string, int>> sizes = {
      {"questionnaire", 138},
      {"interview method", 53},
      {"delphi method", 42},
      {"weblog method", 46},
      {"eye tracking and psychophysiological equipment", 62},
      {"think aloud", 13},
      {"computer aided collection", 115},
      {"bibliometric method", 167},
      {"meta analysis", 51},
      {"experimental method", 1252},
      {"comparative research", 125},
      {"case analysis", 44},
      {"historical analysis", 7},
      {"hermeneutics", 200},
      {"grounded theory", 37},
      {"content analysis", 63},
      {"social network analysis", 218},
      {"statistical method", 111},
      {"visualization analysis", 153},
      {"other", 65},
  };
  std::vector<EntityAssignment> assignments;
  EntityLexicon lexicon;
  for (const auto& [cat, count] : sizes) {
    for (int i = 0; i < count; ++i) {
      EntityAssignment a;
      a.entity = cat + "#" + std::to_string(i);
      a.category_id = cat;
      a.score = 1.0;
      assignments.push_back(a);
      lexicon.index[a.entity] = lexicon.entries.size();
      lexicon.entries.push_back({a.entity, 4});
    }
  }
  const auto rosters = eligible_categories(assignments, lexicon, 100);
  CHECK(rosters.size() == 9);
}

TEST_CASE("audit file lists entity, category, scores and tie flag") {
  TempDir dir;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::uint32_t>>> docs;
  for (int i = 0; i < 2; ++i) docs.push_back({{"x"}, {0}});
  for (int i = 0; i < 2; ++i) docs.push_back({{"y"}, {1}});
  for (int i = 0; i < 2; ++i) docs.push_back({{"z"}, {}});
  const auto corpus = make_corpus(docs, {"ex", "ey"});
  const auto assignments = assign_entities(corpus, {"x", "y", "z"});
  const auto path = dir.path() / "audit.tsv";
  save_audit(path, assignments);

  std::ifstream in(path);
  std::string header, line1;
  std::getline(in, header);
  std::getline(in, line1);
  CHECK(header == "entity\tcategory\tscore\trunner_up\trunner_up_score\ttie");
  CHECK(line1.find("ex\tx\t") == 0);
  CHECK(line1.find("\ty\t") != std::string::npos);
  CHECK(line1.find("\tfalse") != std::string::npos);

  // A tied entity serializes the flag as "true".
  docs = {{{"x"}, {0}}, {{"x"}, {}}, {{"x"}, {}}, {{"y"}, {0}}, {{"y"}, {}}};
  const auto tied = assign_entities(make_corpus(docs, {"both"}), {"x", "y"});
  save_audit(path, tied);
  std::ifstream tied_in(path);
  std::string tied_line;
  std::getline(tied_in, tied_line);
  std::getline(tied_in, tied_line);
  CHECK(tied_line.find("both\tx\t") == 0);
  CHECK(tied_line.find("\ttrue") != std::string::npos);
}

TEST_CASE("rosters save and load round-trip") {
  TempDir dir;
  std::vector<CategoryRoster> rosters(1);
  rosters[0].category_id = "cat";
  rosters[0].entities = {"a", "b"};
  rosters[0].frequencies = {9, 4};
  const auto path = dir.path() / "rosters.json";
  save_rosters(path, rosters, 2);
  const auto loaded = load_rosters(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].category_id == "cat");
  CHECK(loaded[0].entities == rosters[0].entities);
  CHECK(loaded[0].frequencies == rosters[0].frequencies);
}
