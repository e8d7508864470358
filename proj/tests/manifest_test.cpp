#include <doctest.h>

#include <fstream>
#include <string>

#include <json.hpp>

#include "taxokit/errors.hpp"
#include "taxokit/manifest.hpp"
#include "taxokit/version.hpp"
#include "tempdir.hpp"

using namespace taxokit;
using oracles::TempDir;

TEST_CASE("sha256 matches published test vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
}

TEST_CASE("file digests agree with the in-memory digest") {
  TempDir dir;
  const auto path = dir.write("payload.bin", "abc");
  CHECK(sha256_file(path) == sha256_hex("abc"));
  CHECK(sha256_file(dir.write("empty.bin", "")) == sha256_hex(""));
  CHECK_THROWS_AS(sha256_file(dir.path() / "missing.bin"), DataError);
}

TEST_CASE("manifest records inputs and stages with digests") {
  TempDir dir;
  const auto manifest_path = dir.path() / "manifest.json";
  const auto input = dir.write("corpus.jsonl", "{}\n");
  const auto output = dir.write("tokens.jsonl", "[]\n");

  nlohmann::json snapshot = {{"seed", 42}};
  auto manifest = RunManifest::open(manifest_path, snapshot);
  manifest.record_input("corpus", input);
  manifest.record_stage("ingest", {{"tokens", output}});
  manifest.save();

  std::ifstream in(manifest_path);
  nlohmann::json doc;
  in >> doc;
  CHECK(doc["tool_version"] == kVersion);
  CHECK(doc["config"]["seed"] == 42);
  CHECK(doc["inputs"]["corpus"]["sha256"] == sha256_hex("{}\n"));
  CHECK(doc["inputs"]["corpus"]["path"] == input.string());
  CHECK(doc["stages"]["ingest"]["outputs"]["tokens"]["sha256"] == sha256_hex("[]\n"));
  CHECK(doc["stages"]["ingest"].contains("completed_at"));
  CHECK(doc.contains("created_at"));
  CHECK(doc.contains("updated_at"));
}

TEST_CASE("reopening preserves created_at and earlier stages") {
  TempDir dir;
  const auto manifest_path = dir.path() / "manifest.json";
  const auto artifact = dir.write("a.txt", "first");

  auto first = RunManifest::open(manifest_path, nlohmann::json{{"seed", 1}});
  first.record_stage("ingest", {{"a", artifact}});
  first.save();

  std::ifstream snapshot_in(manifest_path);
  nlohmann::json before;
  snapshot_in >> before;

  auto second = RunManifest::open(manifest_path, nlohmann::json{{"seed", 2}});
  second.record_stage("train", {{"a", artifact}});
  second.save();

  std::ifstream in(manifest_path);
  nlohmann::json after;
  in >> after;
  CHECK(after["created_at"] == before["created_at"]);
  CHECK(after["stages"].contains("ingest"));
  CHECK(after["stages"].contains("train"));
  CHECK(after["config"]["seed"] == 2);  // snapshot restamped on reopen
}

TEST_CASE("a corrupt manifest file restarts cleanly") {
  TempDir dir;
  const auto manifest_path = dir.write("manifest.json", "{{{ not json");
  auto manifest = RunManifest::open(manifest_path, nlohmann::json::object());
  CHECK(manifest.document()["stages"].is_object());
  manifest.save();

  std::ifstream in(manifest_path);
  nlohmann::json doc;
  in >> doc;
  CHECK(doc.contains("created_at"));
}

TEST_CASE("recording a missing output fails loudly") {
  TempDir dir;
  auto manifest = RunManifest::open(dir.path() / "manifest.json", nlohmann::json::object());
  CHECK_THROWS_AS(manifest.record_stage("ingest", {{"gone", dir.path() / "gone.bin"}}),
                  DataError);
}
