#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "taxokit/config.hpp"
#include "taxokit/taxonomy.hpp"
#include "taxokit/version.hpp"

namespace {

namespace fs = std::filesystem;
using oracles::contains;
using oracles::MiniProject;

#ifndef TAXOKIT_CLI_PATH
#error "TAXOKIT_CLI_PATH must point at the taxokit binary"
#endif

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string quoted(const fs::path& path) { return "'" + path.string() + "'"; }

CliResult run_cli(const oracles::TempDir& dir, const std::string& args,
                  const std::string& env = "") {
  static int serial = 0;
  const fs::path out_file = dir.path() / ("cli-out-" + std::to_string(serial) + ".txt");
  const fs::path err_file = dir.path() / ("cli-err-" + std::to_string(serial) + ".txt");
  ++serial;

  std::string command;
  if (!env.empty()) command += env + " ";
  command += quoted(TAXOKIT_CLI_PATH) + " " + args + " >" + quoted(out_file) + " 2>" +
             quoted(err_file);
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);

  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

fs::path write_config(const MiniProject& project, const std::string& name) {
  return project.dir.write(name, taxokit::config_to_json(project.config).dump(2) + "\n");
}

}  // namespace

TEST_CASE("cli reports its version and help") {
  oracles::TempDir dir;

  CliResult version = run_cli(dir, "--version");
  CHECK(version.exit_code == 0);
  CHECK(version.out == std::string(taxokit::kVersion) + "\n");
  CHECK(version.out == "0.1.0\n");

  CliResult help = run_cli(dir, "--help");
  CHECK(help.exit_code == 0);
  CHECK(contains(help.out, "run-all"));
  CHECK(contains(help.out, "--config"));
}

TEST_CASE("cli usage errors exit with code 1") {
  oracles::TempDir dir;

  CliResult bare = run_cli(dir, "");
  CHECK(bare.exit_code == 1);
  CHECK(!bare.err.empty());

  CliResult unknown = run_cli(dir, "frobnicate");
  CHECK(unknown.exit_code == 1);
  CHECK(!unknown.err.empty());

  CliResult absent = run_cli(dir, "ingest --config " + quoted(dir.path() / "absent.json"));
  CHECK(absent.exit_code == 1);
  CHECK(!absent.err.empty());
}

TEST_CASE("cli maps config errors to exit code 1") {
  MiniProject project;
  project.config.sweeps.damping = 1.5;
  fs::path config = write_config(project, "bad.json");

  CliResult result = run_cli(project.dir, "ingest --config " + quoted(config));
  CHECK(result.exit_code == 1);
  CHECK(contains(result.err, "error: config field sweeps.damping must lie in [0.5, 1)"));
}

TEST_CASE("cli maps data errors to exit code 2") {
  MiniProject project;
  fs::path config = write_config(project, "config.json");

  CliResult result = run_cli(project.dir, "train --config " + quoted(config));
  CHECK(result.exit_code == 2);
  CHECK(contains(result.err, "error: token artifacts not found; run `ingest`"));
}

TEST_CASE("cli output directory precedence is config file, env, flag") {
  MiniProject project;
  fs::path config = write_config(project, "config.json");
  const std::string ingest = "ingest --config " + quoted(config);

  CliResult from_config = run_cli(project.dir, ingest);
  CHECK(from_config.exit_code == 0);
  CHECK(contains(from_config.out, "ingest:"));
  CHECK(fs::exists(project.artifacts().tokens()));

  const fs::path env_dir = project.dir.path() / "out-env";
  CliResult from_env =
      run_cli(project.dir, ingest, "TAXOKIT_OUTPUT_DIR=" + quoted(env_dir));
  CHECK(from_env.exit_code == 0);
  CHECK(fs::exists(env_dir / "tokens.jsonl"));

  const fs::path ignored_env = project.dir.path() / "out-env-ignored";
  const fs::path flag_dir = project.dir.path() / "out-flag";
  CliResult from_flag = run_cli(project.dir, ingest + " --output " + quoted(flag_dir),
                                "TAXOKIT_OUTPUT_DIR=" + quoted(ignored_env));
  CHECK(from_flag.exit_code == 0);
  CHECK(fs::exists(flag_dir / "tokens.jsonl"));
  CHECK(!fs::exists(ignored_env));
}

TEST_CASE("cli run-all drives every stage and mirrors options") {
  MiniProject project;
  fs::path config = write_config(project, "config.json");

  const fs::path full = project.dir.path() / "full";
  CliResult run = run_cli(project.dir,
                          "run-all --config " + quoted(config) + " --output " + quoted(full));
  CHECK(run.exit_code == 0);
  for (const char* stage :
       {"ingest:", "train:", "assign:", "cluster:", "evaluate:", "build:", "export:"}) {
    CHECK_MESSAGE(contains(run.out, stage), "missing summary for ", stage);
  }
  CHECK(fs::exists(full / "taxonomy.json"));
  CHECK(fs::exists(full / "taxonomy.html"));
  CHECK(fs::exists(full / "manifest.json"));

  const fs::path trimmed = project.dir.path() / "top1";
  CliResult narrow =
      run_cli(project.dir, "run-all --config " + quoted(config) + " --output " +
                               quoted(trimmed) + " --top-k 1");
  CHECK(narrow.exit_code == 0);
  taxokit::TaxonomyNode taxonomy = taxokit::load_taxonomy(trimmed / "taxonomy.json");
  REQUIRE(taxonomy.children.size() == 1);
  for (const auto& category : taxonomy.children[0].children) {
    CHECK(category.children.size() == 1);
  }
}
