#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "temp_dir.hpp"

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

// Runs the experiment binary with the given arguments from inside `dir`.
CommandResult run_cli(const testutil::TempDir& dir, const std::string& args) {
  const std::string log = dir.file("cli-output.log");
  const std::string command =
      "cd '" + dir.path().string() + "' && '" + OODLAB_CLI_PATH + "' " + args + " > '" + log +
      "' 2>&1";
  const int status = std::system(command.c_str());
  CommandResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);

  std::ifstream in(log);
  std::ostringstream out;
  out << in.rdbuf();
  result.output = out.str();
  return result;
}

void write_config(const testutil::TempDir& dir, const std::string& name,
                  const std::string& extra = "") {
  std::ofstream out(dir.file(name));
  out << "run_id = cli\n"
         "blob_classes = 3\n"
         "blob_samples_per_class = 30\n"
         "hidden_layers = 8\n"
         "epochs = 2\n"
         "batch_size = 16\n"
         "seed = 3\n"
      << extra;  // output_dir defaults to "runs"
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("train subcommand writes a run directory and prints metrics") {
  testutil::TempDir dir;
  write_config(dir, "train.cfg");
  const CommandResult result = run_cli(dir, "train --config train.cfg");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("run_id,head,entropic_scale") != std::string::npos);
  CHECK(result.output.find("cli,isomax,10,") != std::string::npos);
  CHECK(file_exists(dir.file("runs/cli/checkpoint.txt")));
  CHECK(file_exists(dir.file("runs/cli/metrics.csv")));
  CHECK(file_exists(dir.file("runs/cli/curves.csv")));
  CHECK(file_exists(dir.file("runs/cli/run_meta.txt")));
}

TEST_CASE("eval subcommand scores an existing checkpoint") {
  testutil::TempDir dir;
  write_config(dir, "train.cfg");
  REQUIRE(run_cli(dir, "train --config train.cfg").exit_code == 0);

  const CommandResult entropic =
      run_cli(dir, "eval --checkpoint runs/cli/checkpoint.txt --config train.cfg");
  CHECK(entropic.exit_code == 0);
  CHECK(entropic.output.find(",entropic,blobs,ring,") != std::string::npos);

  const CommandResult mps =
      run_cli(dir, "eval --checkpoint runs/cli/checkpoint.txt --config train.cfg --score mps");
  CHECK(mps.exit_code == 0);
  CHECK(mps.output.find(",mps,blobs,ring,") != std::string::npos);

  const CommandResult bad_score =
      run_cli(dir, "eval --checkpoint runs/cli/checkpoint.txt --config train.cfg --score energy");
  CHECK(bad_score.exit_code != 0);
  CHECK(bad_score.output.find("error:") != std::string::npos);
}

TEST_CASE("sweep subcommand produces one row per scale plus the baseline") {
  testutil::TempDir dir;
  write_config(dir, "sweep.cfg");
  const CommandResult result = run_cli(dir, "sweep --config sweep.cfg --scales 1,3");
  CHECK(result.exit_code == 0);
  CHECK(file_exists(dir.file("runs/cli-softmax/checkpoint.txt")));
  CHECK(file_exists(dir.file("runs/cli-es1/checkpoint.txt")));
  CHECK(file_exists(dir.file("runs/cli-es3/checkpoint.txt")));

  std::ifstream metrics(dir.file("runs/metrics.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(metrics, line)) ++rows;
  CHECK(rows == 4);  // header + baseline + two scales
}

TEST_CASE("report subcommand merges run directories") {
  testutil::TempDir dir;
  write_config(dir, "train.cfg");
  REQUIRE(run_cli(dir, "train --config train.cfg").exit_code == 0);
  // remove the merged files if any, then rebuild them via report
  const CommandResult result = run_cli(dir, "report --runs runs");
  CHECK(result.exit_code == 0);
  CHECK(file_exists(dir.file("runs/metrics.csv")));
  CHECK(file_exists(dir.file("runs/curves.csv")));

  const CommandResult missing = run_cli(dir, "report --runs not-there");
  CHECK(missing.exit_code != 0);
  CHECK(missing.output.find("error:") != std::string::npos);
}

TEST_CASE("identical train invocations produce identical artifacts") {
  testutil::TempDir dir;
  write_config(dir, "a.cfg", "output_dir = runs-a\n");
  write_config(dir, "b.cfg", "output_dir = runs-b\n");
  REQUIRE(run_cli(dir, "train --config a.cfg").exit_code == 0);
  REQUIRE(run_cli(dir, "train --config b.cfg").exit_code == 0);

  for (const char* name : {"checkpoint.txt", "metrics.csv", "curves.csv"}) {
    std::ifstream a(dir.file(std::string("runs-a/cli/") + name));
    std::ifstream b(dir.file(std::string("runs-b/cli/") + name));
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
}

TEST_CASE("bad inputs exit nonzero with a one-line diagnostic") {
  testutil::TempDir dir;
  SUBCASE("missing config file") {
    const CommandResult result = run_cli(dir, "train --config nope.cfg");
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("error:") != std::string::npos);
  }
  SUBCASE("config with an unknown key") {
    std::ofstream(dir.file("bad.cfg")) << "epocs = 3\n";
    const CommandResult result = run_cli(dir, "train --config bad.cfg");
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("bad.cfg line 1") != std::string::npos);
  }
  SUBCASE("unknown subcommand") {
    CHECK(run_cli(dir, "tune --config x").exit_code != 0);
  }
  SUBCASE("no subcommand") {
    CHECK(run_cli(dir, "").exit_code != 0);
  }
}
