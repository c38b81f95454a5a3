// Copyright 2026 The WCNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "doctest.h"
#include "wcnn/error.h"
#include "wcnn/netpbm.h"

namespace wcnn {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A small synthetic run: 4 classes, 4 train and 2 test images each, 18 -> 16.
std::vector<std::string> TinyTrainArgs(const fs::path& out) {
  return {"train",         "--out",        out.string(),  "--levels",
          "1",             "--base-channels", "4",        "--epochs",
          "2",             "--batch-size", "4",           "--crop-source",
          "18",            "--crop-target", "16",         "--set",
          "synthetic_train_per_class=4", "--set", "synthetic_test_per_class=2", "--quiet"};
}

TEST_CASE("cli: exit codes by error family") {
  CHECK(cli::ExitCodeFor(ConfigError("x")) == cli::kExitUsage);
  CHECK(cli::ExitCodeFor(BuildError("x")) == cli::kExitUsage);
  CHECK(cli::ExitCodeFor(IoError("x")) == cli::kExitIo);
  CHECK(cli::ExitCodeFor(CodecError("x", 0)) == cli::kExitIo);
  CHECK(cli::ExitCodeFor(IntegrityError("x")) == cli::kExitIo);
  CHECK(cli::ExitCodeFor(NumericalError("x")) == cli::kExitNumeric);
  CHECK(cli::ExitCodeFor(std::runtime_error("x")) == cli::kExitInternal);
  CHECK(Cli({}).code == cli::kExitUsage);
  CHECK(Cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(Cli({"params", "--levels", "0"}).code == cli::kExitUsage);
  CHECK(Cli({"params", "--levels", "6"}).code == cli::kExitUsage);
  CHECK(Cli({"train", "--out", "/tmp/x", "--data", "a", "--synthetic", "coarse"}).code ==
        cli::kExitUsage);
  CHECK(Cli({"decompose", "/nonexistent.ppm", "--levels", "1", "--out", "/tmp"}).code ==
        cli::kExitIo);
  CHECK(Cli({"eval", "--checkpoint", "/nonexistent.wcnn"}).code == cli::kExitIo);
}

TEST_CASE("cli: params table rows sum to the total") {
  const Run r = Cli({"params"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t sum = 0;
  std::size_t total = 0;
  bool saw_wavelet = false;
  const std::regex row(R"(^(\S+)\s+(\S+)\s+.*\s(\d+)\s*$)");
  while (std::getline(lines, line)) {
    std::smatch m;
    if (line.rfind("total=", 0) == 0) {
      total = std::stoull(line.substr(6));
    } else if (std::regex_match(line, m, row) && m[2] != "kind") {
      sum += std::stoull(m[3]);
      if (m[2] == "wavelet") {
        saw_wavelet = true;
        CHECK(m[3] == "0");
      }
    }
  }
  CHECK(saw_wavelet);
  CHECK(total == 461604);
  CHECK(sum == total);
}

TEST_CASE("cli: decompose a constant image gives mid-grey detail bands") {
  const fs::path dir = FreshDir("wcnn_cli_decompose");
  SavePpm(Tensor({3, 16, 16}, 0.4f), dir / "flat.ppm");
  const Run r = Cli({"decompose", (dir / "flat.ppm").string(), "--levels", "2", "--out",
                     (dir / "bands").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("subbands=8") != std::string::npos);
  for (const char* band : {"LH", "HL", "HH"}) {
    const Tensor t = LoadPnm(dir / "bands" / (std::string("level1_") + band + ".pgm"));
    for (float v : t.data()) CHECK(v == doctest::Approx(128.0 / 255.0));
  }
  CHECK(fs::exists(dir / "bands" / "level2_LL.pgm"));
  const Run deep = Cli({"decompose", (dir / "flat.ppm").string(), "--levels", "5", "--out",
                        (dir / "deep").string()});
  CHECK(deep.code == cli::kExitUsage);
}

TEST_CASE("cli: train writes the run directory and eval reproduces accuracy") {
  const fs::path dir = FreshDir("wcnn_cli_train");
  const Run r = Cli(TinyTrainArgs(dir / "run"));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* f : {"config.resolved", "checkpoint.wcnn", "metrics.csv", "confusion.csv"})
    CHECK(fs::exists(dir / "run" / f));
  CHECK(r.out.find("final_test_acc=") != std::string::npos);
  CHECK(ReadFile(dir / "run" / "metrics.csv").rfind("epoch,train_loss,train_acc,test_acc,seconds\n", 0) == 0);

  // The resolved config alone reproduces the run.
  const Run again = Cli({"train", "--config", (dir / "run" / "config.resolved").string(), "--out",
                         (dir / "again").string(), "--quiet"});
  REQUIRE(again.code == 0);
  CHECK(ReadFile(dir / "run" / "metrics.csv") == ReadFile(dir / "again" / "metrics.csv"));
  CHECK(ReadFile(dir / "run" / "checkpoint.wcnn") == ReadFile(dir / "again" / "checkpoint.wcnn"));

  const Run eval = Cli({"eval", "--checkpoint", (dir / "run" / "checkpoint.wcnn").string(),
                        "--config", (dir / "run" / "config.resolved").string(), "--out",
                        (dir / "eval").string()});
  REQUIRE_MESSAGE(eval.code == 0, eval.err);
  std::smatch train_acc;
  std::smatch eval_acc;
  REQUIRE(std::regex_search(r.out, train_acc, std::regex(R"(final_test_acc=([0-9.]+))")));
  REQUIRE(std::regex_search(eval.out, eval_acc, std::regex(R"(accuracy=([0-9.]+))")));
  CHECK(train_acc[1] == eval_acc[1]);
  CHECK(ReadFile(dir / "eval" / "confusion.csv") == ReadFile(dir / "run" / "confusion.csv"));
}

TEST_CASE("cli: params of a checkpoint match its training run") {
  const fs::path dir = FreshDir("wcnn_cli_params");
  const Run r = Cli(TinyTrainArgs(dir));
  REQUIRE(r.code == 0);
  const Run p = Cli({"params", "--checkpoint", (dir / "checkpoint.wcnn").string()});
  REQUIRE(p.code == 0);
  std::smatch params;
  REQUIRE(std::regex_search(r.out, params, std::regex(R"(params=(\d+))")));
  CHECK(p.out.find("total=" + params[1].str()) != std::string::npos);
}

TEST_CASE("cli: WCNN_THREADS must be a positive integer") {
  ::setenv("WCNN_THREADS", "zero", 1);
  CHECK(Cli({"params"}).code == cli::kExitUsage);
  ::setenv("WCNN_THREADS", "1", 1);
  CHECK(Cli({"params"}).code == 0);
  ::unsetenv("WCNN_THREADS");
}

}  // namespace
}  // namespace wcnn
