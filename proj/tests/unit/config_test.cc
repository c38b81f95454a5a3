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

#include <string>

#include "doctest.h"
#include "wcnn/config.h"
#include "wcnn/error.h"

namespace wcnn {
namespace {

TEST_CASE("config: defaults round-trip through text") {
  const RunConfig defaults;
  CHECK(ParseRunConfig(SerializeRunConfig(defaults)) == defaults);
  CHECK(ParseRunConfig("") == defaults);
}

TEST_CASE("config: every edited field round-trips") {
  RunConfig c;
  c.levels = 2;
  c.stages = 5;
  c.base_channels = 12;
  c.subbands = SubbandMode::kDetailOnly;
  c.train.learning_rate = 3.3e-4f;
  c.train.adam_beta2 = 0.98f;
  c.train.batch_size = 7;
  c.train.epochs = 2;
  c.train.seed = 123456789012345ULL;
  c.train.crop_source = 40;
  c.train.crop_target = 32;
  c.train.flip = false;
  c.train.record_timing = true;
  c.split = "kth:2";
  c.synthetic_spec.orientations_deg = {0.0, 45.0, 90.0};
  c.synthetic_spec.noise = 0.1;
  c.synthetic_spec.seed = 99;
  const std::string text = SerializeRunConfig(c);
  CHECK(ParseRunConfig(text) == c);
  CHECK(SerializeRunConfig(ParseRunConfig(text)) == text);
}

TEST_CASE("config: comments, whitespace and overrides") {
  const RunConfig c = ParseRunConfig(
      "# header\n"
      "  levels = 2   # trailing\n"
      "\n"
      "levels=4\n"
      "synthetic_noise = 0.5\n"
      "synthetic = coarse\n");
  CHECK(c.levels == 4);
  CHECK(c.synthetic == "coarse");
  // The preset is applied first, so the explicit key still wins.
  CHECK(c.synthetic_spec.noise == 0.5);
  CHECK(c.synthetic_spec.frequencies == CoarseSyntheticSpec().frequencies);
}

TEST_CASE("config: errors name the offending line") {
  auto message = [](const std::string& text) {
    try {
      ParseRunConfig(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("levels = 3\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(message("levels = three\n").find("line 1") != std::string::npos);
  CHECK(message("\n\nlevels\n").find("line 3") != std::string::npos);
  CHECK(message("flip = maybe\n").find("line 1") != std::string::npos);
  CHECK(message("subbands = some\n").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(ParseRunConfig("levels = 0\n").Validate(), ConfigError);
  CHECK_THROWS_AS(ParseRunConfig("crop_target = 80\n").Validate(), ConfigError);
  CHECK_THROWS_AS(ParseRunConfig("split = sideways\n").Validate(), ConfigError);
}

TEST_CASE("config: set value and derived specs") {
  RunConfig c;
  SetRunConfigValue(c, "base_channels", "8");
  SetRunConfigValue(c, "crop_target", "32");
  SetRunConfigValue(c, "crop_source", "36");
  CHECK_THROWS_AS(SetRunConfigValue(c, "nope", "1"), ConfigError);
  const NetworkSpec spec = c.Spec(3, 6);
  CHECK(spec.input_shape == Shape{3, 32, 32});
  CHECK(spec.base_channels == 8);
  CHECK(spec.num_classes == 6);
  CHECK(c.Synthetic().size == 36);
  CHECK_THROWS_AS(LoadRunConfig("/nonexistent/wcnn.cfg"), IoError);
}

}  // namespace
}  // namespace wcnn
