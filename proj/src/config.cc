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

#include "wcnn/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "wcnn/error.h"

namespace wcnn {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad value for " + key + ": '" + value + "' (expected true or false)");
}

std::vector<double> ParseList(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseNumber<double>(key, Trim(item)));
  if (out.empty()) throw ConfigError(key + " must not be empty");
  return out;
}

template <typename T>
std::string Format(T v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string FormatList(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + Format(v[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter Number(T RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.*field = ParseNumber<T>(k, v);
  };
}

template <typename T>
Setter TrainNumber(T TrainConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.train.*field = ParseNumber<T>(k, v);
  };
}

template <typename T>
Setter SynthNumber(T SyntheticSpec::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.synthetic_spec.*field = ParseNumber<T>(k, v);
  };
}

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"levels", Number(&RunConfig::levels)},
      {"stages", Number(&RunConfig::stages)},
      {"base_channels", Number(&RunConfig::base_channels)},
      {"subbands",
       [](RunConfig& c, const std::string&, const std::string& v) {
         try {
           c.subbands = ParseSubbandMode(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {"learning_rate", TrainNumber(&TrainConfig::learning_rate)},
      {"adam_beta1", TrainNumber(&TrainConfig::adam_beta1)},
      {"adam_beta2", TrainNumber(&TrainConfig::adam_beta2)},
      {"adam_eps", TrainNumber(&TrainConfig::adam_eps)},
      {"batch_size", TrainNumber(&TrainConfig::batch_size)},
      {"epochs", TrainNumber(&TrainConfig::epochs)},
      {"seed", TrainNumber(&TrainConfig::seed)},
      {"crop_source", TrainNumber(&TrainConfig::crop_source)},
      {"crop_target", TrainNumber(&TrainConfig::crop_target)},
      {"flip",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.flip = ParseBool(k, v);
       }},
      {"record_timing",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.train.record_timing = ParseBool(k, v);
       }},
      {"data", [](RunConfig& c, const std::string&, const std::string& v) { c.data = v; }},
      {"split", [](RunConfig& c, const std::string&, const std::string& v) { c.split = v; }},
      {"synthetic",
       [](RunConfig& c, const std::string&, const std::string& v) {
         try {
           c.synthetic_spec = SyntheticPreset(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
         c.synthetic = v;
       }},
      {"synthetic_orientations",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.synthetic_spec.orientations_deg = ParseList(k, v);
       }},
      {"synthetic_frequencies",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.synthetic_spec.frequencies = ParseList(k, v);
       }},
      {"synthetic_contrast", SynthNumber(&SyntheticSpec::contrast)},
      {"synthetic_noise", SynthNumber(&SyntheticSpec::noise)},
      {"synthetic_orientation_jitter", SynthNumber(&SyntheticSpec::orientation_jitter_deg)},
      {"synthetic_frequency_jitter", SynthNumber(&SyntheticSpec::frequency_jitter)},
      {"synthetic_train_per_class", SynthNumber(&SyntheticSpec::train_per_class)},
      {"synthetic_test_per_class", SynthNumber(&SyntheticSpec::test_per_class)},
      {"synthetic_seed", SynthNumber(&SyntheticSpec::seed)},
  };
  return setters;
}

}  // namespace

void RunConfig::Validate() const {
  if (levels < 1 || levels > kMaxLevels) {
    throw ConfigError("levels must be in [1," + std::to_string(kMaxLevels) + "], got " +
                      std::to_string(levels));
  }
  if (stages != 0 && stages < levels) throw ConfigError("stages must be 0 or >= levels");
  if (base_channels < 1) throw ConfigError("base_channels must be positive");
  train.Validate();
  if (synthetic_spec.train_per_class < 1 || synthetic_spec.test_per_class < 1) {
    throw ConfigError("synthetic per-class counts must be positive");
  }
  if (split != "auto" && split != "kth" && split.rfind("kth:", 0) != 0 &&
      split.rfind("holdout:", 0) != 0 &&
      split.rfind("list:", 0) != 0) {
    throw ConfigError("split must be auto, kth, kth:<i>, holdout:<groups> or list:<train>,<test>");
  }
}

NetworkSpec RunConfig::Spec(int channels, int num_classes) const {
  NetworkSpec spec;
  spec.input_shape = {channels, train.crop_target, train.crop_target};
  spec.levels = levels;
  spec.stages = stages;
  spec.base_channels = base_channels;
  spec.num_classes = num_classes;
  spec.subband_mode = subbands;
  return spec;
}

SyntheticSpec RunConfig::Synthetic() const {
  SyntheticSpec spec = synthetic_spec;
  spec.size = train.crop_source;
  return spec;
}

void SetRunConfigValue(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& setters = Setters();
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

RunConfig ParseRunConfig(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<int> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (int line_no = 1; std::getline(in, raw); ++line_no) {
    const auto hash = raw.find('#');
    const std::string line = Trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    entries.emplace_back(Trim(std::string_view(line).substr(0, eq)),
                         Trim(std::string_view(line).substr(eq + 1)));
    lines.push_back(line_no);
  }
  RunConfig config;
  auto apply = [&](std::size_t i) {
    try {
      SetRunConfigValue(config, entries[i].first, entries[i].second);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lines[i]) + ": " + e.what());
    }
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first == "synthetic") apply(i);
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != "synthetic") apply(i);
  }
  return config;
}

std::string SerializeRunConfig(const RunConfig& c) {
  const SyntheticSpec& s = c.synthetic_spec;
  std::ostringstream out;
  out << "# network\n"
      << "levels = " << c.levels << '\n'
      << "stages = " << c.stages << '\n'
      << "base_channels = " << c.base_channels << '\n'
      << "subbands = " << ToString(c.subbands) << '\n'
      << "# training\n"
      << "learning_rate = " << Format(c.train.learning_rate) << '\n'
      << "adam_beta1 = " << Format(c.train.adam_beta1) << '\n'
      << "adam_beta2 = " << Format(c.train.adam_beta2) << '\n'
      << "adam_eps = " << Format(c.train.adam_eps) << '\n'
      << "batch_size = " << c.train.batch_size << '\n'
      << "epochs = " << c.train.epochs << '\n'
      << "seed = " << c.train.seed << '\n'
      << "crop_source = " << c.train.crop_source << '\n'
      << "crop_target = " << c.train.crop_target << '\n'
      << "flip = " << (c.train.flip ? "true" : "false") << '\n'
      << "record_timing = " << (c.train.record_timing ? "true" : "false") << '\n'
      << "# data\n"
      << "data = " << c.data << '\n'
      << "split = " << c.split << '\n'
      << "synthetic = " << c.synthetic << '\n'
      << "synthetic_orientations = " << FormatList(s.orientations_deg) << '\n'
      << "synthetic_frequencies = " << FormatList(s.frequencies) << '\n'
      << "synthetic_contrast = " << Format(s.contrast) << '\n'
      << "synthetic_noise = " << Format(s.noise) << '\n'
      << "synthetic_orientation_jitter = " << Format(s.orientation_jitter_deg) << '\n'
      << "synthetic_frequency_jitter = " << Format(s.frequency_jitter) << '\n'
      << "synthetic_train_per_class = " << s.train_per_class << '\n'
      << "synthetic_test_per_class = " << s.test_per_class << '\n'
      << "synthetic_seed = " << s.seed << '\n';
  return out.str();
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

}  // namespace wcnn
