// Copyright 2026 The ablcert Authors
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

#include "ablcert/cli/config.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "ablcert/errors.h"

namespace ablcert::cli {
namespace {

std::string_view Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

template <typename T>
T ParseUnsigned(std::string_view value, const std::string& context) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (value.empty() || result.ec != std::errc() || result.ptr != end) {
    throw InputError(context + ": expected a non-negative integer, got '" +
                     std::string(value) + "'");
  }
  return out;
}

double ParseDouble(std::string_view value, const std::string& context) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto result = std::from_chars(value.data(), end, out);
  if (value.empty() || result.ec != std::errc() || result.ptr != end ||
      !std::isfinite(out)) {
    throw InputError(context + ": expected a number, got '" +
                     std::string(value) + "'");
  }
  return out;
}

}  // namespace

std::string ToString(TargetMode mode) {
  return mode == TargetMode::kTrueLabel ? "true-label" : "empirical-top1";
}

TargetMode ParseTargetMode(std::string_view text) {
  if (text == "true-label") return TargetMode::kTrueLabel;
  if (text == "empirical-top1") return TargetMode::kEmpiricalTop1;
  throw InputError("mode must be 'true-label' or 'empirical-top1', got '" +
                   std::string(text) + "'");
}

RunConfig ParseConfig(std::istream& in, std::string_view source,
                      const std::string& base_dir) {
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = Trim(text);
    if (text.empty()) continue;
    const std::string context =
        std::string(source) + ":" + std::to_string(line_number);
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(context + ": expected 'key = value'");
    }
    const std::string key(Trim(text.substr(0, eq)));
    const std::string_view value = Trim(text.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw InputError(context + ": duplicate key '" + key + "'");
    }
    const std::string where = context + ": " + key;
    if (key == "e") {
      config.params.e = ParseUnsigned<std::size_t>(value, where);
    } else if (key == "k") {
      config.params.k = ParseUnsigned<std::size_t>(value, where);
    } else if (key == "n") {
      config.params.n = ParseUnsigned<std::uint64_t>(value, where);
    } else if (key == "alpha") {
      config.params.alpha = ParseDouble(value, where);
    } else if (key == "seed") {
      config.params.seed = ParseUnsigned<std::uint64_t>(value, where);
    } else if (key == "threads") {
      config.params.threads = ParseUnsigned<unsigned>(value, where);
    } else if (key == "classifier") {
      if (value != "prototype" && value != "constant") {
        throw InputError(where + ": must be 'prototype' or 'constant'");
      }
      config.classifier.name = std::string(value);
    } else if (key == "prototypes") {
      if (value.empty()) throw InputError(where + ": empty path");
      if (value == "fit") {
        config.classifier.prototypes = "fit";
      } else {
        std::filesystem::path path{std::string(value)};
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        config.classifier.prototypes = path.lexically_normal().string();
      }
    } else if (key == "constant_label") {
      const auto label = ParseUnsigned<std::size_t>(value, where);
      if (label < 1) throw InputError(where + ": labels start at 1");
      config.classifier.constant_label = label - 1;
    } else if (key == "mode") {
      try {
        config.mode = ParseTargetMode(value);
      } catch (const InputError& error) {
        throw InputError(context + ": " + error.what());
      }
    } else {
      throw InputError(context + ": unknown key '" + key + "'");
    }
  }
  if (!seen.count("e")) {
    throw InputError(std::string(source) + ": missing required key 'e'");
  }
  try {
    config.params.Validate();
  } catch (const InputError& error) {
    throw InputError(std::string(source) + ": " + error.what());
  }
  return config;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return ParseConfig(in, path, dir.empty() ? "." : dir.string());
}

}  // namespace ablcert::cli
