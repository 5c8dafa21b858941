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

#include "ablcert/cli/dataset.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ablcert/errors.h"
#include "ablcert/rng.h"

namespace ablcert::cli {
namespace {

std::string_view Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

bool ParseInt(std::string_view text, long long& value) {
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  return result.ec == std::errc() && result.ptr == end && !text.empty();
}

struct Header {
  std::size_t d = 0;
  std::size_t c = 0;
  Feature domain_size = 0;
};

// "# <magic> v1 d=.. c=.. V=.."
Header ParseHeader(std::string_view line, std::string_view magic,
                   std::string_view source) {
  std::istringstream tokens{std::string(line)};
  std::string hash;
  std::string kind;
  std::string version;
  tokens >> hash >> kind >> version;
  if (hash != "#" || kind != magic || version != "v1") {
    throw InputError(std::string(source) + ": line 1: expected header '# " +
                     std::string(magic) + " v1 d=<d> c=<c> V=<V>'");
  }
  std::map<std::string, long long> fields;
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    long long value = 0;
    if (eq == std::string::npos ||
        !ParseInt(std::string_view(token).substr(eq + 1), value)) {
      throw InputError(std::string(source) + ": line 1: malformed header field '" +
                       token + "'");
    }
    fields[token.substr(0, eq)] = value;
  }
  for (const char* key : {"d", "c", "V"}) {
    if (!fields.count(key)) {
      throw InputError(std::string(source) + ": line 1: header is missing " +
                       key + "=");
    }
  }
  if (fields["d"] < 1 || fields["c"] < 2 || fields["V"] < 1 ||
      fields["V"] > (1LL << 30)) {
    throw InputError(std::string(source) +
                     ": line 1: need d >= 1, c >= 2 and V >= 1");
  }
  return Header{static_cast<std::size_t>(fields["d"]),
                static_cast<std::size_t>(fields["c"]),
                static_cast<Feature>(fields["V"])};
}

void ExpectColumns(std::string_view line, std::string_view first_column,
                   bool with_id, std::size_t d, std::string_view source) {
  std::string expected = with_id ? "id," : "";
  expected += first_column;
  for (std::size_t i = 0; i < d; ++i) expected += ",x" + std::to_string(i);
  if (Trim(line) != expected) {
    throw InputError(std::string(source) +
                     ": line 2: column header must be '" +
                     (expected.size() > 60 ? expected.substr(0, 60) + "..."
                                           : expected) +
                     "'");
  }
}

std::string RowContext(std::string_view source, std::size_t row,
                       std::size_t line) {
  return std::string(source) + ": row " + std::to_string(row) + " (line " +
         std::to_string(line) + ")";
}

// Parses d feature fields starting at fields[offset].
std::vector<Feature> ParseFeatures(const std::vector<std::string_view>& fields,
                                   std::size_t offset, const Header& header,
                                   const std::string& context) {
  std::vector<Feature> features;
  features.reserve(header.d);
  for (std::size_t i = 0; i < header.d; ++i) {
    long long value = 0;
    if (!ParseInt(fields[offset + i], value)) {
      throw InputError(context + ": feature x" + std::to_string(i) +
                       " is not an integer: '" +
                       std::string(fields[offset + i]) + "'");
    }
    if (value < 0 || value >= header.domain_size) {
      throw InputError(context + ": feature x" + std::to_string(i) + " = " +
                       std::to_string(value) + " outside [0, " +
                       std::to_string(header.domain_size) + ")");
    }
    features.push_back(static_cast<Feature>(value));
  }
  return features;
}

Label ParseLabel(std::string_view text, std::size_t c,
                 const std::string& context) {
  long long value = 0;
  if (!ParseInt(text, value) || value < 1 ||
      value > static_cast<long long>(c)) {
    throw InputError(context + ": label '" + std::string(text) +
                     "' outside [1, " + std::to_string(c) + "]");
  }
  return static_cast<Label>(value - 1);
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

Dataset ParseDataset(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError(std::string(source) + ": empty dataset file");
  }
  const Header header = ParseHeader(line, "ablcert-dataset", source);
  if (!std::getline(in, line)) {
    throw InputError(std::string(source) + ": missing column header");
  }
  ExpectColumns(line, "label", true, header.d, source);

  Dataset dataset{header.d, header.c, header.domain_size, {}};
  std::set<std::string, std::less<>> seen;
  std::size_t line_number = 2;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    ++row;
    const std::string context = RowContext(source, row, line_number);
    const auto fields = SplitCsv(line);
    if (fields.size() != header.d + 2) {
      throw InputError(context + ": expected " +
                       std::to_string(header.d + 2) + " fields, got " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw InputError(context + ": empty id");
    if (!seen.insert(std::string(fields[0])).second) {
      throw InputError(context + ": duplicate id '" + std::string(fields[0]) +
                       "'");
    }
    const Label label = ParseLabel(fields[1], header.c, context);
    dataset.examples.push_back(
        Example{std::string(fields[0]), label,
                InputVector(ParseFeatures(fields, 2, header, context),
                            header.domain_size)});
  }
  if (dataset.examples.empty()) {
    throw InputError(std::string(source) + ": dataset has no rows");
  }
  return dataset;
}

Dataset LoadDataset(const std::string& path) {
  auto in = OpenInput(path);
  return ParseDataset(in, path);
}

void WriteDataset(std::ostream& out, const Dataset& dataset) {
  out << "# ablcert-dataset v1 d=" << dataset.d << " c=" << dataset.c
      << " V=" << dataset.domain_size << "\n";
  out << "id,label";
  for (std::size_t i = 0; i < dataset.d; ++i) out << ",x" << i;
  out << "\n";
  for (const auto& ex : dataset.examples) {
    out << ex.id << "," << ex.label + 1;
    for (Feature f : ex.x.features()) out << "," << f;
    out << "\n";
  }
}

Prototypes ParsePrototypes(std::istream& in, std::string_view source,
                           const Dataset& dataset) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError(std::string(source) + ": empty prototype file");
  }
  const Header header = ParseHeader(line, "ablcert-prototypes", source);
  if (header.d != dataset.d || header.c != dataset.c ||
      header.domain_size != dataset.domain_size) {
    throw InputError(std::string(source) +
                     ": header d/c/V do not match the dataset");
  }
  if (!std::getline(in, line)) {
    throw InputError(std::string(source) + ": missing column header");
  }
  ExpectColumns(line, "label", false, header.d, source);
  Prototypes prototypes(header.c);
  std::vector<bool> filled(header.c, false);
  std::size_t line_number = 2;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    ++row;
    const std::string context = RowContext(source, row, line_number);
    const auto fields = SplitCsv(line);
    if (fields.size() != header.d + 1) {
      throw InputError(context + ": expected " +
                       std::to_string(header.d + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const Label label = ParseLabel(fields[0], header.c, context);
    if (filled[label]) {
      throw InputError(context + ": duplicate prototype for label " +
                       std::to_string(label + 1));
    }
    filled[label] = true;
    prototypes[label] = ParseFeatures(fields, 1, header, context);
  }
  for (Label j = 0; j < header.c; ++j) {
    if (!filled[j]) {
      throw InputError(std::string(source) + ": no prototype for label " +
                       std::to_string(j + 1));
    }
  }
  return prototypes;
}

Prototypes LoadPrototypes(const std::string& path, const Dataset& dataset) {
  auto in = OpenInput(path);
  return ParsePrototypes(in, path, dataset);
}

void WritePrototypes(std::ostream& out, const Prototypes& prototypes,
                     Feature domain_size) {
  const std::size_t d = prototypes.empty() ? 0 : prototypes.front().size();
  out << "# ablcert-prototypes v1 d=" << d << " c=" << prototypes.size()
      << " V=" << domain_size << "\n";
  out << "label";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
  out << "\n";
  for (Label j = 0; j < prototypes.size(); ++j) {
    out << j + 1;
    for (Feature f : prototypes[j]) out << "," << f;
    out << "\n";
  }
}

Prototypes FitPrototypes(const Dataset& dataset) {
  // votes[label][feature][value]
  std::vector<std::vector<std::vector<std::uint64_t>>> votes(
      dataset.c, std::vector<std::vector<std::uint64_t>>(
                     dataset.d, std::vector<std::uint64_t>(
                                    static_cast<std::size_t>(
                                        dataset.domain_size),
                                    0)));
  for (const auto& ex : dataset.examples) {
    for (std::size_t i = 0; i < dataset.d; ++i) {
      ++votes[ex.label][i][static_cast<std::size_t>(ex.x[i])];
    }
  }
  Prototypes prototypes(dataset.c, std::vector<Feature>(dataset.d, 0));
  for (Label j = 0; j < dataset.c; ++j) {
    for (std::size_t i = 0; i < dataset.d; ++i) {
      const auto& v = votes[j][i];
      Feature best = 0;
      for (std::size_t value = 1; value < v.size(); ++value) {
        if (v[value] > v[static_cast<std::size_t>(best)]) {
          best = static_cast<Feature>(value);
        }
      }
      prototypes[j][i] = best;
    }
  }
  return prototypes;
}

SynthResult Synthesize(const SynthOptions& options) {
  if (options.examples < 1 || options.d < 1 || options.c < 2 ||
      options.domain_size < 2) {
    throw InputError("synth needs examples >= 1, d >= 1, c >= 2, V >= 2");
  }
  if (!(options.noise_min >= 0.0 && options.noise_min <= options.noise_max &&
        options.noise_max <= 1.0)) {
    throw InputError("synth needs 0 <= noise_min <= noise_max <= 1");
  }
  const auto domain = static_cast<std::uint64_t>(options.domain_size);
  SampleStream proto_stream(options.seed, 0);
  SynthResult out;
  out.prototypes.assign(options.c, std::vector<Feature>(options.d));
  for (auto& proto : out.prototypes) {
    for (auto& f : proto) f = static_cast<Feature>(proto_stream.Below(domain));
  }
  out.dataset = Dataset{options.d, options.c, options.domain_size, {}};
  for (std::size_t i = 0; i < options.examples; ++i) {
    SampleStream stream(options.seed, i + 1);
    const auto label = static_cast<Label>(stream.Below(options.c));
    const double noise =
        options.noise_min +
        (options.noise_max - options.noise_min) * stream.Unit();
    std::vector<Feature> features = out.prototypes[label];
    for (auto& f : features) {
      if (stream.Unit() < noise) f = static_cast<Feature>(stream.Below(domain));
    }
    char id[32];
    std::snprintf(id, sizeof(id), "ex%05zu", i + 1);
    out.dataset.examples.push_back(
        Example{id, label, InputVector(std::move(features), options.domain_size)});
  }
  return out;
}

}  // namespace ablcert::cli
