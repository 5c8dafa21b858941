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

#include "ablcert/cli/report.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "ablcert/errors.h"
#include "json.hpp"

namespace ablcert::cli {
namespace {

using Json = nlohmann::ordered_json;

Json RadiusJson(const CertifiedRadius& radius) {
  if (radius.abstain()) return "abstain";
  return radius.value();
}

Json RecordJson(const CertificationRecord& record) {
  const Label target = record.certified_label;
  Json upper_raw = Json::array();
  Json upper_q = Json::array();
  for (Label j = 0; j < record.raw.p_upper.size(); ++j) {
    if (j == target) {
      upper_raw.push_back(nullptr);
      upper_q.push_back(nullptr);
    } else {
      upper_raw.push_back(record.raw.p_upper[j]);
      upper_q.push_back(record.quantized.p_upper[j].ToString());
    }
  }
  Json top_k = Json::array();
  for (Label j : record.empirical_top_k) top_k.push_back(j + 1);

  Json out;
  out["id"] = record.id;
  out["true_label"] = record.true_label + 1;
  out["certified_label"] = record.certified_label + 1;
  out["n"] = record.counts.total();
  out["counts"] = record.counts.counts;
  out["raw_bounds"] = {{"p_l_lower", record.raw.p_l_lower},
                       {"p_upper", upper_raw}};
  out["quantized_bounds"] = {{"p_l_lower", record.quantized.p_l_lower.ToString()},
                             {"p_upper", upper_q}};
  out["certified"] = !record.radius.abstain();
  out["radius"] = RadiusJson(record.radius);
  out["empirical_top_k"] = top_k;
  return out;
}

template <typename T>
T Field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InputError(where + ": field '" + key + "' has the wrong type");
  }
}

Label OneBasedLabel(const Json& object, const char* key,
                    const std::string& where) {
  const auto value = Field<std::uint64_t>(object, key, where);
  if (value < 1) throw InputError(where + ": " + key + " must be >= 1");
  return static_cast<Label>(value - 1);
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string CurrentTimestampUtc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string RenderReportJson(const Report& report) {
  const auto& params = report.config.params;
  Json classifier;
  classifier["name"] = report.config.classifier.name;
  if (report.config.classifier.name == "prototype") {
    classifier["prototypes"] = report.config.classifier.prototypes;
  } else {
    classifier["constant_label"] = report.config.classifier.constant_label + 1;
  }

  Json root;
  root["schema"] = kReportSchema;
  root["schema_version"] = kReportSchemaVersion;
  root["params"] = {{"e", params.e},
                    {"k", params.k},
                    {"n", params.n},
                    {"alpha", params.alpha},
                    {"seed", params.seed},
                    {"mode", ToString(report.config.mode)},
                    {"classifier", classifier}};
  root["dataset"] = {{"d", report.d},
                     {"c", report.c},
                     {"V", report.domain_size},
                     {"examples", report.records.size()}};
  Json records = Json::array();
  for (const auto& record : report.records) records.push_back(RecordJson(record));
  root["records"] = std::move(records);
  Json curve = Json::array();
  for (const auto& point : report.curve) {
    curve.push_back({{"r", point.r}, {"accuracy", point.accuracy}});
  }
  root["curve"] = std::move(curve);
  root["metadata"] = {{"generated_at", report.metadata.generated_at},
                      {"threads", report.metadata.threads},
                      {"dataset_path", report.metadata.dataset_path},
                      {"config_path", report.metadata.config_path}};
  return root.dump(2) + "\n";
}

std::string RenderCurveCsv(const AccuracyCurve& curve) {
  std::string out = "r,certified_topk_accuracy\n";
  for (const auto& point : curve) {
    out += std::to_string(point.r) + "," + FormatDouble(point.accuracy) + "\n";
  }
  return out;
}

std::string StripMetadata(std::string_view report_json) {
  Json root;
  try {
    root = Json::parse(report_json);
  } catch (const Json::exception& error) {
    throw InputError(std::string("report is not valid JSON: ") + error.what());
  }
  if (root.is_object()) root.erase("metadata");
  return root.dump(2) + "\n";
}

StoredReport ParseReportJson(std::istream& in, std::string_view source) {
  const std::string where(source);
  Json root;
  try {
    root = Json::parse(in);
  } catch (const Json::exception& error) {
    throw InputError(where + ": not valid JSON: " + error.what());
  }
  if (Field<std::string>(root, "schema", where) != kReportSchema) {
    throw InputError(where + ": not an ablcert report");
  }
  if (Field<int>(root, "schema_version", where) != kReportSchemaVersion) {
    throw InputError(where + ": unsupported schema_version");
  }
  const Json params = Field<Json>(root, "params", where);
  const Json dataset = Field<Json>(root, "dataset", where);
  StoredReport out;
  out.d = Field<std::uint64_t>(dataset, "d", where + ": dataset");
  out.e = Field<std::uint64_t>(params, "e", where + ": params");
  out.k = Field<std::size_t>(params, "k", where + ": params");
  out.alpha = Field<double>(params, "alpha", where + ": params");

  const Json records = Field<Json>(root, "records", where);
  if (!records.is_array()) throw InputError(where + ": records must be a list");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Json& r = records[i];
    const std::string at = where + ": record " + std::to_string(i + 1);
    StoredRecord record;
    record.id = Field<std::string>(r, "id", at);
    record.true_label = OneBasedLabel(r, "true_label", at);
    record.certified_label = OneBasedLabel(r, "certified_label", at);
    record.counts = Field<std::vector<std::uint64_t>>(r, "counts", at);
    const Json radius = Field<Json>(r, "radius", at);
    record.radius = radius.is_string() ? radius.get<std::string>()
                                       : std::to_string(Field<std::uint64_t>(
                                             r, "radius", at));
    const Json q = Field<Json>(r, "quantized_bounds", at);
    record.quantized_lower = Field<std::string>(q, "p_l_lower", at);
    for (const Json& u : Field<Json>(q, "p_upper", at)) {
      record.quantized_upper.push_back(u.is_null() ? "" : u.get<std::string>());
    }
    out.records.push_back(std::move(record));
  }
  for (const Json& point : Field<Json>(root, "curve", where)) {
    out.curve.push_back(CurvePoint{Field<std::uint64_t>(point, "r", where),
                                   Field<double>(point, "accuracy", where)});
  }
  return out;
}

VerifyResult VerifyReport(const StoredReport& report) {
  VerifyResult result;
  std::vector<CertificationRecord> rebuilt;
  for (const auto& stored : report.records) {
    ++result.checked;
    auto mismatch = [&](const std::string& what) {
      result.mismatches.push_back("record '" + stored.id + "': " + what);
    };
    SampleCounts counts{stored.counts, stored.certified_label};
    DerivedCertificate derived;
    try {
      derived = CertifyFromCounts(counts, report.d, report.e, report.k,
                                  report.alpha);
    } catch (const InputError& error) {
      mismatch(std::string("cannot re-solve: ") + error.what());
      continue;
    }
    if (derived.radius.ToString() != stored.radius) {
      mismatch("radius " + stored.radius + " but re-solve gives " +
               derived.radius.ToString());
    }
    if (derived.quantized.p_l_lower.ToString() != stored.quantized_lower) {
      mismatch("quantized p_l_lower differs");
    }
    for (Label j = 0; j < derived.quantized.p_upper.size(); ++j) {
      if (j == stored.certified_label) continue;
      if (j >= stored.quantized_upper.size() ||
          derived.quantized.p_upper[j].ToString() != stored.quantized_upper[j]) {
        mismatch("quantized p_upper for label " + std::to_string(j + 1) +
                 " differs");
      }
    }
    CertificationRecord record;
    record.id = stored.id;
    record.true_label = stored.true_label;
    record.certified_label = stored.certified_label;
    record.radius = derived.radius;
    rebuilt.push_back(std::move(record));
  }
  if (!rebuilt.empty()) {
    const AccuracyCurve curve = BuildAccuracyCurve(rebuilt);
    bool same = curve.size() == report.curve.size();
    for (std::size_t i = 0; same && i < curve.size(); ++i) {
      same = curve[i].r == report.curve[i].r &&
             curve[i].accuracy == report.curve[i].accuracy;
    }
    if (!same) result.mismatches.push_back("accuracy curve differs");
  }
  return result;
}

}  // namespace ablcert::cli
