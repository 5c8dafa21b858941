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

#ifndef ABLCERT_CLI_REPORT_H_
#define ABLCERT_CLI_REPORT_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ablcert/certify.h"
#include "ablcert/cli/config.h"

namespace ablcert::cli {

inline constexpr std::string_view kReportSchema = "ablcert-report";
inline constexpr int kReportSchemaVersion = 1;

// Run-dependent fields. They live under the top-level "metadata" key so
// that everything else is a pure function of inputs and seed.
struct ReportMetadata {
  std::string generated_at;
  unsigned threads = 1;
  std::string dataset_path;
  std::string config_path;
};

struct Report {
  RunConfig config;
  std::size_t d = 0;
  std::size_t c = 0;
  Feature domain_size = 0;
  // Sorted by id.
  std::vector<CertificationRecord> records;
  AccuracyCurve curve;
  ReportMetadata metadata;
};

// Labels are written 1-based. Quantized bounds are "numerator/denominator"
// strings; raw bounds are doubles with null at the target.
std::string RenderReportJson(const Report& report);

// "r,certified_topk_accuracy" followed by one row per curve point.
std::string RenderCurveCsv(const AccuracyCurve& curve);

// Shortest decimal that round-trips to the same double.
std::string FormatDouble(double value);

// ISO-8601 UTC, second resolution.
std::string CurrentTimestampUtc();

// The report with its "metadata" member removed, re-serialized. Two runs
// with equal inputs and seed yield equal strings.
std::string StripMetadata(std::string_view report_json);

// What a stored report claims, enough to re-derive each certificate.
struct StoredRecord {
  std::string id;
  Label true_label = 0;
  Label certified_label = 0;
  std::vector<std::uint64_t> counts;
  std::string radius;
  std::string quantized_lower;
  std::vector<std::string> quantized_upper;
};

struct StoredReport {
  std::uint64_t d = 0;
  std::uint64_t e = 0;
  std::size_t k = 0;
  double alpha = 0.0;
  std::vector<StoredRecord> records;
  AccuracyCurve curve;
};

StoredReport ParseReportJson(std::istream& in, std::string_view source);

struct VerifyResult {
  std::size_t checked = 0;
  // One line per disagreement, naming the record and the field.
  std::vector<std::string> mismatches;
};

// Re-solves every record from its counts and recomputes the curve.
VerifyResult VerifyReport(const StoredReport& report);

}  // namespace ablcert::cli

#endif  // ABLCERT_CLI_REPORT_H_
