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

#include "ablcert/cli/commands.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "ablcert/beta_bounds.h"
#include "ablcert/certify.h"
#include "ablcert/cli/dataset.h"
#include "ablcert/cli/report.h"
#include "ablcert/errors.h"
#include "ablcert/oracle.h"
#include "ablcert/radius.h"
#include "ablcert/rng.h"

namespace ablcert::cli {
namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    items.push_back(item);
  }
  return items;
}

std::vector<std::uint64_t> ParseCounts(const std::string& text) {
  std::vector<std::uint64_t> counts;
  const auto items = SplitList(text);
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::uint64_t value = 0;
    const auto& item = items[i];
    const auto result =
        std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || result.ec != std::errc() ||
        result.ptr != item.data() + item.size()) {
      throw InputError("--counts: entry " + std::to_string(i + 1) +
                       " is not a non-negative integer: '" + item + "'");
    }
    counts.push_back(value);
  }
  if (counts.size() < 2) throw InputError("--counts: need at least 2 labels");
  return counts;
}

std::string Lattice(const ExactProb& p, const BigInt& lattice) {
  return p.LatticeCount(lattice).str() + "/" + lattice.str();
}

BigInt CeilDiv(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }

// Decimal or "n/d", rounded onto the 1/C(d, e) lattice.
ExactProb ParseBound(const std::string& text, std::uint64_t d,
                     std::uint64_t e, bool lower, const std::string& what) {
  try {
    if (text.find('/') == std::string::npos) {
      return lower ? QuantizeLower(text, d, e) : QuantizeUpper(text, d, e);
    }
    const ExactProb value = ExactProb::Parse(text);
    const BigInt lattice = Binomial(d, e);
    const BigInt scaled = value.numerator() * lattice;
    const BigInt steps = lower ? CeilDiv(scaled, value.denominator())
                               : scaled / value.denominator();
    return ExactProb::OnLattice(steps, lattice);
  } catch (const InputError& error) {
    throw InputError(what + ": " + error.what());
  } catch (const InvariantError&) {
    throw InputError(what + ": '" + text + "' is not a probability");
  }
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  out.close();
  if (!out) throw InputError("failed writing '" + path + "'");
}

InputVector RandomInput(std::size_t d, Feature domain_size,
                        SampleStream& stream) {
  std::vector<Feature> features(d);
  for (auto& f : features) {
    f = static_cast<Feature>(
        stream.Below(static_cast<std::uint64_t>(domain_size)));
  }
  return InputVector(std::move(features), domain_size);
}

std::unique_ptr<BaseClassifier> MakeClassifier(const RunConfig& config,
                                               const Dataset& dataset) {
  const auto& spec = config.classifier;
  if (spec.name == "constant") {
    if (spec.constant_label >= dataset.c) {
      throw InputError("config: constant_label " +
                       std::to_string(spec.constant_label + 1) +
                       " exceeds c = " + std::to_string(dataset.c));
    }
    return std::make_unique<ConstantClassifier>(spec.constant_label,
                                                dataset.c);
  }
  Prototypes prototypes = spec.prototypes == "fit"
                              ? FitPrototypes(dataset)
                              : LoadPrototypes(spec.prototypes, dataset);
  return std::make_unique<PrototypeClassifier>(std::move(prototypes));
}

}  // namespace

int CmdCertify(const CertifyOptions& options, std::ostream& out,
               std::ostream& err) {
  const Dataset dataset = LoadDataset(options.dataset);
  RunConfig config = LoadConfig(options.config);
  if (options.mode) config.mode = *options.mode;
  const auto& params = config.params;
  if (params.e > dataset.d) {
    throw InputError(options.config + ": e = " + std::to_string(params.e) +
                     " exceeds the dataset's d = " + std::to_string(dataset.d));
  }
  if (params.k >= dataset.c) {
    throw InputError(options.config + ": k = " + std::to_string(params.k) +
                     " must be below the dataset's c = " +
                     std::to_string(dataset.c));
  }
  const auto classifier = MakeClassifier(config, dataset);

  std::mutex progress_mutex;
  std::atomic<std::size_t> done{0};
  std::function<void(const CertificationRecord&)> progress;
  if (options.progress) {
    progress = [&](const CertificationRecord& record) {
      const std::size_t finished = ++done;
      std::lock_guard<std::mutex> lock(progress_mutex);
      err << "[" << finished << "/" << dataset.examples.size() << "] "
          << record.id << " label " << record.certified_label + 1
          << " radius " << record.radius.ToString() << "\n";
    };
  }

  Report report;
  report.config = config;
  report.d = dataset.d;
  report.c = dataset.c;
  report.domain_size = dataset.domain_size;
  report.records = CertifyDataset(*classifier, dataset.examples, params,
                                  config.mode, progress);
  std::sort(report.records.begin(), report.records.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  report.curve = BuildAccuracyCurve(report.records);
  report.metadata = ReportMetadata{CurrentTimestampUtc(), params.threads,
                                   options.dataset, options.config};

  std::string csv_path = options.csv;
  if (csv_path.empty()) {
    csv_path = std::filesystem::path(options.out).replace_extension(".csv");
  }
  WriteFile(options.out, RenderReportJson(report));
  WriteFile(csv_path, RenderCurveCsv(report.curve));

  std::size_t certified = 0;
  for (const auto& record : report.records) {
    if (!record.radius.abstain()) ++certified;
  }
  out << "examples: " << report.records.size() << "\n"
      << "certified (non-abstain): " << certified << "\n"
      << "max radius: " << report.curve.back().r << "\n"
      << "certified accuracy at r=0: "
      << FormatDouble(report.curve.front().accuracy) << "\n"
      << "report: " << options.out << "\n"
      << "curve: " << csv_path << "\n";
  return kExitOk;
}

int CmdRadius(const RadiusOptions& options, std::ostream& out) {
  SampleCounts counts{ParseCounts(options.counts), 0};
  const std::size_t c = counts.num_labels();
  if (options.l < 1 || options.l > c) {
    throw InputError("--l must lie in [1, " + std::to_string(c) + "]");
  }
  counts.target = options.l - 1;
  if (options.n && *options.n != counts.total()) {
    throw InputError("--counts sum to " + std::to_string(counts.total()) +
                     " but --n is " + std::to_string(*options.n));
  }
  const ProblemSpec spec{options.d, options.e, c, options.k, counts.target};
  spec.Validate();
  const DerivedCertificate cert =
      CertifyFromCounts(counts, options.d, options.e, options.k, options.alpha);
  const RadiusSolver solver(spec, cert.quantized);
  const BigInt& lattice = solver.table().Total();

  out << std::setprecision(17);
  out << "n: " << counts.total() << "\n";
  out << "lattice C(" << options.d << "," << options.e << "): " << lattice
      << "\n";
  out << "raw lower bound (label " << options.l << "): " << cert.raw.p_l_lower
      << "\n";
  out << "raw upper bounds:";
  for (Label j = 0; j < c; ++j) {
    if (j != counts.target) out << " " << j + 1 << "=" << cert.raw.p_upper[j];
  }
  out << "\n";
  out << "quantized lower bound: " << Lattice(cert.quantized.p_l_lower, lattice)
      << "\n";
  out << "quantized upper bounds:";
  for (Label j = 0; j < c; ++j) {
    if (j != counts.target) {
      out << " " << j + 1 << "=" << Lattice(cert.quantized.p_upper[j], lattice);
    }
  }
  out << "\n";
  out << "top-k competitors (smallest bound first):";
  for (Label j : solver.order().labels) out << " " << j + 1;
  out << "\n";
  out << "upsilon sums:";
  for (std::size_t t = 1; t <= options.k; ++t) {
    out << " t" << t << "="
        << Lattice(UpsilonSum(solver.order(), cert.quantized, t), lattice);
  }
  out << "\n";
  out << "radius: " << cert.radius.ToString() << "\n";
  return kExitOk;
}

int CmdRegions(const RegionsOptions& options, std::ostream& out) {
  if (options.e < 1 || options.e > options.d) {
    throw InputError("regions needs 1 <= e <= d");
  }
  if (options.domain_size < 2) throw InputError("regions needs V >= 2");
  if (options.r && *options.r > options.d) {
    throw InputError("--r must not exceed d");
  }
  const std::uint64_t first = options.r.value_or(0);
  const std::uint64_t last = options.r.value_or(options.d);
  const InputVector x(std::vector<Feature>(options.d, 0), options.domain_size);

  auto row = [&](std::uint64_t r, const char* method,
                 const RegionProbabilities& p) {
    out << r << " " << method << " " << p.pr_u_a.ToString() << " "
        << p.pr_u_b.ToString() << " " << p.pr_u_c.ToString() << " "
        << p.pr_v_a.ToString() << " " << p.pr_v_b.ToString() << " "
        << p.pr_v_c.ToString() << "\n";
  };
  out << "d=" << options.d << " e=" << options.e << "\n";
  out << "r method Pr(U in A) Pr(U in B) Pr(U in C) Pr(V in A) Pr(V in B) "
         "Pr(V in C)\n";
  std::size_t disagreements = 0;
  for (std::uint64_t r = first; r <= last; ++r) {
    Perturbation delta;
    for (std::size_t i = 0; i < r; ++i) {
      delta.indices.push_back(i);
      delta.new_values.push_back(1);
    }
    const auto analytic = RegionProbabilitiesAnalytic(options.d, options.e, r);
    const auto enumerated = RegionProbabilitiesEnum(x, delta, options.e);
    row(r, "analytic", analytic);
    row(r, "enumerated", enumerated);
    if (!(analytic == enumerated)) ++disagreements;
  }
  out << disagreements << " disagreements\n";
  return disagreements == 0 ? kExitOk : kExitInvariantFailure;
}

int CmdSoundness(const SoundnessOptions& options, std::ostream& out) {
  if (options.c < 2) throw InputError("soundness needs c >= 2");
  if (options.k && (*options.k < 1 || *options.k >= options.c)) {
    throw InputError("--k must lie in [1, c - 1]");
  }
  if (options.domain_size < 2) throw InputError("soundness needs V >= 2");
  std::size_t violations = 0;
  std::size_t certified = 0;
  std::uint64_t max_radius = 0;
  std::uint64_t perturbations = 0;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    SampleStream stream(options.seed, trial);
    const std::size_t k =
        options.k.value_or(std::min<std::size_t>(1 + trial % 2, options.c - 1));
    const auto favored = static_cast<Label>(stream.Below(options.c));
    const double bias = 0.5 + 0.5 * stream.Unit();
    const TableClassifier f =
        RandomTableClassifier(options.d, options.e, options.domain_size,
                              options.c, favored, bias, stream);
    const InputVector x = RandomInput(options.d, options.domain_size, stream);
    const SmoothedPrediction exact = SmoothedTopKExact(f, x, options.e, 1);
    const Label target = stream.Below(2) == 0
                             ? exact.top_k.front()
                             : static_cast<Label>(stream.Below(options.c));
    QuantizedBounds bounds{exact.probabilities[target], exact.probabilities};
    bounds.p_upper[target] = ExactProb::Zero();
    const ProblemSpec spec{options.d, options.e, options.c, k, target};
    const CertifiedRadius radius = SolveCertifiedRadius(spec, bounds);
    if (!radius.abstain()) {
      ++certified;
      max_radius = std::max(max_radius, radius.value());
    }
    const SoundnessVerdict verdict =
        SoundnessCheck(f, x, target, options.e, k, radius);
    perturbations += verdict.perturbations_checked;
    if (!verdict.sound) {
      ++violations;
      out << "violation in trial " << trial << ": label " << target + 1
          << " k=" << k << " radius " << radius.ToString()
          << " leaves the top-k under a perturbation of "
          << verdict.counterexample->size() << " features\n";
    }
  }
  out << "trials: " << options.trials << "\n"
      << "certified: " << certified << "\n"
      << "max radius: " << max_radius << "\n"
      << "perturbations checked: " << perturbations << "\n"
      << violations << " violations\n";
  return violations == 0 ? kExitOk : kExitInvariantFailure;
}

int CmdTightness(const TightnessOptions& options, std::ostream& out) {
  if (options.domain_size < 2) throw InputError("tightness needs V >= 2");
  if (options.p_lower) {
    const auto uppers = SplitList(options.p_upper);
    const std::size_t c = uppers.size();
    if (c < 2) throw InputError("--p-upper: need one bound per label");
    if (options.l < 1 || options.l > c) {
      throw InputError("--l must lie in [1, " + std::to_string(c) + "]");
    }
    const ProblemSpec spec{options.d, options.e, c,
                           options.k.value_or(1), options.l - 1};
    spec.Validate();
    QuantizedBounds bounds;
    bounds.p_l_lower =
        ParseBound(*options.p_lower, spec.d, spec.e, true, "--p-lower");
    bounds.p_upper.assign(c, ExactProb::Zero());
    for (Label j = 0; j < c; ++j) {
      if (j == spec.target) continue;
      bounds.p_upper[j] =
          ParseBound(uppers[j], spec.d, spec.e, false,
                     "--p-upper entry " + std::to_string(j + 1));
    }
    if (const auto failed = CheckTightnessAssumptions(spec, bounds)) {
      out << "skipped: assumption does not hold: " << ToString(*failed)
          << "\n";
      return kExitOk;
    }
    const InputVector x(std::vector<Feature>(spec.d, 0), options.domain_size);
    const TightnessVerdict v = TightnessCheck(spec, bounds, x);
    const CertifiedRadius radius = SolveCertifiedRadius(spec, bounds);
    out << "certified radius: " << radius.ToString() << "\n"
        << "attack size: " << v.attack_size << "\n"
        << "target probability after attack: " << v.target_probability.ToString()
        << "\n"
        << "k-th competitor after attack: "
        << v.kth_competitor_probability.ToString() << "\n"
        << "consistent with bounds: " << (v.consistent ? "yes" : "no") << "\n"
        << "attack succeeded: "
        << (v.dethroned ? "yes (dethroned)" : v.tie ? "yes (tie)" : "no")
        << "\n"
        << "attack at certified radius fails: "
        << (v.holds_within_certificate ? "yes" : "no") << "\n";
    return v.attack_succeeded && v.consistent && v.holds_within_certificate
               ? kExitOk
               : kExitInvariantFailure;
  }

  if (options.k && (*options.k < 1 || *options.k >= options.c)) {
    throw InputError("--k must lie in [1, c - 1]");
  }
  std::map<std::string, std::size_t> skipped;
  std::size_t valid = 0;
  std::size_t succeeded = 0;
  std::size_t held = 0;
  std::size_t failures = 0;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    SampleStream stream(options.seed, trial);
    const std::size_t k = options.k.value_or(
        std::min<std::size_t>(1 + trial % 3, options.c - 1));
    const TightnessInstance instance =
        RandomTightnessInstance(options.d, options.e, options.c, k, stream);
    if (const auto failed =
            CheckTightnessAssumptions(instance.spec, instance.bounds)) {
      ++skipped[ToString(*failed)];
      continue;
    }
    ++valid;
    const InputVector x = RandomInput(options.d, options.domain_size, stream);
    const TightnessVerdict v =
        TightnessCheck(instance.spec, instance.bounds, x);
    const bool success = v.attack_succeeded && v.consistent;
    if (success) ++succeeded;
    if (v.holds_within_certificate) ++held;
    if (!success || !v.holds_within_certificate) {
      ++failures;
      out << "failure in trial " << trial << ": k=" << k
          << " consistent=" << v.consistent
          << " attack_succeeded=" << v.attack_succeeded
          << " holds_within_certificate=" << v.holds_within_certificate
          << "\n";
    }
  }
  out << "trials: " << options.trials << "\n"
      << "assumption-satisfying instances: " << valid << "\n";
  for (const auto& [name, count] : skipped) {
    out << "skipped (" << name << "): " << count << "\n";
  }
  auto rate = [&](std::size_t hits) {
    return valid == 0 ? std::string("n/a")
                      : FormatDouble(100.0 * static_cast<double>(hits) /
                                     static_cast<double>(valid)) +
                            "%";
  };
  out << "attack success rate: " << rate(succeeded) << " (" << succeeded << "/"
      << valid << ")\n"
      << "attack at r_l fails: " << rate(held) << " (" << held << "/" << valid
      << ")\n";
  return failures == 0 ? kExitOk : kExitInvariantFailure;
}

int CmdSynth(const SynthCommandOptions& options, std::ostream& out) {
  SynthOptions synth;
  synth.examples = options.examples;
  synth.d = options.d;
  synth.c = options.c;
  synth.domain_size = options.domain_size;
  synth.noise_min = options.noise_min;
  synth.noise_max = options.noise_max;
  synth.seed = options.seed;
  const SynthResult result = Synthesize(synth);
  std::ostringstream dataset;
  WriteDataset(dataset, result.dataset);
  WriteFile(options.dataset_out, dataset.str());
  out << "dataset: " << options.dataset_out << " ("
      << result.dataset.examples.size() << " examples)\n";
  if (!options.prototypes_out.empty()) {
    std::ostringstream prototypes;
    WritePrototypes(prototypes, result.prototypes, options.domain_size);
    WriteFile(options.prototypes_out, prototypes.str());
    out << "prototypes: " << options.prototypes_out << "\n";
  }
  return kExitOk;
}

int CmdVerify(const VerifyOptions& options, std::ostream& out) {
  std::ifstream in(options.report);
  if (!in) throw InputError("cannot open '" + options.report + "'");
  const StoredReport report = ParseReportJson(in, options.report);
  const VerifyResult result = VerifyReport(report);
  for (const auto& line : result.mismatches) out << line << "\n";
  out << "records checked: " << result.checked << "\n"
      << result.mismatches.size() << " mismatches\n";
  return result.mismatches.empty() ? kExitOk : kExitInvariantFailure;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Certified top-k robustness under randomized ablation"};
  app.require_subcommand(1);

  CertifyOptions certify;
  std::string certify_mode;
  auto* certify_cmd =
      app.add_subcommand("certify", "Certify every example of a dataset");
  certify_cmd->add_option("--dataset", certify.dataset, "Dataset CSV")
      ->required();
  certify_cmd->add_option("--config", certify.config, "Run configuration")
      ->required();
  certify_cmd->add_option("--out", certify.out, "JSON report path")
      ->required();
  certify_cmd->add_option("--csv", certify.csv,
                          "Accuracy curve CSV (default: --out with .csv)");
  certify_cmd->add_option("--mode", certify_mode,
                          "true-label or empirical-top1 (overrides config)");
  certify_cmd->add_flag("--progress", certify.progress,
                        "Per-example status on stderr");

  RadiusOptions radius;
  std::uint64_t radius_n = 0;
  auto* radius_cmd =
      app.add_subcommand("radius", "Certified radius from label counts");
  radius_cmd->add_option("--counts", radius.counts, "n_1,...,n_c")
      ->required();
  radius_cmd->add_option("--l", radius.l, "Target label (1-based)")
      ->required();
  radius_cmd->add_option("--d", radius.d, "Number of features")->required();
  radius_cmd->add_option("--e", radius.e, "Retained features")->required();
  radius_cmd->add_option("--k", radius.k, "Top-k")->capture_default_str();
  radius_cmd->add_option("--alpha", radius.alpha, "Confidence budget")
      ->capture_default_str();
  auto* radius_n_opt =
      radius_cmd->add_option("--n", radius_n, "Expected sample total");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "Brute-force checks on small instances");
  oracle_cmd->require_subcommand(1);

  RegionsOptions regions;
  std::uint64_t regions_r = 0;
  auto* regions_cmd = oracle_cmd->add_subcommand(
      "regions", "Analytic vs enumerated region probabilities");
  regions_cmd->add_option("--d", regions.d)->required();
  regions_cmd->add_option("--e", regions.e)->required();
  auto* regions_r_opt =
      regions_cmd->add_option("--r", regions_r, "Perturbation size");
  regions_cmd->add_option("--V", regions.domain_size)->capture_default_str();

  SoundnessOptions soundness;
  std::size_t soundness_k = 0;
  auto* soundness_cmd = oracle_cmd->add_subcommand(
      "soundness", "Random table classifiers under every perturbation");
  soundness_cmd->add_option("--trials", soundness.trials)
      ->capture_default_str();
  soundness_cmd->add_option("--d", soundness.d)->capture_default_str();
  soundness_cmd->add_option("--e", soundness.e)->capture_default_str();
  soundness_cmd->add_option("--c", soundness.c)->capture_default_str();
  auto* soundness_k_opt = soundness_cmd->add_option("--k", soundness_k);
  soundness_cmd->add_option("--V", soundness.domain_size)
      ->capture_default_str();
  soundness_cmd->add_option("--seed", soundness.seed)->capture_default_str();

  TightnessOptions tightness;
  std::size_t tightness_k = 0;
  std::string tightness_lower;
  auto* tightness_cmd = oracle_cmd->add_subcommand(
      "tightness", "Worst-case classifier attack just past the radius");
  tightness_cmd->add_option("--trials", tightness.trials)
      ->capture_default_str();
  tightness_cmd->add_option("--d", tightness.d)->capture_default_str();
  tightness_cmd->add_option("--e", tightness.e)->capture_default_str();
  tightness_cmd->add_option("--c", tightness.c)->capture_default_str();
  auto* tightness_k_opt = tightness_cmd->add_option("--k", tightness_k);
  tightness_cmd->add_option("--V", tightness.domain_size)
      ->capture_default_str();
  tightness_cmd->add_option("--seed", tightness.seed)->capture_default_str();
  auto* tightness_lower_opt = tightness_cmd->add_option(
      "--p-lower", tightness_lower, "Explicit lower bound for label --l");
  tightness_cmd
      ->add_option("--p-upper", tightness.p_upper,
                   "Explicit upper bounds, one per label")
      ->needs(tightness_lower_opt);
  tightness_cmd->add_option("--l", tightness.l, "Target label (1-based)")
      ->capture_default_str();

  SynthCommandOptions synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "Write a synthetic dataset");
  synth_cmd->add_option("--out", synth.dataset_out, "Dataset CSV path")
      ->required();
  synth_cmd->add_option("--prototypes-out", synth.prototypes_out,
                        "Also write the generating prototypes");
  synth_cmd->add_option("--examples", synth.examples)->capture_default_str();
  synth_cmd->add_option("--d", synth.d)->capture_default_str();
  synth_cmd->add_option("--c", synth.c)->capture_default_str();
  synth_cmd->add_option("--V", synth.domain_size)->capture_default_str();
  synth_cmd->add_option("--noise-min", synth.noise_min)->capture_default_str();
  synth_cmd->add_option("--noise-max", synth.noise_max)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Re-solve every record of a report from its counts");
  verify_cmd->add_option("--report", verify.report)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*certify_cmd) {
      if (!certify_mode.empty()) certify.mode = ParseTargetMode(certify_mode);
      return CmdCertify(certify, out, err);
    }
    if (*radius_cmd) {
      if (*radius_n_opt) radius.n = radius_n;
      return CmdRadius(radius, out);
    }
    if (*regions_cmd) {
      if (*regions_r_opt) regions.r = regions_r;
      return CmdRegions(regions, out);
    }
    if (*soundness_cmd) {
      if (*soundness_k_opt) soundness.k = soundness_k;
      return CmdSoundness(soundness, out);
    }
    if (*tightness_cmd) {
      if (*tightness_k_opt) tightness.k = tightness_k;
      if (*tightness_lower_opt) tightness.p_lower = tightness_lower;
      return CmdTightness(tightness, out);
    }
    if (*synth_cmd) return CmdSynth(synth, out);
    if (*verify_cmd) return CmdVerify(verify, out);
  } catch (const InputError& error) {
    err << "error: " << error.what() << "\n";
    return kExitInputError;
  } catch (const GuardError& error) {
    err << "guard violation: " << error.what() << "\n";
    return kExitGuardViolation;
  } catch (const InvariantError& error) {
    err << "internal invariant failure: " << error.what() << "\n";
    return kExitInvariantFailure;
  } catch (const std::exception& error) {
    err << "internal error: " << error.what() << "\n";
    return kExitInvariantFailure;
  }
  return kExitInputError;
}

}  // namespace ablcert::cli
