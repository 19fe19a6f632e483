// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCKR_INGEST_HPP_
#define TCKR_INGEST_HPP_

// Interchange format for prediction logs of shadow and audited models.
//
//   manifest.json    {"version":1,"num_models":M,"num_examples":N,
//                     "num_classes":C,"confidence_file":"confidences.csv",
//                     "membership_file":"membership.csv",
//                     "target_file":"target.csv"}
//   confidences.csv  model_id,example_id,true_label,confidence   (M*N rows)
//   membership.csv   model_id,example_id,is_member              (M*N rows)
//   target.csv       example_id,true_label,confidence,is_member
//
// Confidences are the softmax probability of the true class. They are
// written as the shortest decimal that round-trips the double exactly.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tckr/csv.hpp"
#include "tckr/error.hpp"
#include "tckr/shadow_matrix.hpp"

namespace tckr {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kConfidenceHeader =
    "model_id,example_id,true_label,confidence";
inline constexpr std::string_view kMembershipHeader =
    "model_id,example_id,is_member";
inline constexpr std::string_view kTargetHeader =
    "example_id,true_label,confidence,is_member";

struct Manifest {
  int version = kFormatVersion;
  long num_models = 0;
  long num_examples = 0;
  long num_classes = 0;
  std::string confidence_file = "confidences.csv";
  std::string membership_file = "membership.csv";
  std::string target_file = "target.csv";

  bool operator==(const Manifest&) const = default;
};

struct AuditBundle {
  ShadowMatrix matrix;
  TargetObservations target;
  Manifest manifest;

  bool operator==(const AuditBundle&) const = default;
};

struct PromptSpec {
  std::string class_name;
  std::string caption;
};

// "n: c". No case folding, trimming or punctuation changes.
inline std::string format_prompt(const PromptSpec& spec) {
  const bool blank = std::all_of(
      spec.class_name.begin(), spec.class_name.end(),
      [](unsigned char ch) { return std::isspace(ch) != 0; });
  if (blank) throw ValidationError("invalid prompt: empty class name");
  std::string out;
  out.reserve(spec.class_name.size() + 2 + spec.caption.size());
  out += spec.class_name;
  out += ": ";
  out += spec.caption;
  return out;
}

namespace ingest_internal {

inline Manifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open manifest");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError(path.string() + ": manifest must be a JSON object");
  }
  auto integer = [&](const char* key) -> long {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw ValidationError(path.string() + ": \"" + key +
                            "\" must be an integer");
    }
    return j[key].get<long>();
  };
  auto text = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw ValidationError(path.string() + ": \"" + key +
                            "\" must be a string");
    }
    return j[key].get<std::string>();
  };
  Manifest m;
  const long version = integer("version");
  if (version != kFormatVersion) {
    throw ValidationError(path.string() + ": unsupported version " +
                          std::to_string(version));
  }
  m.version = static_cast<int>(version);
  m.num_models = integer("num_models");
  m.num_examples = integer("num_examples");
  m.num_classes = integer("num_classes");
  if (m.num_models < 1) throw ValidationError(path.string() + ": num_models must be >= 1");
  if (m.num_examples < 1) throw ValidationError(path.string() + ": num_examples must be >= 1");
  if (m.num_classes < 2) throw ValidationError(path.string() + ": num_classes must be >= 2");
  m.confidence_file = text("confidence_file");
  m.membership_file = text("membership_file");
  m.target_file = text("target_file");
  return m;
}

inline bool parse_bit(const csv::Reader& reader, std::string_view field) {
  if (field == "0") return false;
  if (field == "1") return true;
  reader.fail("membership value must be 0 or 1, got \"" + std::string(field) +
              "\"");
}

inline double checked_confidence(const csv::Reader& reader,
                                 std::string_view field) {
  const double p = reader.parse_double(field, "confidence");
  if (p < 0.0 || p > 1.0) {
    reader.fail("confidence out of range: " + std::string(field));
  }
  return p;
}

}  // namespace ingest_internal

// Loads and fully validates a bundle. Confidences must lie in [0, 1]; the
// open-interval requirement is enforced later by clamping in the attack.
inline AuditBundle load_audit_bundle(const std::filesystem::path& manifest_path) {
  using ingest_internal::checked_confidence;
  using ingest_internal::parse_bit;
  AuditBundle bundle;
  bundle.manifest = ingest_internal::parse_manifest(manifest_path);
  const Manifest& m = bundle.manifest;
  const auto base = manifest_path.parent_path();
  const auto models = static_cast<std::size_t>(m.num_models);
  const auto examples = static_cast<std::size_t>(m.num_examples);

  auto resolve = [&](const std::string& name) {
    const auto p = base / name;
    if (!std::filesystem::exists(p)) {
      throw ValidationError(p.string() + ": missing file");
    }
    return p.string();
  };

  ShadowMatrix& matrix = bundle.matrix;
  matrix = ShadowMatrix::zeros(models, examples);
  std::vector<std::uint8_t> label_seen(examples, 0);
  {
    csv::Reader reader(resolve(m.confidence_file), kConfidenceHeader);
    std::vector<std::uint8_t> seen(models * examples, 0);
    std::vector<std::string_view> f;
    while (reader.next(f)) {
      const long model = reader.parse_int(f[0], "model_id");
      const long example = reader.parse_int(f[1], "example_id");
      const long label = reader.parse_int(f[2], "true_label");
      if (model < 0 || model >= m.num_models) reader.fail("model_id out of range");
      if (example < 0 || example >= m.num_examples) reader.fail("example_id out of range");
      if (label < 0 || label >= m.num_classes) reader.fail("true_label out of range");
      const double p = checked_confidence(reader, f[3]);
      const auto idx = matrix.offset(model, example);
      if (seen[idx]) reader.fail("duplicate (model_id, example_id) pair");
      seen[idx] = 1;
      if (label_seen[example] && matrix.true_labels[example] != label) {
        reader.fail("inconsistent true_label for example " + std::to_string(example));
      }
      label_seen[example] = 1;
      matrix.true_labels[example] = static_cast<int>(label);
      matrix.confidences[idx] = p;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw ValidationError(m.confidence_file +
                            ": incomplete confidence matrix");
    }
  }
  {
    csv::Reader reader(resolve(m.membership_file), kMembershipHeader);
    std::vector<std::uint8_t> seen(models * examples, 0);
    std::vector<std::string_view> f;
    while (reader.next(f)) {
      const long model = reader.parse_int(f[0], "model_id");
      const long example = reader.parse_int(f[1], "example_id");
      if (model < 0 || model >= m.num_models) reader.fail("model_id out of range");
      if (example < 0 || example >= m.num_examples) reader.fail("example_id out of range");
      const bool bit = parse_bit(reader, f[2]);
      const auto idx = matrix.offset(model, example);
      if (seen[idx]) reader.fail("duplicate (model_id, example_id) pair");
      seen[idx] = 1;
      matrix.membership[idx] = bit ? 1 : 0;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw ValidationError(m.membership_file +
                            ": incomplete membership matrix");
    }
  }
  {
    csv::Reader reader(resolve(m.target_file), kTargetHeader);
    std::vector<std::uint8_t> seen(examples, 0);
    std::vector<std::string_view> f;
    while (reader.next(f)) {
      TargetRow row;
      row.example_id = reader.parse_int(f[0], "example_id");
      const long label = reader.parse_int(f[1], "true_label");
      if (row.example_id < 0 || row.example_id >= m.num_examples) {
        reader.fail("example_id not in shadow index space");
      }
      if (label < 0 || label >= m.num_classes) reader.fail("true_label out of range");
      if (label != matrix.true_labels[row.example_id]) {
        reader.fail("true_label disagrees with confidence file");
      }
      row.true_label = static_cast<int>(label);
      row.confidence = checked_confidence(reader, f[2]);
      row.is_member = parse_bit(reader, f[3]);
      if (seen[row.example_id]) reader.fail("duplicate example_id");
      seen[row.example_id] = 1;
      bundle.target.push_back(row);
    }
    if (bundle.target.empty()) {
      throw ValidationError(m.target_file + ": no target observations");
    }
  }
  return bundle;
}

// Writes manifest.json and the three CSV files into `dir`, creating it if
// needed, and returns the manifest that was written.
inline Manifest write_audit_bundle(const AuditBundle& bundle,
                                   const std::filesystem::path& dir) {
  const ShadowMatrix& mx = bundle.matrix;
  if (mx.num_models < 1) throw ValidationError("cannot write bundle: num_models must be >= 1");
  if (mx.num_examples < 1) throw ValidationError("cannot write bundle: num_examples must be >= 1");
  if (mx.confidences.size() != mx.num_models * mx.num_examples ||
      mx.membership.size() != mx.confidences.size() ||
      mx.true_labels.size() != mx.num_examples) {
    throw ValidationError("cannot write bundle: inconsistent matrix shape");
  }
  if (bundle.manifest.num_classes < 2) {
    throw ValidationError("cannot write bundle: num_classes must be >= 2");
  }
  for (double p : mx.confidences) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("cannot write bundle: confidence out of range");
  }
  for (int y : mx.true_labels) {
    if (y < 0 || y >= bundle.manifest.num_classes) {
      throw ValidationError("cannot write bundle: true_label out of range");
    }
  }
  for (const auto& row : bundle.target) {
    if (row.example_id < 0 || row.example_id >= static_cast<long>(mx.num_examples)) {
      throw ValidationError("cannot write bundle: target example_id out of range");
    }
    if (!(row.confidence >= 0.0 && row.confidence <= 1.0)) {
      throw ValidationError("cannot write bundle: confidence out of range");
    }
  }

  Manifest m;
  m.num_models = static_cast<long>(mx.num_models);
  m.num_examples = static_cast<long>(mx.num_examples);
  m.num_classes = bundle.manifest.num_classes;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string() + ": cannot create directory: " + ec.message());

  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError((dir / name).string() + ": cannot open for writing");
    return out;
  };
  {
    auto out = open(m.confidence_file);
    out << kConfidenceHeader << '\n';
    for (std::size_t k = 0; k < mx.num_models; ++k) {
      for (std::size_t i = 0; i < mx.num_examples; ++i) {
        out << k << ',' << i << ',' << mx.true_labels[i] << ','
            << csv::format_double(mx.confidence(k, i)) << '\n';
      }
    }
    if (!out) throw IoError(m.confidence_file + ": write failed");
  }
  {
    auto out = open(m.membership_file);
    out << kMembershipHeader << '\n';
    for (std::size_t k = 0; k < mx.num_models; ++k) {
      for (std::size_t i = 0; i < mx.num_examples; ++i) {
        out << k << ',' << i << ',' << (mx.is_member(k, i) ? 1 : 0) << '\n';
      }
    }
    if (!out) throw IoError(m.membership_file + ": write failed");
  }
  {
    auto out = open(m.target_file);
    out << kTargetHeader << '\n';
    for (const auto& row : bundle.target) {
      out << row.example_id << ',' << row.true_label << ','
          << csv::format_double(row.confidence) << ',' << (row.is_member ? 1 : 0)
          << '\n';
    }
    if (!out) throw IoError(m.target_file + ": write failed");
  }
  {
    nlohmann::ordered_json j;
    j["version"] = m.version;
    j["num_models"] = m.num_models;
    j["num_examples"] = m.num_examples;
    j["num_classes"] = m.num_classes;
    j["confidence_file"] = m.confidence_file;
    j["membership_file"] = m.membership_file;
    j["target_file"] = m.target_file;
    auto out = open("manifest.json");
    out << j.dump() << '\n';
    if (!out) throw IoError("manifest.json: write failed");
  }
  return m;
}

}  // namespace tckr

#endif  // TCKR_INGEST_HPP_
