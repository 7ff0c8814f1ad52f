// Copyright 2026 The wqrbf Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQRBF_DATASET_HPP
#define WQRBF_DATASET_HPP

// Labeled-state dataset files.
//
//   # wqrbf-dataset v1 seed=<seed>
//   <label>,<concurrence>,<re00>,<im00>,<re01>,<im01>,...,<re33>,<im33>
//
// One record per line, entries row-major.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wqrbf/errors.hpp"
#include "wqrbf/qstate.hpp"
#include "wqrbf/text.hpp"

namespace wqrbf {

inline constexpr std::string_view kDatasetMagic = "# wqrbf-dataset v1";

struct Dataset {
  std::uint64_t seed = 0;
  std::vector<LabeledState> records;
};

inline void write_dataset(std::ostream& os, std::span<const LabeledState> records,
                          std::uint64_t seed) {
  os << kDatasetMagic << " seed=" << seed << '\n';
  std::string line;
  for (const auto& rec : records) {
    line.assign(label_name(rec.label));
    line += ',';
    line += text::fmt(rec.concurrence);
    const Matrix4c& m = rec.state.matrix();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        line += ',';
        line += text::fmt(m(r, c).real());
        line += ',';
        line += text::fmt(m(r, c).imag());
      }
    }
    line += '\n';
    os << line;
  }
}

inline Dataset read_dataset(std::istream& is) {
  Dataset ds;
  std::string line;
  if (!std::getline(is, line)) throw FormatError("dataset: missing header line");
  {
    const std::string_view head = text::trim(line);
    const std::string_view seed_key = " seed=";
    if (head.substr(0, kDatasetMagic.size()) != kDatasetMagic) {
      throw FormatError("dataset line 1: not a wqrbf-dataset v1 header");
    }
    const std::string_view rest = head.substr(kDatasetMagic.size());
    std::int64_t seed = 0;
    if (rest.substr(0, seed_key.size()) != seed_key ||
        !text::parse(rest.substr(seed_key.size()), seed)) {
      throw FormatError("dataset line 1: field 'seed' is malformed");
    }
    ds.seed = static_cast<std::uint64_t>(seed);
  }

  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string_view body = text::trim(line);
    if (body.empty()) continue;
    const auto where = "dataset line " + std::to_string(lineno) + ": ";
    const auto fields = text::split(body, ',');
    if (fields.size() != 34) {
      throw FormatError(where + "expected 34 fields, found " + std::to_string(fields.size()));
    }
    LabeledState rec;
    try {
      rec.label = parse_label(fields[0]);
    } catch (const FormatError& e) {
      throw FormatError(where + "field 'label': " + e.what());
    }
    if (!text::parse(fields[1], rec.concurrence)) {
      throw FormatError(where + "field 'concurrence' is not a number");
    }
    Matrix4c m;
    for (int i = 0; i < 16; ++i) {
      double re = 0, im = 0;
      if (!text::parse(fields[2 + 2 * i], re) || !text::parse(fields[3 + 2 * i], im)) {
        throw FormatError(where + "field 'entry " + std::to_string(i) + "' is not a number");
      }
      m(i / 4, i % 4) = Complex(re, im);
    }
    try {
      rec.state = validate(m);
    } catch (const StateError& e) {
      throw FormatError(where + e.what());
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

inline void save_dataset(const std::string& path, std::span<const LabeledState> records,
                         std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_dataset(os, records, seed);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_dataset(is);
}

/// Index of the first record whose stored concurrence or label disagrees with
/// recomputation, or records.size() if all agree.
inline std::size_t first_inconsistent(std::span<const LabeledState> records,
                                      double tol = 1e-9) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double c = concurrence(records[i].state);
    if (std::abs(c - records[i].concurrence) > tol) return i;
    if (label_for(c) != records[i].label) return i;
  }
  return records.size();
}

}  // namespace wqrbf

#endif  // WQRBF_DATASET_HPP
