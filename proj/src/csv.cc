// Copyright 2026 The smallcell-vrm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vrm/csv.h"

#include <cmath>

#include <fmt/format.h>

namespace vrm {

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view schema, int version,
                     const std::vector<std::string>& columns)
    : out_(out) {
  out_ << "# schema: " << schema << " v" << version << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i ? "," : "") << columns[i];
  }
  out_ << '\n';
}

}  // namespace vrm
