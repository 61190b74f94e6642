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

#ifndef VRM_CSV_H_
#define VRM_CSV_H_

#include <concepts>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace vrm {

// Shortest representation that round-trips; identical across runs.
std::string FormatNumber(double value);

// Writes `# schema: <name> v<version>`, then the header, then rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view schema, int version,
            const std::vector<std::string>& columns);

  template <typename... Fields>
  void Row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << Format(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string Format(double v) { return FormatNumber(v); }
  static std::string Format(std::integral auto v) { return std::to_string(v); }
  static std::string Format(std::string_view v) { return std::string(v); }
  static std::string Format(const char* v) { return std::string(v); }
  static std::string Format(const std::string& v) { return v; }

  std::ostream& out_;
};

}  // namespace vrm

#endif  // VRM_CSV_H_
