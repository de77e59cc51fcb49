// Copyright 2026 The repgraph Authors
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

// File helpers shared by the loaders. Not installed.

#ifndef REPGRAPH_SRC_IO_UTIL_HPP_
#define REPGRAPH_SRC_IO_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "repgraph/error.hpp"

namespace repgraph::detail {

template <typename ErrorT>
std::string read_text_file(const std::filesystem::path& path,
                           std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ErrorT(std::string(what) + ": cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace repgraph::detail

#endif  // REPGRAPH_SRC_IO_UTIL_HPP_
