// Copyright 2026 The Spirel Authors
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

#include "spirel/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "spirel/io_util.hpp"

namespace spirel {

void write_model_checkpoint(const std::string& path,
                            const LatentModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_model_checkpoint: cannot open " + path);
  }
  io::write_i64(out, model.n());
  io::write_i64(out, model.d());
  io::write_matrix_body(out, model.poi_factors);
  io::write_i64(out, model.adam.step);
  io::write_matrix_body(out, model.adam.first_moment);
  io::write_matrix_body(out, model.adam.second_moment);
  if (!out) {
    throw std::runtime_error("write_model_checkpoint: write failed for " +
                             path);
  }
}

LatentModel read_model_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_model_checkpoint: cannot open " + path);
  }
  const std::int64_t n = io::read_i64(in);
  const std::int64_t d = io::read_i64(in);
  if (n < 1 || d < 1 || n > 100000 || d > 100000) {
    throw std::runtime_error("read_model_checkpoint: implausible dimensions");
  }
  LatentModel model;
  model.poi_factors.resize(n, d);
  io::read_matrix_body(in, model.poi_factors);
  model.adam.step = io::read_i64(in);
  model.adam.first_moment.resize(n, d);
  io::read_matrix_body(in, model.adam.first_moment);
  model.adam.second_moment.resize(n, d);
  io::read_matrix_body(in, model.adam.second_moment);
  if (!in) {
    throw std::runtime_error("read_model_checkpoint: truncated file " + path);
  }
  return model;
}

}  // namespace spirel
