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

#ifndef SPIREL_CHECKPOINT_HPP_
#define SPIREL_CHECKPOINT_HPP_

#include <string>

#include "spirel/trainer.hpp"

// Model checkpoint: the square-matrix dump layout extended with the latent
// dimension and the optimizer moments. All integers and floats are
// little-endian 64-bit, matrices row-major:
//   n, d, V (n*d), adam step, first moment (n*d), second moment (n*d)

namespace spirel {

void write_model_checkpoint(const std::string& path, const LatentModel& model);
LatentModel read_model_checkpoint(const std::string& path);

}  // namespace spirel

#endif  // SPIREL_CHECKPOINT_HPP_
