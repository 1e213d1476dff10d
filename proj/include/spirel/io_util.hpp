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

#ifndef SPIREL_IO_UTIL_HPP_
#define SPIREL_IO_UTIL_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include <Eigen/Dense>

// Little-endian binary primitives for the checkpoint formats.

namespace spirel::io {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

inline std::uint64_t to_little(std::uint64_t value) {
  if constexpr (std::endian::native == std::endian::big) {
    value = __builtin_bswap64(value);
  }
  return value;
}

inline void write_i64(std::ostream& out, std::int64_t value) {
  const std::uint64_t wire = to_little(static_cast<std::uint64_t>(value));
  out.write(reinterpret_cast<const char*>(&wire), sizeof(wire));
}

inline std::int64_t read_i64(std::istream& in) {
  std::uint64_t wire = 0;
  in.read(reinterpret_cast<char*>(&wire), sizeof(wire));
  return static_cast<std::int64_t>(to_little(wire));
}

inline void write_f64(std::ostream& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  bits = to_little(bits);
  out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
}

inline double read_f64(std::istream& in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
  bits = to_little(bits);
  double value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

// Row-major body of a matrix whose dimensions were already written.
inline void write_matrix_body(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      write_f64(out, m(i, j));
    }
  }
}

inline void read_matrix_body(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = read_f64(in);
    }
  }
}

}  // namespace spirel::io

#endif  // SPIREL_IO_UTIL_HPP_
