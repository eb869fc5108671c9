#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "motionkit/flowmatch/kernel.hpp"

namespace motionkit::flow {

// Little-endian float32, row-major, no header.
inline std::string tensor_to_f32_bytes(const Tensor& x) {
  std::string out;
  out.reserve(static_cast<std::size_t>(x.size()) * 4);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x(r, c)));
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
    }
  }
  return out;
}

inline Tensor tensor_from_f32_bytes(const std::string& bytes, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 0 || cols < 0 || bytes.size() != static_cast<std::size_t>(rows * cols) * 4) {
    throw ParseError("tensor file size does not match shape " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  Tensor x(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[k++])) << (8 * b);
      x(r, c) = std::bit_cast<float>(bits);
    }
  }
  return x;
}

inline void write_tensor_f32(const std::string& path, const Tensor& x) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  const std::string bytes = tensor_to_f32_bytes(x);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

inline Tensor read_tensor_f32(const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return tensor_from_f32_bytes(bytes, rows, cols);
}

}  // namespace motionkit::flow
