#pragma once

// Boolean matrices stored as row-major bitvectors. Row width is padded to
// 8, 16, 32, or a multiple of 64 bits; padding bits are always zero. The
// product routine OR-accumulates whole rows so the inner loop runs on
// machine words.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "spanner/core.hpp"

namespace spanner {

class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(uint32_t rows, uint32_t cols)
      : rows_(rows), cols_(cols), stride_(stride_bytes_for(cols)) {
    bits_.assign(size_t(rows_) * stride_, 0);
  }

  static uint32_t stride_bytes_for(uint32_t cols) {
    if (cols <= 8) return 1;
    if (cols <= 16) return 2;
    if (cols <= 32) return 4;
    return ((cols + 63) / 64) * 8;
  }

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  uint32_t stride_bytes() const { return stride_; }
  size_t byte_size() const { return bits_.size(); }

  bool test(uint32_t r, uint32_t c) const {
    return (bits_[size_t(r) * stride_ + (c >> 3)] >> (c & 7)) & 1u;
  }
  void set(uint32_t r, uint32_t c) {
    bits_[size_t(r) * stride_ + (c >> 3)] |= uint8_t(1u << (c & 7));
  }

  const uint8_t* row(uint32_t r) const { return bits_.data() + size_t(r) * stride_; }
  uint8_t* row(uint32_t r) { return bits_.data() + size_t(r) * stride_; }

  static void or_row(uint8_t* dst, const uint8_t* src, uint32_t stride) {
    uint32_t i = 0;
    for (; i + 8 <= stride; i += 8) {
      uint64_t a, b;
      std::memcpy(&a, dst + i, 8);
      std::memcpy(&b, src + i, 8);
      a |= b;
      std::memcpy(dst + i, &a, 8);
    }
    for (; i < stride; ++i) dst[i] |= src[i];
  }

  bool operator==(const BoolMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
  }

  static BoolMatrix identity(uint32_t n) {
    BoolMatrix m(n, n);
    for (uint32_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

 private:
  uint32_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<uint8_t> bits_;
};

inline BoolMatrix bool_matrix_multiply(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("bool_matrix_multiply: dimension mismatch (" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                ")");
  }
  BoolMatrix out(a.rows(), b.cols());
  for (uint32_t i = 0; i < a.rows(); ++i) {
    const uint8_t* arow = a.row(i);
    uint8_t* orow = out.row(i);
    for (uint32_t byte = 0; byte < a.stride_bytes(); ++byte) {
      uint8_t bits = arow[byte];
      while (bits) {
        uint32_t k = byte * 8 + static_cast<uint32_t>(std::countr_zero(uint32_t(bits)));
        bits &= static_cast<uint8_t>(bits - 1);
        BoolMatrix::or_row(orow, b.row(k), b.stride_bytes());
      }
    }
  }
  return out;
}

}  // namespace spanner
