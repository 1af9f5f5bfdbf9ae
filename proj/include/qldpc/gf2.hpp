#pragma once

// Dense bit-packed GF(2) vectors and matrices. Sized for code construction
// and OSD elimination (a few hundred rows, a few thousand columns), not for
// the sparse decoding graphs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qldpc {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::size_t i, bool v) {
    uint64_t mask = uint64_t(1) << (i & 63);
    if (v) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= uint64_t(1) << (i & 63); }

  void xor_with(const BitVec& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  }

  std::size_t popcount() const {
    std::size_t total = 0;
    for (uint64_t w : words_) total += static_cast<std::size_t>(__builtin_popcountll(w));
    return total;
  }

  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }

  void clear() {
    for (uint64_t& w : words_) w = 0;
  }

  bool operator==(const BitVec& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
  }

  const std::vector<uint64_t>& words() const { return words_; }

 private:
  std::size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_words_((cols + 63) / 64),
        words_(rows * row_words_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (words_[r * row_words_ + (c >> 6)] >> (c & 63)) & 1;
  }

  void set(std::size_t r, std::size_t c, bool v) {
    uint64_t mask = uint64_t(1) << (c & 63);
    uint64_t& w = words_[r * row_words_ + (c >> 6)];
    if (v) {
      w |= mask;
    } else {
      w &= ~mask;
    }
  }

  void flip(std::size_t r, std::size_t c) {
    words_[r * row_words_ + (c >> 6)] ^= uint64_t(1) << (c & 63);
  }

  // row[dst] ^= row[src]
  void row_xor(std::size_t dst, std::size_t src) {
    uint64_t* d = &words_[dst * row_words_];
    const uint64_t* s = &words_[src * row_words_];
    for (std::size_t w = 0; w < row_words_; ++w) d[w] ^= s[w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < row_words_; ++w)
      std::swap(words_[a * row_words_ + w], words_[b * row_words_ + w]);
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (get(r, c)) t.set(c, r, true);
    return t;
  }

  BitMatrix operator*(const BitMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("BitMatrix: shape mismatch");
    BitMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      uint64_t* dst = &out.words_[r * out.row_words_];
      for (std::size_t k = 0; k < cols_; ++k) {
        if (!get(r, k)) continue;
        const uint64_t* src = &other.words_[k * other.row_words_];
        for (std::size_t w = 0; w < out.row_words_; ++w) dst[w] ^= src[w];
      }
    }
    return out;
  }

  BitVec operator*(const BitVec& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("BitMatrix: vector length mismatch");
    BitVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const uint64_t* p = &words_[r * row_words_];
      std::size_t ones = 0;
      for (std::size_t w = 0; w < row_words_; ++w)
        ones += static_cast<std::size_t>(__builtin_popcountll(p[w] & v.words()[w]));
      out.set(r, ones & 1);
    }
    return out;
  }

  bool is_zero() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  bool operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && words_ == other.words_;
  }

  std::size_t row_weight(std::size_t r) const {
    const uint64_t* p = &words_[r * row_words_];
    std::size_t total = 0;
    for (std::size_t w = 0; w < row_words_; ++w)
      total += static_cast<std::size_t>(__builtin_popcountll(p[w]));
    return total;
  }

  BitVec row(std::size_t r) const {
    BitVec v(cols_);
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) v.set(c, true);
    return v;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t row_words_ = 0;
  std::vector<uint64_t> words_;
};

// Gaussian elimination with pivots scanned left-to-right, first nonzero row.
// Deterministic so OSD information sets are reproducible.
inline std::size_t gf2_rank(BitMatrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && !m.get(pivot, col)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != rank && m.get(r, col)) m.row_xor(r, rank);
    ++rank;
  }
  return rank;
}

// Solve mat * v = rhs. Returns one solution (free variables set to 0), or
// nullopt when rhs lies outside the column space.
inline std::optional<BitVec> gf2_solve(BitMatrix mat, BitVec rhs) {
  if (rhs.size() != mat.rows()) throw std::invalid_argument("gf2_solve: rhs length");
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < mat.cols() && rank < mat.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < mat.rows() && !mat.get(pivot, col)) ++pivot;
    if (pivot == mat.rows()) continue;
    if (pivot != rank) {
      mat.swap_rows(rank, pivot);
      bool a = rhs.get(rank);
      rhs.set(rank, rhs.get(pivot));
      rhs.set(pivot, a);
    }
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      if (r != rank && mat.get(r, col)) {
        mat.row_xor(r, rank);
        if (rhs.get(rank)) rhs.flip(r);
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < mat.rows(); ++r)
    if (rhs.get(r)) return std::nullopt;
  BitVec v(mat.cols());
  for (std::size_t i = 0; i < rank; ++i) v.set(pivot_col[i], rhs.get(i));
  return v;
}

// Basis of { v : mat * v = 0 }.
inline std::vector<BitVec> gf2_nullspace(BitMatrix mat) {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(mat.cols(), false);
  for (std::size_t col = 0; col < mat.cols() && rank < mat.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < mat.rows() && !mat.get(pivot, col)) ++pivot;
    if (pivot == mat.rows()) continue;
    mat.swap_rows(rank, pivot);
    for (std::size_t r = 0; r < mat.rows(); ++r)
      if (r != rank && mat.get(r, col)) mat.row_xor(r, rank);
    pivot_col.push_back(col);
    is_pivot[col] = true;
    ++rank;
  }
  std::vector<BitVec> basis;
  for (std::size_t free_col = 0; free_col < mat.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    BitVec v(mat.cols());
    v.set(free_col, true);
    for (std::size_t i = 0; i < rank; ++i)
      if (mat.get(i, free_col)) v.set(pivot_col[i], true);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace qldpc
