#ifndef QPROG_ELEMENT_SET_HPP
#define QPROG_ELEMENT_SET_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qprog/field.hpp"

namespace qprog {

/// A subset of F_q as a membership bitmap indexed by element code.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::uint32_t q) : bits_(q, 0) {}

  static ElementSet full(std::uint32_t q) {
    ElementSet s(q);
    std::fill(s.bits_.begin(), s.bits_.end(), 1);
    s.size_ = q;
    return s;
  }

  std::uint32_t universe() const { return static_cast<std::uint32_t>(bits_.size()); }
  std::uint32_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool contains(FieldElement x) const { return bits_[x.code] != 0; }
  void insert(FieldElement x) {
    if (!bits_[x.code]) {
      bits_[x.code] = 1;
      ++size_;
    }
  }
  void erase(FieldElement x) {
    if (bits_[x.code]) {
      bits_[x.code] = 0;
      --size_;
    }
  }

  /// Member codes in ascending order.
  std::vector<std::uint32_t> codes() const {
    std::vector<std::uint32_t> out;
    out.reserve(size_);
    for (std::uint32_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(i);
    return out;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::uint32_t size_ = 0;
};

}  // namespace qprog

#endif  // QPROG_ELEMENT_SET_HPP
