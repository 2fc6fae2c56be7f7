#pragma once

#include <cstddef>
#include <vector>

namespace dtdd {

// Dense square matrix of doubles, row = transmitting node, column = receiving node.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }

  double& at(int j, int k) { return a_[static_cast<std::size_t>(j) * n_ + k]; }
  double at(int j, int k) const { return a_[static_cast<std::size_t>(j) * n_ + k]; }

  const std::vector<double>& data() const { return a_; }

  friend bool operator==(const SquareMatrix& x, const SquareMatrix& y) {
    return x.n_ == y.n_ && x.a_ == y.a_;
  }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

}  // namespace dtdd
