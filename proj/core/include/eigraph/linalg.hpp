#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace eigraph {

// Dense row-major float64 matrix. All models and bases are desk scale, so a
// plain contiguous buffer with deterministic loop order is all we need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// c = a * b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// c = a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix hconcat(const Matrix& a, const Matrix& b);

void add_inplace(Matrix& a, const Matrix& b);
void scale_inplace(Matrix& a, double s);
Matrix relu(const Matrix& a);
// Row-wise softmax; each output row sums to 1.
Matrix softmax_rows(const Matrix& a);

// Rows scaled to unit Euclidean length; all-zero rows are left untouched.
Matrix row_normalize(const Matrix& a);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& a);

// Vector helpers shared by the eigensolvers.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);
void scale(std::vector<double>& v, double s);

}  // namespace eigraph
