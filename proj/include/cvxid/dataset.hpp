#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cvxid {

// Ordered regression sample of y_{k+1} = theta*^T x_k + w_{k+1}: row k holds
// the regressor x_k and the response y_{k+1}.
class Dataset {
 public:
  Dataset() = default;
  Dataset(int dim, std::vector<double> xs_rowmajor, std::vector<double> ys);
  explicit Dataset(int dim) : d_(dim) {}

  int dim() const { return d_; }
  std::int64_t rows() const { return static_cast<std::int64_t>(ys_.size()); }
  bool empty() const { return ys_.empty(); }

  std::span<const double> x(std::int64_t k) const {
    return {xs_.data() + k * d_, static_cast<std::size_t>(d_)};
  }
  double y(std::int64_t k) const { return ys_[k]; }

  void push_row(std::span<const double> x, double y);
  void set_row(std::int64_t k, std::span<const double> x, double y);

  Dataset slice(std::int64_t begin, std::int64_t count) const;
  Dataset head(std::int64_t n) const { return slice(0, n); }

  const std::vector<double>& xs_flat() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  bool operator==(const Dataset&) const = default;

 private:
  int d_ = 0;
  std::vector<double> xs_;  // rows * dim, row-major
  std::vector<double> ys_;
};

// CSV with header "k,x1,...,xd,y"; k is the 1-based row index. Doubles use
// shortest round-trip decimal notation with '.' separator, rows newline
// terminated.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

}  // namespace cvxid
