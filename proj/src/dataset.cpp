#include "cvxid/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cvxid/errors.hpp"

namespace cvxid {

Dataset::Dataset(int dim, std::vector<double> xs_rowmajor, std::vector<double> ys)
    : d_(dim), xs_(std::move(xs_rowmajor)), ys_(std::move(ys)) {
  if (d_ <= 0) throw ArgumentError("dataset dimension must be positive");
  if (xs_.size() != ys_.size() * static_cast<std::size_t>(d_)) {
    throw ArgumentError("regressor storage does not match rows * dim");
  }
}

void Dataset::push_row(std::span<const double> x, double y) {
  if (d_ == 0) d_ = static_cast<int>(x.size());
  if (static_cast<int>(x.size()) != d_) {
    throw ArgumentError("regressor length does not match dataset dimension");
  }
  xs_.insert(xs_.end(), x.begin(), x.end());
  ys_.push_back(y);
}

void Dataset::set_row(std::int64_t k, std::span<const double> x, double y) {
  if (k < 0 || k >= rows()) throw ArgumentError("row index out of range");
  if (static_cast<int>(x.size()) != d_) {
    throw ArgumentError("regressor length does not match dataset dimension");
  }
  std::copy(x.begin(), x.end(), xs_.begin() + k * d_);
  ys_[k] = y;
}

Dataset Dataset::slice(std::int64_t begin, std::int64_t count) const {
  if (begin < 0 || count < 0 || begin + count > rows()) {
    throw ArgumentError("dataset slice out of range");
  }
  Dataset out(d_);
  out.xs_.assign(xs_.begin() + begin * d_, xs_.begin() + (begin + count) * d_);
  out.ys_.assign(ys_.begin() + begin, ys_.begin() + begin + count);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "k";
  for (int j = 1; j <= data.dim(); ++j) out += ",x" + std::to_string(j);
  out += ",y\n";
  for (std::int64_t k = 0; k < data.rows(); ++k) {
    out += std::to_string(k + 1);
    for (double v : data.x(k)) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += format_double(data.y(k));
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_field(const std::string& field, std::int64_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw DataError("bad numeric field \"" + field + "\" on CSV line " +
                    std::to_string(line_no));
  }
  return value;
}

}  // namespace

Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_line(line);
  if (header.size() < 3 || header.front() != "k" || header.back() != "y") {
    throw DataError("dataset CSV header must be k,x1,...,xd,y");
  }
  const int d = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < d; ++j) {
    if (header[j + 1] != "x" + std::to_string(j + 1)) {
      throw DataError("dataset CSV header must be k,x1,...,xd,y");
    }
  }

  Dataset data(d);
  std::vector<double> x(d);
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (static_cast<int>(fields.size()) != d + 2) {
      throw DataError("wrong field count on CSV line " + std::to_string(line_no));
    }
    for (int j = 0; j < d; ++j) x[j] = parse_field(fields[j + 1], line_no);
    data.push_row(x, parse_field(fields.back(), line_no));
  }
  if (data.empty()) throw DataError("dataset CSV has no rows");
  return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  const std::string text = dataset_to_csv(data);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for \"" + path + "\"");
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_csv(buf.str());
}

}  // namespace cvxid
