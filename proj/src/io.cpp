#include "fishpc/io.hpp"

#include "fishpc/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fishpc {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

json to_json(const MixtureSpec& spec) {
  json j;
  j["d"] = spec.d;
  j["k"] = spec.k;
  j["means"] = json::array();
  for (const Vector& mu : spec.means) j["means"].push_back(std::vector<double>(mu.data(), mu.data() + mu.size()));
  j["covariances"] = json::array();
  for (const Matrix& c : spec.covariances) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      const Vector r = c.row(i).transpose();
      rows.push_back(std::vector<double>(r.data(), r.data() + r.size()));
    }
    j["covariances"].push_back(rows);
  }
  return j;
}

MixtureSpec mixture_from_json(const json& j) {
  MixtureSpec spec;
  try {
    spec.d = j.at("d").get<int>();
    spec.k = j.at("k").get<int>();
    for (const auto& m : j.at("means")) {
      const auto v = m.get<std::vector<double>>();
      spec.means.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    for (const auto& c : j.at("covariances")) {
      const auto rows = c.get<std::vector<std::vector<double>>>();
      Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != m.cols()) throw ShapeError("ragged covariance matrix");
        for (std::size_t jj = 0; jj < rows[i].size(); ++jj)
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) = rows[i][jj];
      }
      spec.covariances.push_back(m);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed mixture spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

MixtureSpec read_mixture(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return mixture_from_json(j);
}

void write_mixture(const std::string& path, const MixtureSpec& spec) {
  auto os = open_output(path);
  os << to_json(spec).dump(2) << '\n';
}

void write_dataset(std::ostream& os, const LabeledDataset& ds) {
  for (Eigen::Index j = 0; j < ds.d(); ++j) os << 'x' << (j + 1) << ',';
  os << "label\n";
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d(); ++j) os << format_double(ds.data(i, j)) << ',';
    os << (ds.labels[static_cast<std::size_t>(i)] + 1) << '\n';
  }
}

namespace {

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

} // namespace

LabeledDataset read_dataset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("dataset is empty");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "label") throw ConfigError("dataset header must be x1,...,xd,label");
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j)
    if (header[j] != "x" + std::to_string(j + 1)) throw ConfigError("unexpected column '" + header[j] + "'");

  std::vector<double> values;
  Labels labels;
  std::size_t lineno = 1;
  int max_label = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != d + 1) throw ConfigError("line " + std::to_string(lineno) + ": expected " + std::to_string(d + 1) + " fields");
    for (std::size_t j = 0; j < d; ++j) values.push_back(parse_double(cells[j], lineno));
    const double lab = parse_double(cells[d], lineno);
    if (lab < 1 || lab != static_cast<int>(lab)) throw ConfigError("line " + std::to_string(lineno) + ": label must be a positive integer");
    labels.push_back(static_cast<int>(lab) - 1);
    max_label = std::max(max_label, static_cast<int>(lab));
  }

  LabeledDataset ds;
  ds.k = max_label;
  ds.labels = std::move(labels);
  const auto n = static_cast<Eigen::Index>(ds.labels.size());
  ds.data = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, static_cast<Eigen::Index>(d));
  return ds;
}

void write_dataset(const std::string& path, const LabeledDataset& ds) {
  auto os = open_output(path);
  write_dataset(os, ds);
}

LabeledDataset read_dataset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_dataset(is);
}

void write_matrix(const std::string& path, const Matrix& m, const std::vector<std::string>& names) {
  auto os = open_output(path);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) os << ',';
    if (static_cast<std::size_t>(j) < names.size())
      os << names[static_cast<std::size_t>(j)];
    else
      os << 'c' << (j + 1);
  }
  os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

} // namespace fishpc
