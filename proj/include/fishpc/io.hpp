#pragma once

// File formats: mixture specs as JSON, datasets as CSV with header
// x1,...,xd,label (1-based labels), plain matrices as CSV.

#include "fishpc/mixture.hpp"

#include <fstream>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace fishpc {

nlohmann::json to_json(const MixtureSpec& spec);
MixtureSpec mixture_from_json(const nlohmann::json& j);

MixtureSpec read_mixture(const std::string& path);
void write_mixture(const std::string& path, const MixtureSpec& spec);

void write_dataset(std::ostream& os, const LabeledDataset& ds);
LabeledDataset read_dataset(std::istream& is);
void write_dataset(const std::string& path, const LabeledDataset& ds);
LabeledDataset read_dataset(const std::string& path);

/// Matrix with a header row of column names (c1.. when names are empty).
void write_matrix(const std::string& path, const Matrix& m, const std::vector<std::string>& names = {});

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Opens path for writing, throwing IoError on failure.
std::ofstream open_output(const std::string& path);

} // namespace fishpc
