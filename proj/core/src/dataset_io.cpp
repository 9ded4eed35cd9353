#include "ossl/dataset_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double to_double(const std::string& s, const std::filesystem::path& path, int lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a number '" + s + "'");
  }
}

bool is_numeric_line(const std::string& line) {
  const auto cells = split_csv(line);
  if (cells.empty()) return false;
  try {
    std::size_t used = 0;
    std::stod(cells.front(), &used);
    return used == cells.front().size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

void write_polar_csv(const std::filesystem::path& path, std::span<const PolarSample> samples) {
  auto out = open_out(path);
  out << "r,theta,x,y,label,origin\n";
  for (const auto& s : samples) {
    out << s.r << ',' << s.theta << ',' << s.x() << ',' << s.y() << ',';
    if (s.label) out << (*s.label == PolarClass::kA ? "A" : "B");
    out << ',' << to_string(s.origin) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<PolarSample> read_polar_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<PolarSample> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 6) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 6 columns");
    }
    PolarSample s;
    s.r = to_double(cells[0], path, lineno);
    s.theta = to_double(cells[1], path, lineno);
    if (cells[4] == "A") s.label = PolarClass::kA;
    else if (cells[4] == "B") s.label = PolarClass::kB;
    else if (!cells[4].empty()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad label");
    try {
      s.origin = origin_from_string(cells[5]);
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    samples.push_back(s);
  }
  return samples;
}

void write_image_csv(const std::filesystem::path& path, std::span<const ToyImage> images) {
  auto out = open_out(path);
  const ImageDims dims = images.empty() ? ImageDims{} : images.front().dims;
  out << "c,h,w\n" << dims.channels << ',' << dims.height << ',' << dims.width << '\n';
  out << "label";
  for (std::size_t i = 0; i < dims.size(); ++i) out << ",p" << i;
  out << '\n';
  for (const auto& im : images) {
    if (!(im.dims == dims)) throw InputShapeError("write_image_csv: images with mixed dimensions");
    if (im.label) out << *im.label;
    for (double p : im.pixels) out << ',' << p;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<ToyImage> read_image_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || !std::getline(in, line)) throw IoError(path.string() + ": missing dims header");
  const auto d = split_csv(line);
  if (d.size() != 3) throw IoError(path.string() + ":2: expected c,h,w");
  ImageDims dims{static_cast<int>(to_double(d[0], path, 2)), static_cast<int>(to_double(d[1], path, 2)),
                 static_cast<int>(to_double(d[2], path, 2))};
  std::getline(in, line);
  std::vector<ToyImage> images;
  int lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != dims.size() + 1) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(dims.size() + 1) +
                    " columns");
    }
    ToyImage im(dims);
    if (!cells[0].empty()) im.label = static_cast<int>(to_double(cells[0], path, lineno));
    for (std::size_t i = 0; i < dims.size(); ++i) im.pixels[i] = to_double(cells[i + 1], path, lineno);
    images.push_back(std::move(im));
  }
  return images;
}

ProbabilityTable read_probability_csv(const std::filesystem::path& path, bool labeled) {
  auto in = open_in(path);
  ProbabilityTable table;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && !is_numeric_line(line)) continue;
    const auto cells = split_csv(line);
    std::size_t first = 0;
    if (labeled) {
      if (cells.size() < 2) throw IoError(path.string() + ":" + std::to_string(lineno) + ": need label and probabilities");
      const double lab = to_double(cells[0], path, lineno);
      if (lab < 0 || lab != static_cast<int>(lab)) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": label must be a class index");
      }
      table.labels.push_back(static_cast<int>(lab));
      first = 1;
    }
    std::vector<double> row;
    for (std::size_t i = first; i < cells.size(); ++i) row.push_back(to_double(cells[i], path, lineno));
    if (row.empty()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": empty row");
    if (width == 0) width = row.size();
    if (row.size() != width) throw IoError(path.string() + ":" + std::to_string(lineno) + ": ragged row");
    table.probs.push_back(std::move(row));
  }
  return table;
}

void write_probability_csv(const std::filesystem::path& path, const PointSet& probs, std::span<const int> labels) {
  if (!labels.empty() && labels.size() != probs.size()) {
    throw InputShapeError("write_probability_csv: labels and rows differ in length");
  }
  auto out = open_out(path);
  const std::size_t k = probs.empty() ? 0 : probs.front().size();
  if (!labels.empty()) out << "label,";
  for (std::size_t j = 0; j < k; ++j) out << (j ? ",p" : "p") << j;
  out << '\n';
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!labels.empty()) out << labels[i] << ',';
    for (std::size_t j = 0; j < probs[i].size(); ++j) out << (j ? "," : "") << probs[i][j];
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ossl
