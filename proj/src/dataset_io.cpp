#include "ellwishart/dataset_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ellw {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, long record) {
  const std::string t = trim(field);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw dataset_format_error("record " + std::to_string(record) +
                               ": field '" + field + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<MatrixRecord> read_matrix_dataset(const std::string& path, int p,
                                              bool labeled) {
  if (p < 1) throw parameter_error("read_matrix_dataset: p must be >= 1");
  std::ifstream in(path);
  if (!in) throw dataset_format_error("cannot open '" + path + "'");
  const std::size_t want = static_cast<std::size_t>(p) * p + (labeled ? 1 : 0);
  std::vector<MatrixRecord> out;
  std::string line;
  long record = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> fields = split_fields(t);
    if (fields.size() != want) {
      throw dataset_format_error("record " + std::to_string(record) + ": expected " +
                                 std::to_string(want) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    MatrixRecord rec;
    std::size_t off = 0;
    if (labeled) {
      rec.label = trim(fields[0]);
      off = 1;
    }
    VectorXd v(p * p);
    for (int i = 0; i < p * p; ++i) {
      v(i) = parse_number(fields[off + i], record);
    }
    rec.matrix = unvec(v, p, p);
    try {
      SpdMatrix check(rec.matrix, 1e-8);
    } catch (const not_positive_definite& e) {
      throw dataset_spd_error("record " + std::to_string(record) + ": " + e.what(),
                              record);
    }
    out.push_back(std::move(rec));
    ++record;
  }
  return out;
}

void write_matrix_dataset(const std::string& path,
                          const std::vector<MatrixXd>& matrices,
                          const std::vector<std::string>* labels,
                          const std::string& comment) {
  if (labels && labels->size() != matrices.size()) {
    throw dimension_error("write_matrix_dataset: label count mismatch");
  }
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw dataset_format_error("cannot write '" + path + "'");
  if (!comment.empty()) out << "# " << comment << "\n";
  char buf[64];
  for (std::size_t r = 0; r < matrices.size(); ++r) {
    const VectorXd v = vec(matrices[r]);
    if (labels) out << (*labels)[r] << ",";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v(i));
      out << buf;
      if (i + 1 < v.size()) out << ",";
    }
    out << "\n";
  }
  if (!out) throw dataset_format_error("write to '" + path + "' failed");
}

}  // namespace ellw
