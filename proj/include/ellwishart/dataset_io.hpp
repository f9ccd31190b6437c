#pragma once

#include <string>
#include <vector>

#include "ellwishart/linalg.hpp"

namespace ellw {

/// The on-disk matrix dataset format: one record per line, comma-separated,
/// p^2 numeric fields holding the column-major vec of a p x p SPD matrix
/// ('.' decimal separator, scientific notation accepted). Lines starting
/// with '#' are comments. With labels enabled, the first field of each
/// record is the class label.
struct MatrixRecord {
  std::string label;  // empty when the file is unlabeled
  MatrixXd matrix;
};

/// Raised when a record decodes to a matrix violating the SPD invariant;
/// carries the offending 0-based record index.
class dataset_spd_error : public error {
 public:
  dataset_spd_error(const std::string& what, long record)
      : error(what), record_(record) {}
  long record() const { return record_; }

 private:
  long record_;
};

/// Raised on unreadable or ill-formed input (wrong field count, bad number).
class dataset_format_error : public error {
 public:
  using error::error;
};

std::vector<MatrixRecord> read_matrix_dataset(const std::string& path, int p,
                                              bool labeled);

void write_matrix_dataset(const std::string& path,
                          const std::vector<MatrixXd>& matrices,
                          const std::vector<std::string>* labels = nullptr,
                          const std::string& comment = "");

}  // namespace ellw
