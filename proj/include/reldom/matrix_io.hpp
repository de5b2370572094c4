#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "reldom/linalg.hpp"
#include "reldom/splitting.hpp"

namespace reldom::io {

// Plain-text matrices, one block per matrix:
//
//   d=2 gen=a        # header: d=<n> plus optional key=value tags
//   1 1
//   1 2
//
// Rows are row-major decimals; '#' starts a comment.
struct MatrixBlock {
  std::vector<std::pair<std::string, std::string>> header;
  linalg::Matrix matrix;
  int line = 0;
  const std::string* tag(const std::string& key) const;
};

std::vector<MatrixBlock> read_matrix_blocks(std::istream& in, const std::string& name = "<input>");
std::vector<MatrixBlock> read_matrix_file(const std::string& path);
void write_matrix_block(std::ostream& out, const MatrixBlock& block);

// Blocks tagged k=<int> with consecutive indices.
split::MatrixSequence read_sequence(std::istream& in, const std::string& name = "<input>");
split::MatrixSequence read_sequence_file(const std::string& path);
void write_sequence(std::ostream& out, const split::MatrixSequence& seq);

// Blocks tagged gen=<symbol>.
std::map<std::string, linalg::Matrix> read_images(std::istream& in, const std::string& name = "<input>");
std::map<std::string, linalg::Matrix> read_images_file(const std::string& path);

}  // namespace reldom::io
