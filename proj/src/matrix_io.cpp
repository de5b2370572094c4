#include "reldom/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "reldom/group_file.hpp"

namespace reldom::io {

using geom::ParseError;

const std::string* MatrixBlock::tag(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return &v;
  return nullptr;
}

namespace {

std::string strip(const std::string& raw) {
  const auto hash = raw.find('#');
  std::string s = hash == std::string::npos ? raw : raw.substr(0, hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& v, const std::string& name, int line, const std::string& field) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(name, line, "field '" + field + "' is not an integer: '" + v + "'");
  }
}

}  // namespace

std::vector<MatrixBlock> read_matrix_blocks(std::istream& in, const std::string& name) {
  std::vector<MatrixBlock> out;
  std::string raw;
  int line = 0;
  int rows_left = 0;
  int d = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip(raw);
    if (s.empty()) continue;
    if (rows_left == 0) {
      MatrixBlock b;
      b.line = line;
      std::istringstream is(s);
      std::string tok;
      while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError(name, line, "expected key=value header, got '" + tok + "'");
        b.header.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
      }
      const std::string* dim = b.tag("d");
      if (!dim) throw ParseError(name, line, "block header lacks d=<n>");
      d = static_cast<int>(parse_long(*dim, name, line, "d"));
      if (d < 1 || d > 64) throw ParseError(name, line, "dimension out of range");
      b.matrix = linalg::Matrix::Zero(d, d);
      out.push_back(std::move(b));
      rows_left = d;
      continue;
    }
    std::istringstream is(s);
    const int r = d - rows_left;
    for (int c = 0; c < d; ++c) {
      std::string tok;
      if (!(is >> tok)) throw ParseError(name, line, "row " + std::to_string(r) + " has fewer than " + std::to_string(d) + " entries");
      try {
        std::size_t used = 0;
        out.back().matrix(r, c) = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(name, line, "bad number '" + tok + "'");
      }
    }
    std::string extra;
    if (is >> extra) throw ParseError(name, line, "row " + std::to_string(r) + " has more than " + std::to_string(d) + " entries");
    --rows_left;
  }
  if (rows_left > 0) throw ParseError(name, line, "file ends inside a matrix block");
  return out;
}

std::vector<MatrixBlock> read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path, 0, "cannot open file");
  return read_matrix_blocks(f, path);
}

void write_matrix_block(std::ostream& out, const MatrixBlock& block) {
  bool first = true;
  bool has_d = block.tag("d") != nullptr;
  if (!has_d) {
    out << "d=" << block.matrix.rows();
    first = false;
  }
  for (const auto& [k, v] : block.header) {
    out << (first ? "" : " ") << k << "=" << v;
    first = false;
  }
  out << "\n";
  char buf[64];
  for (int r = 0; r < block.matrix.rows(); ++r) {
    for (int c = 0; c < block.matrix.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", block.matrix(r, c));
      out << (c ? " " : "") << buf;
    }
    out << "\n";
  }
}

split::MatrixSequence read_sequence(std::istream& in, const std::string& name) {
  const auto blocks = read_matrix_blocks(in, name);
  if (blocks.empty()) throw ParseError(name, 0, "no matrices in sequence");
  std::vector<linalg::Matrix> mats;
  long k0 = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string* k = blocks[i].tag("k");
    if (!k) throw ParseError(name, blocks[i].line, "sequence block lacks k=<int>");
    const long kv = parse_long(*k, name, blocks[i].line, "k");
    if (i == 0) k0 = kv;
    else if (kv != k0 + static_cast<long>(i)) throw ParseError(name, blocks[i].line, "indices must be consecutive");
    if (i > 0 && blocks[i].matrix.rows() != blocks[0].matrix.rows())
      throw ParseError(name, blocks[i].line, "dimension differs from the first block");
    mats.push_back(blocks[i].matrix);
  }
  try {
    return split::MatrixSequence(k0, std::move(mats));
  } catch (const std::invalid_argument& e) {
    throw ParseError(name, 0, e.what());
  }
}

split::MatrixSequence read_sequence_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path, 0, "cannot open file");
  return read_sequence(f, path);
}

void write_sequence(std::ostream& out, const split::MatrixSequence& seq) {
  for (long k = seq.k_min(); k <= seq.k_max(); ++k) {
    MatrixBlock b;
    b.header = {{"d", std::to_string(seq.dim())}, {"k", std::to_string(k)}};
    b.matrix = seq.at(k);
    write_matrix_block(out, b);
  }
}

std::map<std::string, linalg::Matrix> read_images(std::istream& in, const std::string& name) {
  std::map<std::string, linalg::Matrix> out;
  for (const auto& b : read_matrix_blocks(in, name)) {
    const std::string* g = b.tag("gen");
    if (!g) throw ParseError(name, b.line, "representation block lacks gen=<symbol>");
    if (!out.emplace(*g, b.matrix).second) throw ParseError(name, b.line, "generator '" + *g + "' given twice");
  }
  if (out.empty()) throw ParseError(name, 0, "no generator images");
  return out;
}

std::map<std::string, linalg::Matrix> read_images_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path, 0, "cannot open file");
  return read_images(f, path);
}

}  // namespace reldom::io
