#include "reldom/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace reldom::report {

namespace {

void write(std::ostringstream& os, const Json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write(os, it.value(), indent, level + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write(os, v, indent, level + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s = buf;
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

void emit(const Json& j, const std::string& path) {
  const std::string text = dump(j) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed to write JSON to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed to write '" + path + "'");
}

Json to_json(const linalg::BoundCheck& c) {
  Json j;
  j["name"] = c.name;
  j["bound"] = c.bound;
  j["measured"] = c.measured;
  j["margin"] = c.margin;
  j["skipped"] = c.skipped;
  j["reason"] = c.reason;
  return j;
}

Json to_json(const linalg::BoundReport& r) {
  Json arr = Json::array();
  for (const auto& c : r.checks) arr.push_back(to_json(c));
  return arr;
}

Json to_json(const linalg::Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const linalg::Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace reldom::report
