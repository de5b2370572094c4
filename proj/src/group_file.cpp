#include "reldom/group_file.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace reldom::geom {

ParseError::ParseError(const std::string& file, int line, const std::string& msg)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::vector<std::vector<std::string>> bracket_groups(const std::string& v, const std::string& file, int line) {
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  while (true) {
    const auto open = v.find('[', i);
    if (open == std::string::npos) {
      if (!trim(v.substr(i)).empty()) throw ParseError(file, line, "expected '[' group");
      break;
    }
    if (!trim(v.substr(i, open - i)).empty() && trim(v.substr(i, open - i)) != ",")
      throw ParseError(file, line, "unexpected text before '['");
    const auto close = v.find(']', open);
    if (close == std::string::npos) throw ParseError(file, line, "unterminated '['");
    out.push_back(tokens(v.substr(open + 1, close - open - 1)));
    if (out.back().empty()) throw ParseError(file, line, "empty bracket group");
    i = close + 1;
  }
  return out;
}

}  // namespace

GroupDescription parse_group_description(std::istream& in, const std::string& name) {
  GroupDescription d;
  std::string raw;
  int line = 0;
  bool have_gens = false, have_inv = false;
  std::vector<int> peripheral_lines;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(name, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key == "generators") {
      d.generators = tokens(value);
      have_gens = true;
    } else if (key == "inverses") {
      d.inverses = tokens(value);
      have_inv = true;
    } else if (key == "peripherals") {
      for (auto& g : bracket_groups(value, name, line)) {
        d.peripherals.push_back(g);
        peripheral_lines.push_back(line);
      }
    } else if (key == "normal_form") {
      value.erase(std::remove(value.begin(), value.end(), '"'), value.end());
      if (value != "free" && value != "abelian" && value != "free_product")
        throw ParseError(name, line, "normal_form must be \"free\", \"abelian\" or \"free_product\"");
      d.normal_form = value;
    } else if (key == "factors") {
      d.factors = bracket_groups(value, name, line);
    } else if (key == "derived") {
      const auto colon = value.find(':');
      if (colon == std::string::npos) throw ParseError(name, line, "derived needs 'symbol : word'");
      const std::string sym = trim(value.substr(0, colon));
      auto body = tokens(value.substr(colon + 1));
      if (sym.empty() || body.empty()) throw ParseError(name, line, "derived needs 'symbol : word'");
      d.derived.emplace_back(sym, body);
    } else {
      throw ParseError(name, line, "unknown field '" + key + "'");
    }
  }
  if (!have_gens) throw ParseError(name, line, "missing field 'generators'");
  if (!have_inv) throw ParseError(name, line, "missing field 'inverses'");
  if (d.inverses.size() != d.generators.size())
    throw ParseError(name, line, "'inverses' must have one entry per generator");
  std::map<std::string, std::string> inv;
  for (std::size_t i = 0; i < d.generators.size(); ++i) inv[d.generators[i]] = d.inverses[i];
  for (std::size_t p = 0; p < d.peripherals.size(); ++p) {
    auto& g = d.peripherals[p];
    std::vector<std::string> closed = g;
    for (const auto& s : g) {
      auto it = inv.find(s);
      if (it == inv.end()) throw ParseError(name, peripheral_lines[p], "peripheral generator '" + s + "' is not a generator");
      if (std::find(closed.begin(), closed.end(), it->second) == closed.end()) closed.push_back(it->second);
    }
    g = closed;
  }
  return d;
}

GroupDescription read_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_group_description(in, path);
}

std::string write_group_description(const GroupDescription& d) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
  };
  std::ostringstream os;
  os << "generators = " << join(d.generators) << "\n";
  os << "inverses = " << join(d.inverses) << "\n";
  if (!d.peripherals.empty()) {
    os << "peripherals =";
    for (const auto& p : d.peripherals) os << " [" << join(p) << "]";
    os << "\n";
  }
  os << "normal_form = \"" << d.normal_form << "\"\n";
  if (!d.factors.empty()) {
    os << "factors =";
    for (const auto& f : d.factors) os << " [" << join(f) << "]";
    os << "\n";
  }
  for (const auto& [sym, body] : d.derived) os << "derived = " << sym << " : " << join(body) << "\n";
  return os.str();
}

}  // namespace reldom::geom
