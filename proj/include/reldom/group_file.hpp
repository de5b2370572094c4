#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "reldom/group.hpp"

namespace reldom::geom {

// Line-oriented `key = value` text, '#' starts a comment:
//
//   generators  = a A b B c C
//   inverses    = A a B b C c
//   peripherals = [c C]
//   normal_form = "free"            # or "abelian", "free_product"
//   factors     = [x X y Y] [t T]   # free_product only
//   derived     = c : a b A B       # may repeat
//
// A peripheral listed without inverses is closed under inversion.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

GroupDescription parse_group_description(std::istream& in, const std::string& name = "<input>");
GroupDescription read_group_file(const std::string& path);
std::string write_group_description(const GroupDescription& d);

}  // namespace reldom::geom
