#pragma once

#include <map>
#include <string>
#include <vector>

#include "reldom/group.hpp"
#include "reldom/linalg.hpp"

namespace reldom::dom {

using linalg::Matrix;
using linalg::Vector;

class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Generator images of a representation. Images of inverse letters and of
// derived letters are filled in when not given; given ones are checked.
class Representation {
 public:
  Representation(const geom::GroupSpec& group, const std::map<std::string, Matrix>& images);

  const geom::GroupSpec& group() const { return *group_; }
  int dim() const { return dim_; }
  const Matrix& image(int letter) const { return images_.at(letter); }
  const Matrix& image_inverse(int letter) const { return images_.at(group_->inverse_of(letter)); }
  const Matrix& image_wedge2(int letter) const { return wedge2_.at(letter); }

  Matrix evaluate(const geom::Word& w) const;
  // Same product kept with its inverse and second exterior power.
  linalg::TrackedProduct tracked(const geom::Word& w) const;

  // g -> rho(g)^{-T}
  Representation dual() const;
  std::map<std::string, Matrix> named_images() const;

 private:
  Representation(const geom::GroupSpec& group, std::vector<Matrix> images);
  void finish();

  const geom::GroupSpec* group_;
  int dim_ = 0;
  std::vector<Matrix> images_;
  std::vector<Matrix> wedge2_;
};

}  // namespace reldom::dom
