#include "reldom/representation.hpp"

namespace reldom::dom {

namespace {
constexpr double kInverseTol = 1e-9;

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }
}  // namespace

Representation::Representation(const geom::GroupSpec& group, const std::map<std::string, Matrix>& images)
    : group_(&group) {
  const int n = group.generator_count();
  images_.assign(n, Matrix());
  for (const auto& [sym, m] : images) {
    int g;
    try {
      g = group.symbol_index(sym);
    } catch (const std::exception&) {
      throw RepresentationError("image given for unknown generator '" + sym + "'");
    }
    if (m.rows() != m.cols() || m.rows() < 1) throw RepresentationError("image of '" + sym + "' is not square");
    if (dim_ == 0) dim_ = static_cast<int>(m.rows());
    if (m.rows() != dim_) throw RepresentationError("image of '" + sym + "' has the wrong dimension");
    if (!Eigen::FullPivLU<Matrix>(m).isInvertible()) throw RepresentationError("image of '" + sym + "' is not invertible");
    images_[g] = m;
  }
  if (dim_ == 0) throw RepresentationError("representation has no images");
  // Inverse letters.
  for (int g = 0; g < n; ++g) {
    const int gi = group.inverse_of(g);
    if (images_[g].size() == 0 && images_[gi].size() != 0) images_[g] = images_[gi].inverse();
  }
  // Derived letters: evaluate their expansion in base letters.
  for (int g = 0; g < n; ++g) {
    if (images_[g].size() != 0) continue;
    const geom::Word nf = group.normal_form(geom::Word{g});
    if (nf.size() == 1 && nf[0] == g) throw RepresentationError("no image for generator '" + group.symbol(g) + "'");
    Matrix m = Matrix::Identity(dim_, dim_);
    for (int l : nf) {
      if (images_[l].size() == 0) throw RepresentationError("no image for generator '" + group.symbol(l) + "'");
      m = m * images_[l];
    }
    images_[g] = m;
  }
  finish();
}

Representation::Representation(const geom::GroupSpec& group, std::vector<Matrix> images)
    : group_(&group), dim_(static_cast<int>(images.at(0).rows())), images_(std::move(images)) {
  finish();
}

void Representation::finish() {
  const int n = group_->generator_count();
  for (int g = 0; g < n; ++g) {
    const Matrix& a = images_[g];
    const Matrix& b = images_[group_->inverse_of(g)];
    if (rel_err(a * b, Matrix::Identity(dim_, dim_)) > kInverseTol)
      throw RepresentationError("images of '" + group_->symbol(g) + "' and '" + group_->symbol(group_->inverse_of(g)) +
                                "' are not inverse");
    // Derived letters must agree with their expansion.
    const geom::Word nf = group_->normal_form(geom::Word{g});
    if (!(nf.size() == 1 && nf[0] == g)) {
      Matrix m = Matrix::Identity(dim_, dim_);
      for (int l : nf) m = m * images_[l];
      if (rel_err(a, m) > kInverseTol)
        throw RepresentationError("image of '" + group_->symbol(g) + "' disagrees with its expansion");
    }
  }
  wedge2_.clear();
  for (const auto& m : images_) wedge2_.push_back(dim_ >= 2 ? linalg::exterior_power(m, 2) : Matrix());
}

Matrix Representation::evaluate(const geom::Word& w) const {
  Matrix m = Matrix::Identity(dim_, dim_);
  for (int l : w) {
    if (l < 0 || l >= group_->generator_count()) throw RepresentationError("unknown letter in word");
    m = m * images_[l];
  }
  return m;
}

linalg::TrackedProduct Representation::tracked(const geom::Word& w) const {
  linalg::TrackedProduct p = linalg::TrackedProduct::identity(dim_);
  for (int l : w) {
    if (l < 0 || l >= group_->generator_count()) throw RepresentationError("unknown letter in word");
    p = p.times(images_[l], image_inverse(l), wedge2_[l]);
  }
  return p;
}

Representation Representation::dual() const {
  std::vector<Matrix> d;
  for (const auto& m : images_) d.push_back(linalg::dual(m));
  return Representation(*group_, std::move(d));
}

std::map<std::string, Matrix> Representation::named_images() const {
  std::map<std::string, Matrix> out;
  for (int g = 0; g < group_->generator_count(); ++g) out.emplace(group_->symbol(g), images_[g]);
  return out;
}

}  // namespace reldom::dom
