#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace reldom::geom {

// Letters are generator indices; the empty word is the identity.
using Word = std::vector<int>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// gamma = representative * p^coordinates, with the representative canonical
// for the coset gamma P.
struct CosetDecomposition {
  Word representative;
  std::vector<long> coordinates;
};

// Generators with involution, peripheral generator subsets and the two
// oracles. Subclass to plug in other groups with solvable word problem.
class GroupSpec {
 public:
  GroupSpec(std::vector<std::string> symbols, std::vector<int> inverse_of,
            std::vector<std::vector<int>> peripherals);
  virtual ~GroupSpec() = default;

  int generator_count() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int g) const { return symbols_.at(g); }
  int inverse_of(int g) const { return inverse_.at(g); }
  int peripheral_count() const { return static_cast<int>(peripherals_.size()); }
  const std::vector<int>& peripheral_generators(int p) const { return peripherals_.at(p); }
  // One generator from each inverse pair, in listing order.
  const std::vector<int>& peripheral_basis(int p) const { return basis_.at(p); }
  int peripheral_rank(int p) const { return static_cast<int>(basis_.at(p).size()); }
  bool is_peripheral_letter(int g) const;
  // Peripheral index of a letter or -1.
  int peripheral_of_letter(int g) const;

  virtual Word normal_form(const Word& w) const = 0;
  virtual CosetDecomposition decompose(const Word& element, int p) const = 0;

  Word coset_id(const Word& element, int p) const { return decompose(element, p).representative; }
  Word multiply(const Word& a, const Word& b) const;
  Word inverse(const Word& w) const;
  Word peripheral_element(int p, const std::vector<long>& coordinates) const;
  // Letter word for p^coordinates, basis letters repeated in order.
  Word peripheral_letters(int p, const std::vector<long>& coordinates) const;
  // Word length of the canonical form.
  std::size_t length(const Word& w) const { return normal_form(w).size(); }

  Word parse_word(const std::string& text) const;
  std::string format_word(const Word& w) const;
  int symbol_index(const std::string& s) const;

 protected:
  void validate_letters(const Word& w) const;

 private:
  std::vector<std::string> symbols_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> peripherals_;
  std::vector<std::vector<int>> basis_;
  std::vector<int> letter_peripheral_;
  std::map<std::string, int> index_;
};

// Parsed group description (see group_file.hpp for the text format).
struct GroupDescription {
  std::vector<std::string> generators;
  std::vector<std::string> inverses;
  std::vector<std::vector<std::string>> peripherals;
  std::string normal_form = "free";
  std::vector<std::vector<std::string>> factors;
  std::vector<std::pair<std::string, std::vector<std::string>>> derived;
};

// Free products of free abelian groups: free groups, Z^d, and mixtures.
// Derived generators are words in the base generators. Peripherals must be
// a coordinate subgroup of one factor or cyclic.
class FreeProductGroup : public GroupSpec {
 public:
  explicit FreeProductGroup(const GroupDescription& desc);

  Word normal_form(const Word& w) const override;
  CosetDecomposition decompose(const Word& element, int p) const override;

  int factor_count() const { return static_cast<int>(factor_size_.size()); }

 private:
  struct Syllable {
    int factor;
    std::vector<long> exps;
  };
  struct PeripheralKind {
    bool coordinate = false;
    int factor = -1;
    std::vector<int> positions;  // coordinate positions inside the factor
    std::vector<int> signs;      // orientation of each basis letter
    Word generator;              // cyclic case: canonical word of the basis letter
    long cyclic_length = 0;
  };

  std::vector<Syllable> syllables(const Word& w) const;
  Word emit(const std::vector<Syllable>& s) const;

  // Base letter data: pair index and sign; -1 for derived letters.
  std::vector<int> letter_pair_;
  std::vector<int> letter_sign_;
  std::vector<Word> expansion_;  // derived letters only
  std::vector<int> pair_factor_;
  std::vector<int> pair_position_;
  std::vector<int> pair_positive_letter_;
  std::vector<int> pair_negative_letter_;
  std::vector<int> factor_size_;
  std::vector<std::vector<int>> factor_pairs_;
  std::vector<PeripheralKind> kinds_;
};

std::unique_ptr<FreeProductGroup> make_group(const GroupDescription& desc);

}  // namespace reldom::geom
