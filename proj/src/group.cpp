#include "reldom/group.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace reldom::geom {

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : w) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

GroupSpec::GroupSpec(std::vector<std::string> symbols, std::vector<int> inverse_of,
                     std::vector<std::vector<int>> peripherals)
    : symbols_(std::move(symbols)), inverse_(std::move(inverse_of)), peripherals_(std::move(peripherals)) {
  const int n = generator_count();
  if (n == 0) throw GroupError("group has no generators");
  if (static_cast<int>(inverse_.size()) != n) throw GroupError("inverse table size mismatch");
  for (int g = 0; g < n; ++g) {
    const int h = inverse_[g];
    if (h < 0 || h >= n || inverse_[h] != g) throw GroupError("generator " + symbols_[g] + " has no consistent inverse");
    if (!index_.emplace(symbols_[g], g).second) throw GroupError("duplicate generator symbol " + symbols_[g]);
  }
  letter_peripheral_.assign(n, -1);
  for (int p = 0; p < peripheral_count(); ++p) {
    std::set<int> members(peripherals_[p].begin(), peripherals_[p].end());
    if (members.empty()) throw GroupError("empty peripheral generator subset");
    std::vector<int> basis;
    for (int g : peripherals_[p]) {
      if (g < 0 || g >= n) throw GroupError("peripheral generator index out of range");
      if (!members.count(inverse_[g])) throw GroupError("peripheral subset not closed under inversion at " + symbols_[g]);
      if (inverse_[g] == g) throw GroupError("peripheral generator of order two is not supported: " + symbols_[g]);
      if (letter_peripheral_[g] != -1 && letter_peripheral_[g] != p)
        throw GroupError("generator " + symbols_[g] + " lies in two peripheral subsets");
      letter_peripheral_[g] = p;
      if (std::find(basis.begin(), basis.end(), inverse_[g]) == basis.end() &&
          std::find(basis.begin(), basis.end(), g) == basis.end())
        basis.push_back(g);
    }
    basis_.push_back(basis);
  }
}

bool GroupSpec::is_peripheral_letter(int g) const { return letter_peripheral_.at(g) >= 0; }
int GroupSpec::peripheral_of_letter(int g) const { return letter_peripheral_.at(g); }

void GroupSpec::validate_letters(const Word& w) const {
  for (int x : w)
    if (x < 0 || x >= generator_count()) throw GroupError("invalid generator index " + std::to_string(x));
}

Word GroupSpec::multiply(const Word& a, const Word& b) const {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return normal_form(w);
}

Word GroupSpec::inverse(const Word& w) const {
  validate_letters(w);
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = inverse_[x];
  return normal_form(r);
}

Word GroupSpec::peripheral_letters(int p, const std::vector<long>& coordinates) const {
  const auto& basis = peripheral_basis(p);
  if (coordinates.size() != basis.size()) throw GroupError("peripheral coordinate rank mismatch");
  Word w;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const int letter = coordinates[j] >= 0 ? basis[j] : inverse_[basis[j]];
    for (long i = 0; i < std::labs(coordinates[j]); ++i) w.push_back(letter);
  }
  return w;
}

Word GroupSpec::peripheral_element(int p, const std::vector<long>& coordinates) const {
  return normal_form(peripheral_letters(p, coordinates));
}

int GroupSpec::symbol_index(const std::string& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw GroupError("unknown generator '" + s + "'");
  return it->second;
}

Word GroupSpec::parse_word(const std::string& text) const {
  bool single = true;
  for (const auto& s : symbols_)
    if (s.size() != 1) single = false;
  Word w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (index_.count(tok)) {
      w.push_back(index_.at(tok));
    } else if (tok == "id" || tok == "e" || tok == "1") {
      continue;
    } else if (single) {
      for (char c : tok) w.push_back(symbol_index(std::string(1, c)));
    } else {
      throw GroupError("unknown generator '" + tok + "'");
    }
  }
  return w;
}

std::string GroupSpec::format_word(const Word& w) const {
  bool single = true;
  for (const auto& s : symbols_)
    if (s.size() != 1) single = false;
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i) out += ' ';
    out += symbols_.at(w[i]);
  }
  return out;
}

namespace {

struct Letters {
  std::vector<std::string> symbols;
  std::vector<int> inverse;
};

Letters resolve_letters(const GroupDescription& d) {
  if (d.generators.empty()) throw GroupError("field 'generators' is empty");
  if (d.inverses.size() != d.generators.size())
    throw GroupError("field 'inverses' must list one inverse per generator");
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < d.generators.size(); ++i)
    if (!idx.emplace(d.generators[i], static_cast<int>(i)).second)
      throw GroupError("duplicate generator symbol " + d.generators[i]);
  Letters out{d.generators, std::vector<int>(d.generators.size())};
  for (std::size_t i = 0; i < d.inverses.size(); ++i) {
    auto it = idx.find(d.inverses[i]);
    if (it == idx.end()) throw GroupError("inverse '" + d.inverses[i] + "' is not a generator");
    out.inverse[i] = it->second;
  }
  return out;
}

std::vector<std::vector<int>> resolve_peripherals(const GroupDescription& d, const Letters& l) {
  std::vector<std::vector<int>> out;
  for (const auto& p : d.peripherals) {
    std::vector<int> ids;
    for (const auto& s : p) {
      auto it = std::find(l.symbols.begin(), l.symbols.end(), s);
      if (it == l.symbols.end()) throw GroupError("peripheral generator '" + s + "' is not a generator");
      ids.push_back(static_cast<int>(it - l.symbols.begin()));
    }
    out.push_back(ids);
  }
  return out;
}

}  // namespace

FreeProductGroup::FreeProductGroup(const GroupDescription& desc)
    : GroupSpec(resolve_letters(desc).symbols, resolve_letters(desc).inverse,
                resolve_peripherals(desc, resolve_letters(desc))) {
  const int n = generator_count();
  std::vector<bool> derived(n, false);
  std::vector<Word> raw(n);
  for (const auto& [sym, body] : desc.derived) {
    const int g = symbol_index(sym);
    Word w;
    for (const auto& s : body) w.push_back(symbol_index(s));
    derived[g] = true;
    raw[g] = w;
  }
  for (int g = 0; g < n; ++g) {
    const int h = inverse_of(g);
    if (derived[g] && !derived[h]) {
      Word w(raw[g].rbegin(), raw[g].rend());
      for (int& x : w) x = inverse_of(x);
      derived[h] = true;
      raw[h] = w;
    }
  }

  letter_pair_.assign(n, -1);
  letter_sign_.assign(n, 0);
  for (int g = 0; g < n; ++g) {
    if (derived[g] || letter_pair_[g] >= 0) continue;
    const int h = inverse_of(g);
    if (h == g) throw GroupError("generator " + symbol(g) + " is its own inverse; torsion is not supported");
    const int pair = static_cast<int>(pair_positive_letter_.size());
    pair_positive_letter_.push_back(g);
    pair_negative_letter_.push_back(h);
    letter_pair_[g] = letter_pair_[h] = pair;
    letter_sign_[g] = 1;
    letter_sign_[h] = -1;
  }
  const int pairs = static_cast<int>(pair_positive_letter_.size());
  if (pairs == 0) throw GroupError("no base generators");

  pair_factor_.assign(pairs, -1);
  if (desc.normal_form == "free") {
    for (int i = 0; i < pairs; ++i) pair_factor_[i] = i;
  } else if (desc.normal_form == "abelian") {
    for (int i = 0; i < pairs; ++i) pair_factor_[i] = 0;
  } else if (desc.normal_form == "free_product") {
    if (desc.factors.empty()) throw GroupError("normal_form = free_product requires field 'factors'");
    for (std::size_t f = 0; f < desc.factors.size(); ++f) {
      for (const auto& s : desc.factors[f]) {
        const int g = symbol_index(s);
        const int pair = letter_pair_[g];
        if (pair < 0) throw GroupError("factor member '" + s + "' is a derived generator");
        if (pair_factor_[pair] >= 0 && pair_factor_[pair] != static_cast<int>(f))
          throw GroupError("generator '" + s + "' listed in two factors");
        pair_factor_[pair] = static_cast<int>(f);
      }
    }
    for (int i = 0; i < pairs; ++i)
      if (pair_factor_[i] < 0) throw GroupError("generator '" + symbol(pair_positive_letter_[i]) + "' belongs to no factor");
  } else {
    throw GroupError("unknown normal_form '" + desc.normal_form + "'");
  }
  int factors = 0;
  for (int f : pair_factor_) factors = std::max(factors, f + 1);
  factor_size_.assign(factors, 0);
  factor_pairs_.assign(factors, {});
  pair_position_.assign(pairs, 0);
  for (int i = 0; i < pairs; ++i) {
    pair_position_[i] = factor_size_[pair_factor_[i]]++;
    factor_pairs_[pair_factor_[i]].push_back(i);
  }
  for (int f = 0; f < factors; ++f)
    if (factor_size_[f] == 0) throw GroupError("empty factor");

  // Expand derived letters down to base letters.
  expansion_.assign(n, {});
  std::vector<int> state(n, 0);
  std::function<void(int)> expand = [&](int g) {
    if (!derived[g] || state[g] == 2) return;
    if (state[g] == 1) throw GroupError("derived generator '" + symbol(g) + "' is defined cyclically");
    state[g] = 1;
    Word out;
    for (int x : raw[g]) {
      if (derived[x]) {
        expand(x);
        out.insert(out.end(), expansion_[x].begin(), expansion_[x].end());
      } else {
        out.push_back(x);
      }
    }
    expansion_[g] = out;
    state[g] = 2;
  };
  for (int g = 0; g < n; ++g) expand(g);

  for (int p = 0; p < peripheral_count(); ++p) {
    PeripheralKind k;
    const auto& basis = peripheral_basis(p);
    bool coordinate = true;
    int factor = -1;
    std::set<int> seen;
    for (int b : basis) {
      const int pair = letter_pair_[b];
      if (pair < 0 || !seen.insert(pair).second) {
        coordinate = false;
        break;
      }
      if (factor < 0) factor = pair_factor_[pair];
      if (pair_factor_[pair] != factor) {
        coordinate = false;
        break;
      }
    }
    if (coordinate) {
      k.coordinate = true;
      k.factor = factor;
      for (int b : basis) {
        k.positions.push_back(pair_position_[letter_pair_[b]]);
        k.signs.push_back(letter_sign_[b]);
      }
    } else if (basis.size() == 1) {
      k.generator = normal_form(Word{basis[0]});
      Word p2 = multiply(k.generator, k.generator);
      Word p3 = multiply(p2, k.generator);
      k.cyclic_length = static_cast<long>(p3.size()) - static_cast<long>(p2.size());
      if (k.cyclic_length <= 0) throw GroupError("peripheral generator '" + symbol(basis[0]) + "' has finite order");
    } else {
      throw GroupError("peripheral must be a coordinate subgroup of one factor or cyclic");
    }
    kinds_.push_back(k);
  }
}

std::vector<FreeProductGroup::Syllable> FreeProductGroup::syllables(const Word& w) const {
  validate_letters(w);
  std::vector<Syllable> st;
  auto push = [&](int letter) {
    const int pair = letter_pair_[letter];
    const int f = pair_factor_[pair];
    if (st.empty() || st.back().factor != f) st.push_back(Syllable{f, std::vector<long>(factor_size_[f], 0)});
    auto& e = st.back().exps;
    e[pair_position_[pair]] += letter_sign_[letter];
    if (std::all_of(e.begin(), e.end(), [](long x) { return x == 0; })) st.pop_back();
  };
  for (int x : w) {
    if (letter_pair_[x] >= 0) {
      push(x);
    } else {
      for (int y : expansion_[x]) push(y);
    }
  }
  return st;
}

Word FreeProductGroup::emit(const std::vector<Syllable>& s) const {
  Word w;
  for (const auto& syl : s) {
    const auto& pairs = factor_pairs_[syl.factor];
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const long e = syl.exps[j];
      const int letter = e > 0 ? pair_positive_letter_[pairs[j]] : pair_negative_letter_[pairs[j]];
      for (long i = 0; i < std::labs(e); ++i) w.push_back(letter);
    }
  }
  return w;
}

Word FreeProductGroup::normal_form(const Word& w) const { return emit(syllables(w)); }

namespace {
bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}
}  // namespace

CosetDecomposition FreeProductGroup::decompose(const Word& element, int p) const {
  if (p < 0 || p >= peripheral_count()) throw GroupError("peripheral index out of range");
  const PeripheralKind& k = kinds_[p];
  CosetDecomposition out;
  if (k.coordinate) {
    auto s = syllables(element);
    out.coordinates.assign(k.positions.size(), 0);
    if (!s.empty() && s.back().factor == k.factor) {
      auto& e = s.back().exps;
      for (std::size_t j = 0; j < k.positions.size(); ++j) {
        out.coordinates[j] = e[k.positions[j]] * k.signs[j];
        e[k.positions[j]] = 0;
      }
      if (std::all_of(e.begin(), e.end(), [](long x) { return x == 0; })) s.pop_back();
    }
    out.representative = emit(s);
    return out;
  }
  // Cyclic peripheral: |g p^n| >= |n| c - |g|, so minimizers satisfy |n| <= 2|g|/c.
  const Word g = normal_form(element);
  const long window = static_cast<long>(2 * g.size()) / k.cyclic_length + 1;
  const Word gen_inv = inverse(k.generator);
  Word best = g;
  long best_n = 0;
  for (int dir : {1, -1}) {
    Word cur = g;
    const Word& step = dir > 0 ? k.generator : gen_inv;
    for (long n = 1; n <= window; ++n) {
      cur = multiply(cur, step);
      if (shortlex_less(cur, best)) {
        best = cur;
        best_n = dir * n;
      }
    }
  }
  out.representative = best;
  out.coordinates = {-best_n};
  return out;
}

std::unique_ptr<FreeProductGroup> make_group(const GroupDescription& desc) {
  return std::make_unique<FreeProductGroup>(desc);
}

}  // namespace reldom::geom
