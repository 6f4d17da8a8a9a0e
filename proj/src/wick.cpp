#include "qcuntz/wick.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "qcuntz/error.hpp"

namespace qcuntz::wick {

QPoly QPoly::constant(std::int64_t c) { return monomial(c, 0); }

QPoly QPoly::monomial(std::int64_t c, unsigned exponent) {
  QPoly p;
  if (c != 0) p.coeffs_[exponent] = c;
  return p;
}

std::int64_t QPoly::coefficient(unsigned exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? 0 : it->second;
}

QPoly& QPoly::operator+=(const QPoly& rhs) {
  for (const auto& [e, c] : rhs.coeffs_) {
    const std::int64_t v = (coeffs_[e] += c);
    if (v == 0) coeffs_.erase(e);
  }
  return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  QPoly out;
  for (const auto& [ea, ca] : a.coeffs_) {
    for (const auto& [eb, cb] : b.coeffs_) out += QPoly::monomial(ca * cb, ea + eb);
  }
  return out;
}

QPoly QPoly::shifted(unsigned shift) const {
  QPoly out;
  for (const auto& [e, c] : coeffs_) out.coeffs_[e + shift] = c;
  return out;
}

double QPoly::evaluate(double q) const {
  double sum = 0.0;
  for (const auto& [e, c] : coeffs_) sum += static_cast<double>(c) * std::pow(q, e);
  return sum;
}

std::string to_string(const QPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.coefficients()) {
    std::int64_t mag = c;
    if (first) {
      if (c < 0) {
        out += "-";
        mag = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) mag = -c;
    }
    first = false;
    if (e == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + " ";
    out += "q";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string to_string(const SymbolWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += "a" + std::to_string(w[i].index);
    if (w[i].starred) out += '*';
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const WickExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < e.monomials.size(); ++i) {
    const NormalMonomial& m = e.monomials[i];
    if (i) out += " + ";
    out += "(" + to_string(m.coeff) + ") · a" + to_string(m.creators) + " a*" +
           to_string(m.annihilators);
  }
  return out;
}

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '+') {
      out.push_back({text.substr(i, 1), i});
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '+') {
        ++i;
      }
      out.push_back({text.substr(start, i - start), start});
    }
  }
  return out;
}

bool parse_int(std::string_view s, long long& value) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') return false;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

RawExpr parse_expr(std::string_view text, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidLetter, "alphabet size must be >= 1");
  RawExpr expr;
  expr.n = n;
  RawTerm term{QPoly::constant(1), {}};
  bool term_open = false;
  bool seen_generator = false;
  std::size_t last_offset = 0;

  auto close_term = [&](std::size_t offset) {
    if (!term_open) throw ParseError(offset, "empty summand");
    expr.terms.push_back(std::move(term));
    term = RawTerm{QPoly::constant(1), {}};
    term_open = false;
    seen_generator = false;
  };

  for (const Token& tok : tokenize(text)) {
    last_offset = tok.offset;
    if (tok.text == "+") {
      close_term(tok.offset);
      continue;
    }
    term_open = true;
    long long integer = 0;
    if (tok.text.front() == 'a') {
      std::string_view body = tok.text.substr(1);
      bool starred = false;
      if (!body.empty() && body.back() == '*') {
        starred = true;
        body.remove_suffix(1);
      }
      long long index = 0;
      if (!parse_int(body, index) || body.front() == '-') {
        throw ParseError(tok.offset, "unknown token '" + std::string(tok.text) + "'");
      }
      if (index < 1 || index > n) {
        throw ParseError(tok.offset, "generator index " + std::to_string(index) +
                                         " outside 1.." + std::to_string(n));
      }
      term.symbols.push_back({static_cast<int>(index), starred});
      seen_generator = true;
    } else if (tok.text == "q" || tok.text.starts_with("q^")) {
      if (seen_generator) throw ParseError(tok.offset, "scalar after generator");
      long long power = 1;
      if (tok.text.size() > 1 && (!parse_int(tok.text.substr(2), power) || power < 0)) {
        throw ParseError(tok.offset, "bad q power '" + std::string(tok.text) + "'");
      }
      term.coeff = term.coeff.shifted(static_cast<unsigned>(power));
    } else if (parse_int(tok.text, integer)) {
      if (seen_generator) throw ParseError(tok.offset, "scalar after generator");
      term.coeff = term.coeff * QPoly::constant(integer);
    } else {
      throw ParseError(tok.offset, "unknown token '" + std::string(tok.text) + "'");
    }
  }
  if (!term_open) throw ParseError(text.empty() ? 0 : last_offset, "empty summand");
  expr.terms.push_back(std::move(term));
  return expr;
}

std::size_t inversion_count(const SymbolWord& w) {
  std::size_t stars = 0, count = 0;
  for (const GenSymbol& s : w) {
    if (s.starred) {
      ++stars;
    } else {
      count += stars;
    }
  }
  return count;
}

namespace {

// Position p of a redex a_i^* a_j (w[p] starred, w[p+1] not), if any.
std::optional<std::size_t> find_redex(const SymbolWord& w, Strategy strategy) {
  if (w.size() < 2) return std::nullopt;
  if (strategy == Strategy::LeftmostInnermost) {
    for (std::size_t p = 0; p + 1 < w.size(); ++p) {
      if (w[p].starred && !w[p + 1].starred) return p;
    }
  } else {
    for (std::size_t p = w.size() - 1; p-- > 0;) {
      if (w[p].starred && !w[p + 1].starred) return p;
    }
  }
  return std::nullopt;
}

NormalMonomial to_monomial(const SymbolWord& w, QPoly coeff) {
  std::vector<int> creators, annihilators;
  for (const GenSymbol& s : w) (s.starred ? annihilators : creators).push_back(s.index);
  std::reverse(annihilators.begin(), annihilators.end());
  return {Word(std::move(creators)), Word(std::move(annihilators)), std::move(coeff)};
}

}  // namespace

WickExpr normal_form(const RawExpr& expr, Strategy strategy) {
  std::map<SymbolWord, QPoly> pending;
  for (const RawTerm& t : expr.terms) {
    if (!t.coeff.is_zero()) pending[t.symbols] += t.coeff;
  }
  std::map<std::pair<Word, Word>, QPoly> done;
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const SymbolWord& w = node.key();
    QPoly& coeff = node.mapped();
    if (coeff.is_zero()) continue;
    const auto p = find_redex(w, strategy);
    if (!p) {
      NormalMonomial m = to_monomial(w, coeff);
      done[{m.creators, m.annihilators}] += m.coeff;
      continue;
    }
    const GenSymbol star = w[*p];
    const GenSymbol plain = w[*p + 1];
    if (star.index != plain.index) continue;  // a_i^* a_j = 0
    SymbolWord contracted(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(*p));
    contracted.insert(contracted.end(), w.begin() + static_cast<std::ptrdiff_t>(*p) + 2, w.end());
    SymbolWord swapped = w;
    swapped[*p] = plain;
    swapped[*p + 1] = star;
    pending[contracted] += coeff;
    pending[swapped] += coeff.shifted(1);
  }
  WickExpr out;
  out.n = expr.n;
  for (auto& [key, coeff] : done) {
    if (!coeff.is_zero()) out.monomials.push_back({key.first, key.second, coeff});
  }
  return out;
}

WickExpr normal_form(const SymbolWord& word, int n, Strategy strategy) {
  RawExpr e;
  e.n = n;
  e.terms.push_back({QPoly::constant(1), word});
  return normal_form(e, strategy);
}

namespace {

void check_alphabet(int n, const OperatorFamily& family) {
  if (n != family.n()) {
    throw Error(ErrorCode::AlphabetMismatch, "expression over " + std::to_string(n) +
                                                 " generators, family has " +
                                                 std::to_string(family.n()));
  }
}

SparseMatrix product(const SymbolWord& w, const OperatorFamily& family) {
  SparseMatrix out = SparseMatrix::identity(family.dim());
  for (const GenSymbol& s : w) {
    if (s.index < 1 || s.index > family.n()) {
      throw Error(ErrorCode::AlphabetMismatch, "generator index outside family alphabet");
    }
    out = out * (s.starred ? family.A_adj(s.index) : family.A(s.index));
  }
  return out;
}

// Applies the word right to left to the selected basis columns.
SparseMatrix product_on(const SymbolWord& w, const OperatorFamily& family,
                        std::span<const std::size_t> columns) {
  std::vector<std::vector<Entry>> cols;
  for (std::size_t v : columns) {
    if (v >= family.dim()) throw Error(ErrorCode::OutOfRange, "column outside the basis");
    cols.push_back({Entry{v, Complex{1.0}}});
  }
  SparseMatrix out = SparseMatrix::from_columns(family.dim(), std::move(cols));
  for (std::size_t i = w.size(); i-- > 0;) {
    const GenSymbol& s = w[i];
    if (s.index < 1 || s.index > family.n()) {
      throw Error(ErrorCode::AlphabetMismatch, "generator index outside family alphabet");
    }
    out = (s.starred ? family.A_adj(s.index) : family.A(s.index)) * out;
  }
  return out;
}

SymbolWord monomial_word(const NormalMonomial& m) {
  SymbolWord w;
  for (int c : m.creators.letters()) w.push_back({c, false});
  for (std::size_t i = m.annihilators.size(); i-- > 0;) w.push_back({m.annihilators[i], true});
  return w;
}

}  // namespace

SparseMatrix evaluate(const SymbolWord& word, const OperatorFamily& family) {
  return product(word, family);
}

SparseMatrix evaluate_columns(const SymbolWord& word, const OperatorFamily& family,
                              std::span<const std::size_t> columns) {
  return product_on(word, family, columns);
}

SparseMatrix evaluate_columns(const WickExpr& expr, const OperatorFamily& family, double q_value,
                              std::span<const std::size_t> columns) {
  check_alphabet(expr.n, family);
  SparseMatrix sum(family.dim(), columns.size());
  for (const NormalMonomial& m : expr.monomials) {
    sum = sum + product_on(monomial_word(m), family, columns).scaled(m.coeff.evaluate(q_value));
  }
  return sum;
}

SparseMatrix evaluate(const WickExpr& expr, const OperatorFamily& family, double q_value) {
  check_alphabet(expr.n, family);
  SparseMatrix sum(family.dim(), family.dim());
  for (const NormalMonomial& m : expr.monomials) {
    sum = sum + product(monomial_word(m), family).scaled(m.coeff.evaluate(q_value));
  }
  return sum;
}

SparseMatrix evaluate(const RawExpr& expr, const OperatorFamily& family, double q_value) {
  check_alphabet(expr.n, family);
  SparseMatrix sum(family.dim(), family.dim());
  for (const RawTerm& t : expr.terms) {
    sum = sum + product(t.symbols, family).scaled(t.coeff.evaluate(q_value));
  }
  return sum;
}

SymbolWord random_word(int n, int max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> length(1, std::max(1, max_len));
  std::uniform_int_distribution<int> index(1, n);
  std::bernoulli_distribution star(0.5);
  SymbolWord w(static_cast<std::size_t>(length(rng)));
  for (GenSymbol& s : w) {
    s.index = index(rng);
    s.starred = star(rng);
  }
  return w;
}

ConfluenceReport confluence_probe(int n, int max_len, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::OutOfRange, "trials must be >= 1");
  if (n < 1) throw Error(ErrorCode::InvalidLetter, "n must be >= 1");
  ConfluenceReport report{n, max_len, trials, seed, 0, {}};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const SymbolWord w = random_word(n, max_len, rng);
    if (normal_form(w, n, Strategy::LeftmostInnermost) !=
        normal_form(w, n, Strategy::RightmostInnermost)) {
      ++report.mismatches;
      report.mismatch_words.push_back(to_string(w));
    }
  }
  return report;
}

}  // namespace qcuntz::wick
