#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"
#include "qcuntz/words.hpp"

// Exact Wick ordering for a_i^* a_i = 1 + q a_i a_i^*, a_i^* a_j = 0 (i != j).
namespace qcuntz::wick {

struct GenSymbol {
  int index = 1;
  bool starred = false;

  friend bool operator==(const GenSymbol&, const GenSymbol&) = default;
  friend auto operator<=>(const GenSymbol&, const GenSymbol&) = default;
};

using SymbolWord = std::vector<GenSymbol>;

/// Polynomial in q with exact integer coefficients; zero coefficients are
/// never stored.
class QPoly {
 public:
  QPoly() = default;
  static QPoly constant(std::int64_t c);
  static QPoly monomial(std::int64_t c, unsigned exponent);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::map<unsigned, std::int64_t>& coefficients() const noexcept { return coeffs_; }
  std::int64_t coefficient(unsigned exponent) const;

  QPoly& operator+=(const QPoly& rhs);
  friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
  friend QPoly operator*(const QPoly& a, const QPoly& b);

  /// Multiplies by q^shift.
  QPoly shifted(unsigned shift) const;

  double evaluate(double q) const;

  friend bool operator==(const QPoly&, const QPoly&) = default;

 private:
  std::map<unsigned, std::int64_t> coeffs_;
};

/// "k0 + k1 q + k2 q^2"; "0" for the zero polynomial.
std::string to_string(const QPoly& p);

struct RawTerm {
  QPoly coeff;
  SymbolWord symbols;
};

/// Unordered input: a sum of scalar-prefixed products of generators.
struct RawExpr {
  int n = 1;
  std::vector<RawTerm> terms;
};

/// coeff * a_creators * (a_annihilators)^*, with u_w = u_{w1} ... u_{wk} and
/// u_[] = 1. The trailing symbols a_{b1}^* ... a_{bm}^* of a normal word
/// therefore carry annihilators = (bm, ..., b1).
struct NormalMonomial {
  Word creators;
  Word annihilators;
  QPoly coeff;

  friend bool operator==(const NormalMonomial&, const NormalMonomial&) = default;
};

/// Sorted by (creators, annihilators); no duplicate keys, no zero coefficients.
struct WickExpr {
  int n = 1;
  std::vector<NormalMonomial> monomials;

  bool is_zero() const noexcept { return monomials.empty(); }
  friend bool operator==(const WickExpr&, const WickExpr&) = default;
};

std::string to_string(const WickExpr& e);
std::string to_string(const SymbolWord& w);

/// Grammar: summands separated by "+"; each summand is optional scalar
/// prefixes (signed integers, "q", "q^K") followed by tokens "aK" or "aK*".
/// Throws ParseError with the byte offset of the offending token.
RawExpr parse_expr(std::string_view text, int n);

enum class Strategy { LeftmostInnermost, RightmostInnermost };

WickExpr normal_form(const RawExpr& expr, Strategy strategy = Strategy::LeftmostInnermost);
WickExpr normal_form(const SymbolWord& word, int n,
                     Strategy strategy = Strategy::LeftmostInnermost);

/// Number of (starred, unstarred) pairs with the starred symbol to the left,
/// adjacent or not. Every rewrite step strictly lowers it.
std::size_t inversion_count(const SymbolWord& w);

/// Substitutes A_k for a_k, A_k^* for a_k^*, q_value for q.
SparseMatrix evaluate(const WickExpr& expr, const OperatorFamily& family, double q_value);
SparseMatrix evaluate(const RawExpr& expr, const OperatorFamily& family, double q_value);
SparseMatrix evaluate(const SymbolWord& word, const OperatorFamily& family);

/// The same evaluations applied to selected basis vectors only: column i of
/// the result is the image of e_{columns[i]}.
SparseMatrix evaluate_columns(const SymbolWord& word, const OperatorFamily& family,
                              std::span<const std::size_t> columns);
SparseMatrix evaluate_columns(const WickExpr& expr, const OperatorFamily& family, double q_value,
                              std::span<const std::size_t> columns);

/// Uniform length in 1..max_len, uniform index, fair star coin.
SymbolWord random_word(int n, int max_len, std::mt19937_64& rng);

struct ConfluenceReport {
  int n = 0;
  int max_len = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int mismatches = 0;
  std::vector<std::string> mismatch_words;
};

/// Normalizes random words under both strategies and compares.
ConfluenceReport confluence_probe(int n, int max_len, int trials, std::uint64_t seed);

}  // namespace qcuntz::wick
