#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace qcuntz {

/// A generator index 1..n. Construction validates against the ambient n.
class Letter {
 public:
  Letter(int value, int n);

  int value() const noexcept { return value_; }

  friend bool operator==(Letter, Letter) = default;

 private:
  int value_;
};

/// Finite multi-index over {1..n}. The empty word plays the role of the
/// vacuum label; u_w denotes the left-to-right product u_{w1} u_{w2} ...
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(std::vector<int> letters);

  bool empty() const noexcept { return letters_.empty(); }
  std::size_t size() const noexcept { return letters_.size(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }
  const std::vector<int>& letters() const noexcept { return letters_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<int> letters_;
};

/// Drops the first letter; the empty word maps to itself.
Word sigma(const Word& w);

/// Prepends k.
Word sigma_k(Letter k, const Word& w);

/// Length of the maximal leading run of k in w, i.e. the m with
/// sigma_k^m sigma^m (w) == w and sigma_k^{m+1} sigma^{m+1}(w) != w.
int m_k(Letter k, const Word& w);

/// Membership in Lambda_j: empty, or last letter different from j.
bool is_in_lambda_j(const Word& w, Letter j);

/// All words of length <= max_len in Lambda_j. Words of equal length appear in
/// the order produced by prepending 1..n to the previous level, which is
/// lexicographic order on the reversed word.
std::vector<Word> enumerate_lambda_j(int n, Letter j, int max_len);

/// All words of length <= max_len over {1..n}, same ordering rule.
std::vector<Word> enumerate_lambda(int n, int max_len);

/// "[2,2,1]"; the empty word is "[]".
std::string to_string(const Word& w);

/// Inverse of to_string. Letters must lie in 1..n.
Word parse_word(std::string_view text, int n);

}  // namespace qcuntz
