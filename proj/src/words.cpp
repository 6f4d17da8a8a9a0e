#include "qcuntz/words.hpp"

#include <charconv>
#include <utility>

#include "qcuntz/error.hpp"

namespace qcuntz {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLetter: return "invalid-letter";
    case ErrorCode::InvalidTruncation: return "invalid-truncation";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::AlphabetMismatch: return "alphabet-mismatch";
    case ErrorCode::RejectInput: return "reject-input";
    case ErrorCode::UnclassifiedRemainder: return "unclassified-remainder";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::Incomparable: return "incomparable";
    case ErrorCode::UnrecognizedStructure: return "unrecognized-structure";
  }
  return "unknown";
}

Letter::Letter(int value, int n) : value_(value) {
  if (n < 1 || value < 1 || value > n) {
    throw Error(ErrorCode::InvalidLetter,
                "letter " + std::to_string(value) + " outside 1.." + std::to_string(n));
  }
}

Word::Word(std::initializer_list<int> letters) : letters_(letters) {}

Word::Word(std::vector<int> letters) : letters_(std::move(letters)) {}

Word sigma(const Word& w) {
  if (w.empty()) return w;
  return Word(std::vector<int>(w.letters().begin() + 1, w.letters().end()));
}

Word sigma_k(Letter k, const Word& w) {
  std::vector<int> out;
  out.reserve(w.size() + 1);
  out.push_back(k.value());
  out.insert(out.end(), w.letters().begin(), w.letters().end());
  return Word(std::move(out));
}

int m_k(Letter k, const Word& w) {
  int run = 0;
  for (int letter : w.letters()) {
    if (letter != k.value()) break;
    ++run;
  }
  return run;
}

bool is_in_lambda_j(const Word& w, Letter j) {
  return w.empty() || w.back() != j.value();
}

namespace {

// Level-by-level growth by prepending. Prepending never changes the last
// letter, so filtering on the first level is enough to stay inside Lambda_j.
std::vector<Word> grow(int n, int max_len, int excluded_last) {
  std::vector<Word> out{Word{}};
  std::vector<Word> level{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int k = 1; k <= n; ++k) {
        if (w.empty() && k == excluded_last) continue;
        next.push_back(sigma_k(Letter(k, n), w));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Word> enumerate_lambda_j(int n, Letter j, int max_len) {
  if (n < 1 || max_len < 0) {
    throw Error(ErrorCode::InvalidTruncation, "enumerate_lambda_j needs n >= 1 and L >= 0");
  }
  return grow(n, max_len, j.value());
}

std::vector<Word> enumerate_lambda(int n, int max_len) {
  if (n < 1 || max_len < 0) {
    throw Error(ErrorCode::InvalidTruncation, "enumerate_lambda needs n >= 1 and L >= 0");
  }
  return grow(n, max_len, 0);
}

std::string to_string(const Word& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  out += ']';
  return out;
}

Word parse_word(std::string_view text, int n) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ParseError(0, "word must be bracketed");
  }
  std::vector<int> letters;
  std::size_t pos = 1;
  const std::size_t end = text.size() - 1;
  if (pos == end) return Word{};
  while (pos <= end) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc{}) throw ParseError(pos, "expected letter");
    if (value < 1 || value > n) throw ParseError(pos, "letter out of range");
    letters.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    if (pos == end) break;
    if (text[pos] != ',') throw ParseError(pos, "expected ','");
    ++pos;
  }
  return Word(std::move(letters));
}

}  // namespace qcuntz
