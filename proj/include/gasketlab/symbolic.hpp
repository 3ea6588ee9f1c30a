#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gasketlab {

/// A letter of the alphabet {1, ..., N}. Negative values are reserved for
/// absent corner markers (-1, -2, -3).
using Symbol = int;
using Word = std::vector<Symbol>;

/// Stand-in for an infinite length or an infinite surviving time.
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

/// An eventually constant infinite word `prefix tail tail tail ...`.
///
/// The stored form is canonical: the prefix never ends with the tail letter,
/// so two ECSeq values denote the same infinite word iff they compare equal.
/// Positions are 1-based.
class ECSeq {
 public:
  ECSeq() = default;
  ECSeq(Word prefix, Symbol tail) : prefix_(std::move(prefix)), tail_(tail) {
    while (!prefix_.empty() && prefix_.back() == tail_) prefix_.pop_back();
  }

  static ECSeq constant(Symbol s) { return ECSeq({}, s); }

  const Word& prefix() const { return prefix_; }
  std::size_t prefix_length() const { return prefix_.size(); }
  Symbol tail() const { return tail_; }

  Symbol at(std::size_t pos) const {
    return pos <= prefix_.size() ? prefix_[pos - 1] : tail_;
  }

  /// First `len` letters as a finite word.
  Word head(std::size_t len) const {
    Word w;
    w.reserve(len);
    for (std::size_t i = 1; i <= len; ++i) w.push_back(at(i));
    return w;
  }

  friend bool operator==(const ECSeq&, const ECSeq&) = default;
  friend auto operator<=>(const ECSeq&, const ECSeq&) = default;

 private:
  Word prefix_;
  Symbol tail_ = 1;
};

inline ECSeq canonicalize(Word prefix, Symbol tail) { return ECSeq(std::move(prefix), tail); }

/// |x ∧ y|: length of the longest common prefix, kInfinity when x == y.
inline std::size_t common_prefix_len(const ECSeq& x, const ECSeq& y) {
  if (x == y) return kInfinity;
  const std::size_t bound = std::max(x.prefix_length(), y.prefix_length()) + 1;
  for (std::size_t i = 1; i <= bound; ++i) {
    if (x.at(i) != y.at(i)) return i - 1;
  }
  // Unequal canonical words differ within the longer prefix or at the tails.
  throw std::logic_error("common_prefix_len: canonical words agree past their prefixes");
}

/// σ^k: drops the first k letters.
inline ECSeq shift(const ECSeq& x, std::size_t k) {
  if (k >= x.prefix_length()) return ECSeq::constant(x.tail());
  return ECSeq(Word(x.prefix().begin() + static_cast<std::ptrdiff_t>(k), x.prefix().end()), x.tail());
}

/// Prepends a finite word.
inline ECSeq concat(const Word& w, const ECSeq& x) {
  Word p = w;
  p.insert(p.end(), x.prefix().begin(), x.prefix().end());
  return ECSeq(std::move(p), x.tail());
}

/// Letterwise relabeling: result_i = h[x_i]. `h` is indexed by symbol.
inline ECSeq relabel(const ECSeq& x, const std::vector<Symbol>& h) {
  Word p;
  p.reserve(x.prefix_length());
  for (Symbol s : x.prefix()) p.push_back(h.at(static_cast<std::size_t>(s)));
  return ECSeq(std::move(p), h.at(static_cast<std::size_t>(x.tail())));
}

/// Text form `1.3.(2)^inf`; the empty prefix prints as `(2)^inf`.
inline std::string format(const ECSeq& x) {
  std::string out;
  for (Symbol s : x.prefix()) {
    out += std::to_string(s);
    out += '.';
  }
  out += '(' + std::to_string(x.tail()) + ")^inf";
  return out;
}

inline std::string format(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(w[i]);
  }
  return out;
}

/// Parses the text form. Prefix letters may be separated by dots or blanks.
/// Throws std::invalid_argument on malformed text or letters outside 1..n.
inline ECSeq parse_ecseq(std::string_view text, int n) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse sequence '" + std::string(text) + "': " + why);
  };
  const auto open = text.find('(');
  const auto close = text.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    fail("expected '(t)^inf' tail");
  }
  std::string_view rest = text.substr(close + 1);
  while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\n')) rest.remove_suffix(1);
  if (rest != "^inf") fail("tail must be followed by '^inf'");

  auto to_symbol = [&](std::string_view tok) {
    if (tok.empty() || tok.size() > 9 ||
        !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail("bad letter '" + std::string(tok) + "'");
    }
    const int v = std::stoi(std::string(tok));
    if (v < 1 || v > n) fail("letter " + std::to_string(v) + " outside 1.." + std::to_string(n));
    return v;
  };

  Word prefix;
  std::string_view head = text.substr(0, open);
  std::size_t i = 0;
  while (i < head.size()) {
    if (head[i] == '.' || head[i] == ' ' || head[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < head.size() && head[j] != '.' && head[j] != ' ' && head[j] != '\t') ++j;
    prefix.push_back(to_symbol(head.substr(i, j - i)));
    i = j;
  }
  std::string_view tail_tok = text.substr(open + 1, close - open - 1);
  return ECSeq(std::move(prefix), to_symbol(tail_tok));
}

/// Every canonical ω t^∞ with |ω| <= depth and the given tail, ordered by
/// prefix length and then lexicographically.
inline std::vector<ECSeq> enumerate_with_tail(int n, std::size_t depth, Symbol tail) {
  std::vector<ECSeq> out;
  std::vector<Word> layer{Word{}};
  out.emplace_back(Word{}, tail);
  for (std::size_t len = 1; len <= depth; ++len) {
    std::vector<Word> next;
    next.reserve(layer.size() * static_cast<std::size_t>(n));
    for (const Word& w : layer) {
      for (Symbol s = 1; s <= n; ++s) {
        Word v = w;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    }
    for (const Word& w : next) {
      if (w.back() != tail) out.emplace_back(w, tail);
    }
    layer = std::move(next);
  }
  return out;
}

/// {ω t^∞ : |ω| <= depth, t ∈ Σ} without duplicates, grouped by tail.
inline std::vector<ECSeq> enumerate_eventually_constant(int n, std::size_t depth) {
  std::vector<ECSeq> out;
  for (Symbol t = 1; t <= n; ++t) {
    auto part = enumerate_with_tail(n, depth, t);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace gasketlab
