#pragma once

#include "ncmodel/linalg.hpp"

#include <compare>
#include <string>
#include <vector>

namespace ncmodel {

// Element of the free semigroup on n generators. Letters are 1-based; the
// empty word is the identity g0.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<int> letters);
  Word(std::initializer_list<int> letters) : Word(std::vector<int>(letters)) {}

  const std::vector<int>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  int max_letter() const;
  Word reversed() const;
  std::string str() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word& a, const Word& b) = default;
  // length first, then lexicographic
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::vector<int> letters_;
};

std::vector<Word> enumerate_words(int n, int max_len);

enum class Side { left, right };

// Basis e_alpha, |alpha| <= N, in length-lexicographic order.
class TruncatedFock {
 public:
  TruncatedFock(int n, int N);

  int n() const { return n_; }
  int degree() const { return N_; }
  Index dim() const { return dim_; }
  Index slice_offset(int k) const { return offsets_[k]; }
  Index slice_size(int k) const { return powers_[k]; }
  Index power(int k) const { return powers_[k]; }

  Word word(Index idx) const;
  std::vector<Word> basis() const;
  Index index_of(const Word& w) const;  // -1 if |w| > N
  int length(Index idx) const { return len_[idx]; }
  Index local(Index idx) const { return idx - offsets_[len_[idx]]; }
  Index at(int len, Index local) const { return offsets_[len] + local; }

  Index left_child(Index idx, int i) const;   // g_i alpha, -1 past the top
  Index right_child(Index idx, int i) const;  // alpha g_i, -1 past the top
  Index concat(Index a, Index b) const;       // alpha beta, -1 past the top
  Index drop_first(Index idx) const;          // requires |alpha| >= 1
  Index drop_last(Index idx) const;
  int first_letter(Index idx) const;
  int last_letter(Index idx) const;
  Index reversed(Index idx) const { return rev_[idx]; }

 private:
  int n_;
  int N_;
  Index dim_;
  std::vector<Index> offsets_;
  std::vector<Index> powers_;
  std::vector<int> len_;
  std::vector<Index> rev_;
};

Mat creation_matrix(const TruncatedFock& fock, Side side, int i);
Mat flip_unitary(const TruncatedFock& fock);

// (C (x) I_block) x and (C^* (x) I_block) x for a creation operator C without
// forming C. Rows of x are indexed by basis_index * block + inner.
Mat apply_creation(const TruncatedFock& fock, Side side, int i, const Mat& x, Index block = 1);
Mat apply_creation_adjoint(const TruncatedFock& fock, Side side, int i, const Mat& x,
                           Index block = 1);

// Left creation by a word: (S_w (x) I) x and (S_w^* (x) I) x.
Mat apply_left_word(const TruncatedFock& fock, const Word& w, const Mat& x, Index block = 1);
Mat apply_left_word_adjoint(const TruncatedFock& fock, const Word& w, const Mat& x,
                            Index block = 1);

}  // namespace ncmodel
