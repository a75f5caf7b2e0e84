#include "ncmodel/fock.hpp"

#include "ncmodel/error.hpp"

#include <algorithm>

namespace ncmodel {

namespace {
constexpr Index kMaxFockDim = Index(1) << 24;
}

Word::Word(std::vector<int> letters) : letters_(std::move(letters)) {
  for (int l : letters_)
    if (l < 1) throw Error(ErrorKind::invalid_parameter, "word letters are 1-based");
}

int Word::max_letter() const {
  return letters_.empty() ? 0 : *std::max_element(letters_.begin(), letters_.end());
}

Word Word::reversed() const { return Word(std::vector<int>(letters_.rbegin(), letters_.rend())); }

std::string Word::str() const {
  if (letters_.empty()) return "g0";
  std::string s;
  for (int l : letters_) s += "g" + std::to_string(l);
  return s;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<int> l = a.letters_;
  l.insert(l.end(), b.letters_.begin(), b.letters_.end());
  return Word(std::move(l));
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return a.letters_ <=> b.letters_;
}

std::vector<Word> enumerate_words(int n, int max_len) {
  if (n < 1 || max_len < 0)
    throw Error(ErrorKind::invalid_parameter, "enumerate_words needs n >= 1 and max_len >= 0");
  return TruncatedFock(n, max_len).basis();
}

TruncatedFock::TruncatedFock(int n, int N) : n_(n), N_(N) {
  if (n < 1 || N < 0) throw Error(ErrorKind::invalid_parameter, "Fock space needs n >= 1 and N >= 0");
  Index total = 0;
  Index p = 1;
  for (int k = 0; k <= N; ++k) {
    offsets_.push_back(total);
    powers_.push_back(p);
    total += p;
    if (total > kMaxFockDim)
      throw Error(ErrorKind::invalid_parameter, "truncated Fock space too large");
    p *= n;
  }
  offsets_.push_back(total);
  powers_.push_back(p);
  dim_ = total;

  len_.resize(dim_);
  for (int k = 0; k <= N; ++k)
    std::fill(len_.begin() + offsets_[k], len_.begin() + offsets_[k + 1], k);

  rev_.resize(dim_);
  for (Index idx = 0; idx < dim_; ++idx) {
    int k = len_[idx];
    Index loc = idx - offsets_[k];
    Index r = 0;
    for (int j = 0; j < k; ++j) {
      r = r * n + loc % n;
      loc /= n;
    }
    rev_[idx] = offsets_[k] + r;
  }
}

Word TruncatedFock::word(Index idx) const {
  int k = len_[idx];
  Index loc = local(idx);
  std::vector<int> letters(k);
  for (int j = k - 1; j >= 0; --j) {
    letters[j] = static_cast<int>(loc % n_) + 1;
    loc /= n_;
  }
  return Word(std::move(letters));
}

std::vector<Word> TruncatedFock::basis() const {
  std::vector<Word> out;
  out.reserve(dim_);
  for (Index idx = 0; idx < dim_; ++idx) out.push_back(word(idx));
  return out;
}

Index TruncatedFock::index_of(const Word& w) const {
  if (w.length() > N_) return -1;
  Index loc = 0;
  for (int l : w.letters()) {
    if (l > n_) throw Error(ErrorKind::invalid_parameter, "word letter exceeds generator count");
    loc = loc * n_ + (l - 1);
  }
  return offsets_[w.length()] + loc;
}

Index TruncatedFock::left_child(Index idx, int i) const {
  int k = len_[idx];
  if (k >= N_) return -1;
  return offsets_[k + 1] + (i - 1) * powers_[k] + local(idx);
}

Index TruncatedFock::right_child(Index idx, int i) const {
  int k = len_[idx];
  if (k >= N_) return -1;
  return offsets_[k + 1] + local(idx) * n_ + (i - 1);
}

Index TruncatedFock::concat(Index a, Index b) const {
  int ka = len_[a], kb = len_[b];
  if (ka + kb > N_) return -1;
  return offsets_[ka + kb] + local(a) * powers_[kb] + local(b);
}

Index TruncatedFock::drop_first(Index idx) const {
  int k = len_[idx];
  return offsets_[k - 1] + local(idx) % powers_[k - 1];
}

Index TruncatedFock::drop_last(Index idx) const {
  int k = len_[idx];
  return offsets_[k - 1] + local(idx) / n_;
}

int TruncatedFock::first_letter(Index idx) const {
  int k = len_[idx];
  return static_cast<int>(local(idx) / powers_[k - 1]) + 1;
}

int TruncatedFock::last_letter(Index idx) const { return static_cast<int>(local(idx) % n_) + 1; }

static void check_letter(const TruncatedFock& fock, int i) {
  if (i < 1 || i > fock.n())
    throw Error(ErrorKind::invalid_parameter, "generator index out of range");
}

static Index child(const TruncatedFock& fock, Side side, Index idx, int i) {
  return side == Side::left ? fock.left_child(idx, i) : fock.right_child(idx, i);
}

Mat creation_matrix(const TruncatedFock& fock, Side side, int i) {
  check_letter(fock, i);
  Mat m = Mat::Zero(fock.dim(), fock.dim());
  for (Index idx = 0; idx < fock.dim(); ++idx) {
    Index c = child(fock, side, idx, i);
    if (c >= 0) m(c, idx) = 1.0;
  }
  return m;
}

Mat flip_unitary(const TruncatedFock& fock) {
  Mat m = Mat::Zero(fock.dim(), fock.dim());
  for (Index idx = 0; idx < fock.dim(); ++idx) m(fock.reversed(idx), idx) = 1.0;
  return m;
}

Mat apply_creation(const TruncatedFock& fock, Side side, int i, const Mat& x, Index block) {
  check_letter(fock, i);
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (Index idx = 0; idx < fock.dim(); ++idx) {
    Index c = child(fock, side, idx, i);
    if (c >= 0) out.middleRows(c * block, block) = x.middleRows(idx * block, block);
  }
  return out;
}

Mat apply_creation_adjoint(const TruncatedFock& fock, Side side, int i, const Mat& x,
                           Index block) {
  check_letter(fock, i);
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (Index idx = 0; idx < fock.dim(); ++idx) {
    Index c = child(fock, side, idx, i);
    if (c >= 0) out.middleRows(idx * block, block) = x.middleRows(c * block, block);
  }
  return out;
}

Mat apply_left_word(const TruncatedFock& fock, const Word& w, const Mat& x, Index block) {
  Index wi = fock.index_of(w);
  Mat out = Mat::Zero(x.rows(), x.cols());
  if (wi < 0) return out;
  for (Index idx = 0; idx < fock.dim(); ++idx) {
    Index c = fock.concat(wi, idx);
    if (c >= 0) out.middleRows(c * block, block) = x.middleRows(idx * block, block);
  }
  return out;
}

Mat apply_left_word_adjoint(const TruncatedFock& fock, const Word& w, const Mat& x,
                            Index block) {
  Index wi = fock.index_of(w);
  Mat out = Mat::Zero(x.rows(), x.cols());
  if (wi < 0) return out;
  for (Index idx = 0; idx < fock.dim(); ++idx) {
    Index c = fock.concat(wi, idx);
    if (c >= 0) out.middleRows(idx * block, block) = x.middleRows(c * block, block);
  }
  return out;
}

}  // namespace ncmodel
