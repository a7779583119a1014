#include "parafree/word.hpp"

#include "parafree/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace parafree {

namespace {

// Exponents beyond this would expand to unreasonably long words.
constexpr std::int64_t kMaxLiteralExponent = 1'000'000;

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLetter: return "InvalidLetter";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::EmptyWord: return "EmptyWordError";
    case ErrorCode::WordSyntax: return "WordSyntaxError";
    case ErrorCode::Shape: return "ShapeError";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::TrivialEdgeWord: return "TrivialEdgeWord";
    case ErrorCode::MissingEdgeWord: return "ValidationError";
    case ErrorCode::UnexpectedEdgeWord: return "ValidationError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownVertexRef: return "UnknownVertexRef";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::EdgeNotCyclic: return "EdgeNotCyclic";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::IncompatibleTargets: return "IncompatibleTargets";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::Precondition: return "PreconditionError";
    case ErrorCode::Json: return "JsonError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Error";
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  return std::all_of(name.begin(), name.end(), is_ident_char);
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidName, "alphabet must have rank >= 1");
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n))
      throw Error(ErrorCode::InvalidName, "invalid generator name '" + n + "'");
    if (!seen.insert(n).second)
      throw Error(ErrorCode::InvalidName, "repeated generator name '" + n + "'");
  }
}

std::optional<std::size_t> Alphabet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Word Word::from_letters(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) push_reduced(out, l);
  return Word(std::move(out));
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = -l;
  return Word(std::move(out));
}

Word Word::pow(std::int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  std::vector<Letter> out;
  if (k == 0 || empty()) return Word(std::move(out));
  // Powers of a non-cyclically-reduced word cancel at the seams; reduce
  // through the conjugate form instead of concatenating blindly.
  auto [core, conj] = cyclic_reduce(*this);
  out.reserve(2 * conj.size() + core.size() * static_cast<std::size_t>(k));
  out.insert(out.end(), conj.letters_.begin(), conj.letters_.end());
  for (std::int64_t i = 0; i < k; ++i)
    out.insert(out.end(), core.letters_.begin(), core.letters_.end());
  for (auto it = conj.letters_.rbegin(); it != conj.letters_.rend(); ++it) out.push_back(-*it);
  return Word(std::move(out));
}

std::size_t Word::support_rank() const {
  std::size_t r = 0;
  for (Letter l : letters_) r = std::max(r, generator_of(l) + 1);
  return r;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> out = a.letters_;
  out.reserve(a.size() + b.size());
  for (Letter l : b.letters_) push_reduced(out, l);
  return Word(std::move(out));
}

Word free_reduce(std::span<const Letter> raw, std::size_t rank) {
  for (Letter l : raw) {
    if (l == 0 || generator_of(l) >= rank)
      throw Error(ErrorCode::InvalidLetter,
                  "letter " + std::to_string(l) + " outside rank " + std::to_string(rank));
  }
  return Word::from_letters(raw);
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  auto letters = w.letters();
  return {Word::from_letters(letters.subspan(lo, hi - lo)),
          Word::from_letters(letters.subspan(0, lo))};
}

RootDecomposition primitive_root(const Word& w) {
  if (w.empty()) throw Error(ErrorCode::EmptyWord, "the identity has no root decomposition");
  auto [core, conj] = cyclic_reduce(w);
  auto s = core.letters();
  const std::size_t n = s.size();
  // Prefix function; the smallest period of s is n - pi[n-1].
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && s[i] != s[k]) k = pi[k - 1];
    if (s[i] == s[k]) ++k;
    pi[i] = k;
  }
  std::size_t period = n - pi[n - 1];
  if (n % period != 0) period = n;
  return {std::move(conj), Word::from_letters(s.first(period)),
          static_cast<std::int64_t>(n / period)};
}

ExponentVector exponent_vector(const Word& w, std::size_t rank) {
  ExponentVector v = ExponentVector::Zero(static_cast<Eigen::Index>(rank));
  for (Letter l : w.letters()) {
    std::size_t g = generator_of(l);
    if (g >= rank)
      throw Error(ErrorCode::InvalidLetter, "letter outside rank " + std::to_string(rank));
    v(static_cast<Eigen::Index>(g)) += sign_of(l);
  }
  return v;
}

std::vector<Letter> parse_letters(std::string_view text, const Alphabet& alphabet) {
  std::vector<Letter> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (true) {
    while (i < n && is_space(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    if (!is_ident_start(text[i]))
      throw WordSyntaxError(i, "expected generator name at position " + std::to_string(i));
    while (i < n && is_ident_char(text[i])) ++i;
    std::string_view name = text.substr(start, i - start);
    auto gen = alphabet.index_of(name);
    if (!gen)
      throw WordSyntaxError(start, "unknown generator '" + std::string(name) + "' at position " +
                                       std::to_string(start));
    std::int64_t exponent = 1;
    if (i < n && text[i] == '^') {
      ++i;
      const std::size_t exp_start = i;
      std::size_t j = i;
      if (j < n && (text[j] == '-' || text[j] == '+')) ++j;
      const std::size_t digits = j;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == digits)
        throw WordSyntaxError(exp_start, "expected integer exponent at position " +
                                             std::to_string(exp_start));
      const char* first = text.data() + digits;
      const char* last = text.data() + j;
      std::int64_t magnitude = 0;
      auto [ptr, ec] = std::from_chars(first, last, magnitude);
      if (ec != std::errc() || ptr != last || magnitude > kMaxLiteralExponent)
        throw WordSyntaxError(exp_start, "exponent out of range at position " +
                                             std::to_string(exp_start));
      if (magnitude == 0)
        throw WordSyntaxError(exp_start, "zero exponent at position " + std::to_string(exp_start));
      exponent = text[exp_start] == '-' ? -magnitude : magnitude;
      i = j;
    }
    if (i < n && !is_space(text[i]))
      throw WordSyntaxError(i, "unexpected character at position " + std::to_string(i));
    const Letter l = make_letter(*gen, exponent > 0 ? 1 : -1);
    for (std::int64_t k = 0; k < (exponent > 0 ? exponent : -exponent); ++k) out.push_back(l);
  }
  return out;
}

Word parse_word(std::string_view text, const Alphabet& alphabet) {
  return Word::from_letters(parse_letters(text, alphabet));
}

std::string format_word(const Word& w, const Alphabet& alphabet) {
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const std::size_t g = generator_of(w[i]);
    if (!out.empty()) out += ' ';
    out += g < alphabet.rank() ? alphabet.name(g) : "x" + std::to_string(g + 1);
    const auto run = static_cast<std::int64_t>(j - i) * sign_of(w[i]);
    if (run != 1) out += '^' + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace parafree
