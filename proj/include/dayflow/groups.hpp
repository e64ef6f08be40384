#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dayflow {

// An element in canonical normal form. The encoding depends on the group
// kind (see GroupSpec); equal elements always have identical encodings, so
// Element can be used directly as an ordered map key.
struct Element {
  std::vector<std::int64_t> nf;

  friend auto operator<=>(const Element&, const Element&) = default;
  friend bool operator==(const Element&, const Element&) = default;
};

enum class GroupKind {
  Integers,       // Z^d
  Cyclic,         // Z/n
  Symmetric,      // S_n
  Free,           // F_k
  Heisenberg,     // integer Heisenberg group
  Lamplighter,    // Z/2 wr Z
  Naturals,       // (N, +), a monoid without inverses
  DirectProduct,
};

struct Generator {
  std::string name;
  Element element;
  // Name of the generator's inverse, empty for inverse-free semigroups.
  std::string inverse_name;
};

// A word over generator names; [s, t] denotes the product s*t.
using Word = std::vector<std::string>;

// Two words with equal value in the group.
struct Relation {
  Word lhs;
  Word rhs;
};

inline constexpr std::size_t kDefaultEnumerationCap = 200000;

// The enumeration cap used when callers do not pass one. Reads DAYFLOW_CAP
// from the environment on every call, falling back to kDefaultEnumerationCap.
std::size_t default_enumeration_cap();

namespace detail {
class GroupImpl;
}

// A finitely generated group or semigroup with a pinned generating set.
//
// Normal forms and generator names per kind:
//   Integers{d}    (x_1..x_d); generators a,b,c,... are +unit vectors and
//                  A,B,C,... their inverses.
//   Cyclic{n}      (k) with 0 <= k < n; a = 1, A = n-1 (A omitted for n <= 2).
//   Symmetric{n}   permutation table p with p[i] the image of i, product
//                  (gh)(i) = g(h(i)); generators s1..s{n-1} swap i-1 and i.
//   Free{k}        reduced word of letters +-(i+1); a,b,... and inverses A,B,...
//   Heisenberg     (a,b,c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab');
//                  generators a,A = +-(1,0,0) and b,B = +-(0,1,0).
//   Lamplighter    (position, lit lamps in increasing order); t toggles the
//                  lamp at the cursor, s and S move it by +1 and -1.
//   Naturals       (n) with n >= 0 under addition; single generator a = 1.
//   DirectProduct  concatenation of (length, factor normal form) blocks;
//                  generator "i.g" is generator g of factor i.
class GroupSpec {
 public:
  static GroupSpec integers(int dim);
  static GroupSpec cyclic(std::int64_t order);
  static GroupSpec symmetric(int n);
  static GroupSpec free_group(int rank);
  static GroupSpec heisenberg();
  static GroupSpec lamplighter();
  static GroupSpec naturals();
  static GroupSpec direct_product(std::vector<GroupSpec> factors);

  GroupKind kind() const;
  // Kind-specific size parameter: dim, order, n, or rank; 0 otherwise.
  std::int64_t parameter() const;
  const std::vector<GroupSpec>& factors() const;

  // Short structural description such as "Z^2" or "F_2"; two specs are
  // equal iff their descriptions are.
  const std::string& name() const;

  bool has_inverses() const;
  // Number of elements for finite groups.
  std::optional<std::uint64_t> order() const;

  const std::vector<Generator>& generators() const;
  const Generator& generator(std::string_view name) const;
  bool has_generator(std::string_view name) const;

  Element identity() const;
  bool contains(const Element& g) const;
  // Throws InvalidArgument unless contains(g).
  void check(const Element& g) const;

  Element multiply(const Element& g, const Element& h) const;
  Element invert(const Element& g) const;
  Element evaluate(const Word& word) const;

  // Left-invariant word (quasi-)metric: the length of a shortest word w
  // with g*w = h, or nullopt when no such word exists.
  std::optional<std::uint64_t> distance(const Element& g, const Element& h) const;

  // Defining relations (a finite sample for Lamplighter), used to validate
  // actions.
  std::vector<Relation> relations() const;

  // DirectProduct only.
  std::vector<Element> split(const Element& g) const;
  Element join(std::span<const Element> parts) const;

  std::string format(const Element& g) const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.name() == b.name(); }

 private:
  explicit GroupSpec(std::shared_ptr<const detail::GroupImpl> impl);
  std::shared_ptr<const detail::GroupImpl> impl_;
};

// Elements of word length <= radius, sorted by normal form.
std::vector<Element> ball(const GroupSpec& spec, std::size_t radius,
                          std::size_t cap = default_enumeration_cap());

std::optional<std::uint64_t> word_metric(const Element& g, const Element& h,
                                         const GroupSpec& spec);

// Breadth-first search for distance(g, h) that ignores kind-specific closed
// forms. Gives up with ResourceLimit after visiting `cap` elements.
std::optional<std::uint64_t> bfs_distance(const GroupSpec& spec, const Element& g,
                                          const Element& h,
                                          std::size_t cap = default_enumeration_cap());

// Word in generator names whose value is g, found by breadth-first search.
Word shortest_word(const GroupSpec& spec, const Element& g,
                   std::size_t cap = default_enumeration_cap());

// Inverse of a word in a group: reversed, each letter replaced by its inverse.
Word inverse_word(const GroupSpec& spec, const Word& w);

}  // namespace dayflow
