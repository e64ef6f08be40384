#include "dayflow/groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "dayflow/errors.hpp"

namespace dayflow {

std::size_t default_enumeration_cap() {
  if (const char* env = std::getenv("DAYFLOW_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return kDefaultEnumerationCap;
}

namespace detail {

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;

  GroupKind kind;
  std::int64_t parameter = 0;
  std::string name;
  bool has_inverses = true;
  std::vector<Generator> generators;
  std::vector<GroupSpec> factors;

  virtual Element identity() const = 0;
  virtual bool contains(const Element& g) const = 0;
  virtual Element multiply(const Element& g, const Element& h) const = 0;
  virtual Element invert(const Element& g) const = 0;
  virtual std::optional<std::uint64_t> order() const { return std::nullopt; }
  virtual std::vector<Relation> relations() const { return {}; }
  virtual std::string format(const Element& g) const {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < g.nf.size(); ++i) out << (i ? "," : "") << g.nf[i];
    out << ')';
    return out.str();
  }
  // Closed-form word length of g^-1 h when known; empty optional means "use BFS".
  virtual std::optional<std::optional<std::uint64_t>> fast_distance(const Element&,
                                                                    const Element&) const {
    return std::nullopt;
  }
};

namespace {

std::string letter(int i, bool inverse) {
  return std::string(1, static_cast<char>((inverse ? 'A' : 'a') + i));
}

Word commutator(const std::string& x, const std::string& y, const std::string& xi,
                const std::string& yi) {
  return {x, y, xi, yi};
}

Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

class IntegersImpl final : public GroupImpl {
 public:
  explicit IntegersImpl(int dim) {
    kind = GroupKind::Integers;
    parameter = dim;
    name = dim == 1 ? "Z" : "Z^" + std::to_string(dim);
    for (int i = 0; i < dim; ++i) {
      Element plus{std::vector<std::int64_t>(dim, 0)};
      Element minus = plus;
      plus.nf[i] = 1;
      minus.nf[i] = -1;
      generators.push_back({letter(i, false), plus, letter(i, true)});
      generators.push_back({letter(i, true), minus, letter(i, false)});
    }
  }
  Element identity() const override { return {std::vector<std::int64_t>(parameter, 0)}; }
  bool contains(const Element& g) const override {
    return static_cast<std::int64_t>(g.nf.size()) == parameter;
  }
  Element multiply(const Element& g, const Element& h) const override {
    Element out = g;
    for (std::size_t i = 0; i < out.nf.size(); ++i) out.nf[i] += h.nf[i];
    return out;
  }
  Element invert(const Element& g) const override {
    Element out = g;
    for (auto& x : out.nf) x = -x;
    return out;
  }
  std::vector<Relation> relations() const override {
    std::vector<Relation> out;
    for (int i = 0; i < parameter; ++i)
      for (int j = i + 1; j < parameter; ++j)
        out.push_back({commutator(letter(i, false), letter(j, false), letter(i, true),
                                  letter(j, true)),
                       {}});
    return out;
  }
  std::optional<std::optional<std::uint64_t>> fast_distance(const Element& g,
                                                            const Element& h) const override {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < g.nf.size(); ++i)
      total += static_cast<std::uint64_t>(std::llabs(h.nf[i] - g.nf[i]));
    return std::optional<std::uint64_t>(total);
  }
};

class CyclicImpl final : public GroupImpl {
 public:
  explicit CyclicImpl(std::int64_t n) {
    kind = GroupKind::Cyclic;
    parameter = n;
    name = "C_" + std::to_string(n);
    if (n <= 2) {
      generators.push_back({"a", Element{{1 % n}}, "a"});
    } else {
      generators.push_back({"a", Element{{1}}, "A"});
      generators.push_back({"A", Element{{n - 1}}, "a"});
    }
  }
  Element identity() const override { return Element{{0}}; }
  bool contains(const Element& g) const override {
    return g.nf.size() == 1 && g.nf[0] >= 0 && g.nf[0] < parameter;
  }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{{(g.nf[0] + h.nf[0]) % parameter}};
  }
  Element invert(const Element& g) const override {
    return Element{{(parameter - g.nf[0]) % parameter}};
  }
  std::optional<std::uint64_t> order() const override {
    return static_cast<std::uint64_t>(parameter);
  }
  std::vector<Relation> relations() const override {
    return {{Word(static_cast<std::size_t>(parameter), "a"), {}}};
  }
  std::optional<std::optional<std::uint64_t>> fast_distance(const Element& g,
                                                            const Element& h) const override {
    const std::int64_t k = ((h.nf[0] - g.nf[0]) % parameter + parameter) % parameter;
    const std::int64_t len = parameter <= 2 ? k : std::min(k, parameter - k);
    return std::optional<std::uint64_t>(static_cast<std::uint64_t>(len));
  }
};

class SymmetricImpl final : public GroupImpl {
 public:
  explicit SymmetricImpl(int n) {
    kind = GroupKind::Symmetric;
    parameter = n;
    name = "S_" + std::to_string(n);
    for (int i = 1; i < n; ++i) {
      Element s = identity();
      std::swap(s.nf[i - 1], s.nf[i]);
      const std::string gen = "s" + std::to_string(i);
      generators.push_back({gen, s, gen});
    }
  }
  Element identity() const override {
    Element e{std::vector<std::int64_t>(parameter)};
    std::iota(e.nf.begin(), e.nf.end(), 0);
    return e;
  }
  bool contains(const Element& g) const override {
    if (static_cast<std::int64_t>(g.nf.size()) != parameter) return false;
    std::vector<bool> seen(parameter, false);
    for (auto x : g.nf) {
      if (x < 0 || x >= parameter || seen[x]) return false;
      seen[x] = true;
    }
    return true;
  }
  Element multiply(const Element& g, const Element& h) const override {
    Element out{std::vector<std::int64_t>(parameter)};
    for (std::int64_t i = 0; i < parameter; ++i) out.nf[i] = g.nf[h.nf[i]];
    return out;
  }
  Element invert(const Element& g) const override {
    Element out{std::vector<std::int64_t>(parameter)};
    for (std::int64_t i = 0; i < parameter; ++i) out.nf[g.nf[i]] = i;
    return out;
  }
  std::optional<std::uint64_t> order() const override {
    std::uint64_t f = 1;
    for (std::int64_t i = 2; i <= parameter; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  }
  std::vector<Relation> relations() const override {
    std::vector<Relation> out;
    const int m = static_cast<int>(parameter) - 1;
    auto s = [](int i) { return "s" + std::to_string(i); };
    for (int i = 1; i <= m; ++i) {
      out.push_back({{s(i), s(i)}, {}});
      if (i < m) out.push_back({{s(i), s(i + 1), s(i), s(i + 1), s(i), s(i + 1)}, {}});
      for (int j = i + 2; j <= m; ++j) out.push_back({{s(i), s(j), s(i), s(j)}, {}});
    }
    return out;
  }
};

class FreeImpl final : public GroupImpl {
 public:
  explicit FreeImpl(int rank) {
    kind = GroupKind::Free;
    parameter = rank;
    name = "F_" + std::to_string(rank);
    for (int i = 0; i < rank; ++i) {
      generators.push_back({letter(i, false), Element{{i + 1}}, letter(i, true)});
      generators.push_back({letter(i, true), Element{{-(i + 1)}}, letter(i, false)});
    }
  }
  Element identity() const override { return {}; }
  bool contains(const Element& g) const override {
    for (std::size_t i = 0; i < g.nf.size(); ++i) {
      const auto x = g.nf[i];
      if (x == 0 || std::llabs(x) > parameter) return false;
      if (i > 0 && g.nf[i - 1] == -x) return false;
    }
    return true;
  }
  Element multiply(const Element& g, const Element& h) const override {
    std::size_t cancel = 0;
    while (cancel < g.nf.size() && cancel < h.nf.size() &&
           g.nf[g.nf.size() - 1 - cancel] == -h.nf[cancel])
      ++cancel;
    Element out;
    out.nf.reserve(g.nf.size() + h.nf.size() - 2 * cancel);
    out.nf.insert(out.nf.end(), g.nf.begin(), g.nf.end() - static_cast<std::ptrdiff_t>(cancel));
    out.nf.insert(out.nf.end(), h.nf.begin() + static_cast<std::ptrdiff_t>(cancel), h.nf.end());
    return out;
  }
  Element invert(const Element& g) const override {
    Element out;
    out.nf.reserve(g.nf.size());
    for (auto it = g.nf.rbegin(); it != g.nf.rend(); ++it) out.nf.push_back(-*it);
    return out;
  }
  std::string format(const Element& g) const override {
    if (g.nf.empty()) return "e";
    std::string out;
    for (auto x : g.nf) out += letter(static_cast<int>(std::llabs(x)) - 1, x < 0);
    return out;
  }
  std::optional<std::optional<std::uint64_t>> fast_distance(const Element& g,
                                                            const Element& h) const override {
    return std::optional<std::uint64_t>(multiply(invert(g), h).nf.size());
  }
};

class HeisenbergImpl final : public GroupImpl {
 public:
  HeisenbergImpl() {
    kind = GroupKind::Heisenberg;
    name = "H_3(Z)";
    generators = {{"a", Element{{1, 0, 0}}, "A"},
                  {"A", Element{{-1, 0, 0}}, "a"},
                  {"b", Element{{0, 1, 0}}, "B"},
                  {"B", Element{{0, -1, 0}}, "b"}};
  }
  Element identity() const override { return Element{{0, 0, 0}}; }
  bool contains(const Element& g) const override { return g.nf.size() == 3; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{{g.nf[0] + h.nf[0], g.nf[1] + h.nf[1], g.nf[2] + h.nf[2] + g.nf[0] * h.nf[1]}};
  }
  Element invert(const Element& g) const override {
    return Element{{-g.nf[0], -g.nf[1], -g.nf[2] + g.nf[0] * g.nf[1]}};
  }
  std::vector<Relation> relations() const override {
    // The commutator [a,b] is central.
    const Word c = commutator("a", "b", "A", "B");
    const Word ci = commutator("b", "a", "B", "A");
    return {{concat({c, {"a"}, ci, {"A"}}), {}}, {concat({c, {"b"}, ci, {"B"}}), {}}};
  }
};

class LamplighterImpl final : public GroupImpl {
 public:
  LamplighterImpl() {
    kind = GroupKind::Lamplighter;
    name = "Z2wrZ";
    generators = {{"t", Element{{0, 0}}, "t"}, {"s", Element{{1}}, "S"}, {"S", Element{{-1}}, "s"}};
  }
  Element identity() const override { return Element{{0}}; }
  bool contains(const Element& g) const override {
    if (g.nf.empty()) return false;
    for (std::size_t i = 2; i < g.nf.size(); ++i)
      if (g.nf[i - 1] >= g.nf[i]) return false;
    return true;
  }
  // (f, p)(g, q) = (f xor shift_p(g), p + q)
  Element multiply(const Element& g, const Element& h) const override {
    const std::int64_t p = g.nf[0];
    std::vector<std::int64_t> shifted;
    shifted.reserve(h.nf.size());
    for (std::size_t i = 1; i < h.nf.size(); ++i) shifted.push_back(h.nf[i] + p);
    Element out{{p + h.nf[0]}};
    std::set_symmetric_difference(g.nf.begin() + 1, g.nf.end(), shifted.begin(), shifted.end(),
                                  std::back_inserter(out.nf));
    return out;
  }
  Element invert(const Element& g) const override {
    const std::int64_t p = g.nf[0];
    Element out{{-p}};
    for (std::size_t i = 1; i < g.nf.size(); ++i) out.nf.push_back(g.nf[i] - p);
    return out;
  }
  std::vector<Relation> relations() const override {
    std::vector<Relation> out{{{"t", "t"}, {}}};
    for (std::size_t k = 1; k <= 3; ++k) {
      Word conj(k, "s");
      conj.push_back("t");
      conj.insert(conj.end(), k, "S");
      out.push_back({concat({{"t"}, conj, {"t"}, conj}), {}});
    }
    return out;
  }
  std::string format(const Element& g) const override {
    std::ostringstream out;
    out << "(pos=" << g.nf[0] << ",lamps={";
    for (std::size_t i = 1; i < g.nf.size(); ++i) out << (i > 1 ? "," : "") << g.nf[i];
    out << "})";
    return out.str();
  }
};

class NaturalsImpl final : public GroupImpl {
 public:
  NaturalsImpl() {
    kind = GroupKind::Naturals;
    name = "N";
    has_inverses = false;
    generators = {{"a", Element{{1}}, ""}};
  }
  Element identity() const override { return Element{{0}}; }
  bool contains(const Element& g) const override { return g.nf.size() == 1 && g.nf[0] >= 0; }
  Element multiply(const Element& g, const Element& h) const override {
    return Element{{g.nf[0] + h.nf[0]}};
  }
  Element invert(const Element&) const override {
    throw UnsupportedOperation("N has no inverses");
  }
  std::optional<std::optional<std::uint64_t>> fast_distance(const Element& g,
                                                            const Element& h) const override {
    if (h.nf[0] < g.nf[0]) return std::optional<std::uint64_t>();
    return std::optional<std::uint64_t>(static_cast<std::uint64_t>(h.nf[0] - g.nf[0]));
  }
};

class ProductImpl final : public GroupImpl {
 public:
  explicit ProductImpl(std::vector<GroupSpec> parts) {
    kind = GroupKind::DirectProduct;
    factors = std::move(parts);
    name = "(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      name += (i ? " x " : "") + factors[i].name();
      has_inverses = has_inverses && factors[i].has_inverses();
    }
    name += ")";
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const std::string prefix = std::to_string(i) + ".";
      for (const auto& g : factors[i].generators()) {
        std::vector<Element> slots;
        for (const auto& f : factors) slots.push_back(f.identity());
        slots[i] = g.element;
        generators.push_back({prefix + g.name, join(slots),
                              g.inverse_name.empty() ? "" : prefix + g.inverse_name});
      }
    }
  }

  std::vector<Element> split(const Element& g) const {
    std::vector<Element> out;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (pos >= g.nf.size()) throw InvalidArgument("malformed product element");
      const auto len = g.nf[pos++];
      if (len < 0 || pos + static_cast<std::size_t>(len) > g.nf.size())
        throw InvalidArgument("malformed product element");
      out.push_back(Element{{g.nf.begin() + static_cast<std::ptrdiff_t>(pos),
                             g.nf.begin() + static_cast<std::ptrdiff_t>(pos + len)}});
      pos += static_cast<std::size_t>(len);
    }
    if (pos != g.nf.size()) throw InvalidArgument("malformed product element");
    return out;
  }

  Element join(std::span<const Element> parts) const {
    Element out;
    for (const auto& p : parts) {
      out.nf.push_back(static_cast<std::int64_t>(p.nf.size()));
      out.nf.insert(out.nf.end(), p.nf.begin(), p.nf.end());
    }
    return out;
  }

  Element identity() const override {
    std::vector<Element> slots;
    for (const auto& f : factors) slots.push_back(f.identity());
    return join(slots);
  }
  bool contains(const Element& g) const override {
    try {
      const auto parts = split(g);
      for (std::size_t i = 0; i < factors.size(); ++i)
        if (!factors[i].contains(parts[i])) return false;
      return true;
    } catch (const InvalidArgument&) {
      return false;
    }
  }
  Element multiply(const Element& g, const Element& h) const override {
    auto a = split(g);
    const auto b = split(h);
    for (std::size_t i = 0; i < factors.size(); ++i) a[i] = factors[i].multiply(a[i], b[i]);
    return join(a);
  }
  Element invert(const Element& g) const override {
    auto a = split(g);
    for (std::size_t i = 0; i < factors.size(); ++i) a[i] = factors[i].invert(a[i]);
    return join(a);
  }
  std::optional<std::uint64_t> order() const override {
    std::uint64_t total = 1;
    for (const auto& f : factors) {
      const auto o = f.order();
      if (!o) return std::nullopt;
      total *= *o;
    }
    return total;
  }
  std::vector<Relation> relations() const override {
    std::vector<Relation> out;
    auto prefixed = [](const Word& w, std::size_t i) {
      Word p;
      for (const auto& x : w) p.push_back(std::to_string(i) + "." + x);
      return p;
    };
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (const auto& r : factors[i].relations())
        out.push_back({prefixed(r.lhs, i), prefixed(r.rhs, i)});
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t j = i + 1; j < factors.size(); ++j)
        for (const auto& g : factors[i].generators())
          for (const auto& h : factors[j].generators()) {
            const std::string x = std::to_string(i) + "." + g.name;
            const std::string y = std::to_string(j) + "." + h.name;
            out.push_back({{x, y}, {y, x}});
          }
    return out;
  }
  std::string format(const Element& g) const override {
    const auto parts = split(g);
    std::string out = "[";
    for (std::size_t i = 0; i < parts.size(); ++i)
      out += (i ? ", " : "") + factors[i].format(parts[i]);
    return out + "]";
  }
  std::optional<std::optional<std::uint64_t>> fast_distance(const Element& g,
                                                            const Element& h) const override {
    const auto a = split(g);
    const auto b = split(h);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto d = factors[i].distance(a[i], b[i]);
      if (!d) return std::optional<std::uint64_t>();
      total += *d;
    }
    return std::optional<std::uint64_t>(total);
  }
};

}  // namespace
}  // namespace detail

GroupSpec::GroupSpec(std::shared_ptr<const detail::GroupImpl> impl) : impl_(std::move(impl)) {}

GroupSpec GroupSpec::integers(int dim) {
  if (dim < 1 || dim > 26) throw InvalidArgument("Z^d requires 1 <= d <= 26");
  return GroupSpec(std::make_shared<detail::IntegersImpl>(dim));
}
GroupSpec GroupSpec::cyclic(std::int64_t order) {
  if (order < 1) throw InvalidArgument("cyclic group order must be >= 1");
  return GroupSpec(std::make_shared<detail::CyclicImpl>(order));
}
GroupSpec GroupSpec::symmetric(int n) {
  if (n < 2 || n > 12) throw InvalidArgument("symmetric group requires 2 <= n <= 12");
  return GroupSpec(std::make_shared<detail::SymmetricImpl>(n));
}
GroupSpec GroupSpec::free_group(int rank) {
  if (rank < 1 || rank > 26) throw InvalidArgument("free group rank must be in 1..26");
  return GroupSpec(std::make_shared<detail::FreeImpl>(rank));
}
GroupSpec GroupSpec::heisenberg() { return GroupSpec(std::make_shared<detail::HeisenbergImpl>()); }
GroupSpec GroupSpec::lamplighter() {
  return GroupSpec(std::make_shared<detail::LamplighterImpl>());
}
GroupSpec GroupSpec::naturals() { return GroupSpec(std::make_shared<detail::NaturalsImpl>()); }
GroupSpec GroupSpec::direct_product(std::vector<GroupSpec> factors) {
  if (factors.empty()) throw InvalidArgument("direct product needs at least one factor");
  return GroupSpec(std::make_shared<detail::ProductImpl>(std::move(factors)));
}

GroupKind GroupSpec::kind() const { return impl_->kind; }
std::int64_t GroupSpec::parameter() const { return impl_->parameter; }
const std::vector<GroupSpec>& GroupSpec::factors() const { return impl_->factors; }
const std::string& GroupSpec::name() const { return impl_->name; }
bool GroupSpec::has_inverses() const { return impl_->has_inverses; }
std::optional<std::uint64_t> GroupSpec::order() const { return impl_->order(); }
const std::vector<Generator>& GroupSpec::generators() const { return impl_->generators; }

const Generator& GroupSpec::generator(std::string_view name) const {
  for (const auto& g : impl_->generators)
    if (g.name == name) return g;
  throw InvalidArgument("unknown generator '" + std::string(name) + "' for " + impl_->name);
}

bool GroupSpec::has_generator(std::string_view name) const {
  return std::any_of(impl_->generators.begin(), impl_->generators.end(),
                     [&](const Generator& g) { return g.name == name; });
}

Element GroupSpec::identity() const { return impl_->identity(); }
bool GroupSpec::contains(const Element& g) const { return impl_->contains(g); }

void GroupSpec::check(const Element& g) const {
  if (!impl_->contains(g))
    throw InvalidArgument("element " + impl_->GroupImpl::format(g) + " is not in " + impl_->name);
}

Element GroupSpec::multiply(const Element& g, const Element& h) const {
  check(g);
  check(h);
  return impl_->multiply(g, h);
}

Element GroupSpec::invert(const Element& g) const {
  if (!impl_->has_inverses) throw UnsupportedOperation(impl_->name + " has no inverses");
  check(g);
  return impl_->invert(g);
}

Element GroupSpec::evaluate(const Word& word) const {
  Element out = identity();
  for (const auto& letter : word) out = impl_->multiply(out, generator(letter).element);
  return out;
}

std::optional<std::uint64_t> GroupSpec::distance(const Element& g, const Element& h) const {
  check(g);
  check(h);
  if (auto fast = impl_->fast_distance(g, h)) return *fast;
  return bfs_distance(*this, g, h);
}

std::vector<Relation> GroupSpec::relations() const { return impl_->relations(); }

std::vector<Element> GroupSpec::split(const Element& g) const {
  if (impl_->kind != GroupKind::DirectProduct)
    throw UnsupportedOperation("split is only defined for direct products");
  return static_cast<const detail::ProductImpl&>(*impl_).split(g);
}

Element GroupSpec::join(std::span<const Element> parts) const {
  if (impl_->kind != GroupKind::DirectProduct)
    throw UnsupportedOperation("join is only defined for direct products");
  if (parts.size() != impl_->factors.size())
    throw InvalidArgument("wrong number of factors in join");
  return static_cast<const detail::ProductImpl&>(*impl_).join(parts);
}

std::string GroupSpec::format(const Element& g) const { return impl_->format(g); }

std::vector<Element> ball(const GroupSpec& spec, std::size_t radius, std::size_t cap) {
  std::set<Element> seen{spec.identity()};
  std::vector<Element> frontier{spec.identity()};
  for (std::size_t r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& gen : spec.generators()) {
        Element y = spec.multiply(x, gen.element);
        if (seen.insert(y).second) {
          if (seen.size() > cap)
            throw ResourceLimit("ball of radius " + std::to_string(radius) + " in " + spec.name() +
                                " exceeds the enumeration cap of " + std::to_string(cap));
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::optional<std::uint64_t> word_metric(const Element& g, const Element& h,
                                         const GroupSpec& spec) {
  return spec.distance(g, h);
}

std::optional<std::uint64_t> bfs_distance(const GroupSpec& spec, const Element& g,
                                          const Element& h, std::size_t cap) {
  if (g == h) return 0;
  std::set<Element> seen{g};
  std::vector<Element> frontier{g};
  for (std::uint64_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& gen : spec.generators()) {
        Element y = spec.multiply(x, gen.element);
        if (y == h) return depth;
        if (seen.insert(y).second) {
          if (seen.size() > cap)
            throw ResourceLimit("distance search in " + spec.name() + " exceeded the cap");
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

Word shortest_word(const GroupSpec& spec, const Element& g, std::size_t cap) {
  spec.check(g);
  // parent[x] = (y, generator) with x = y * generator.
  std::map<Element, std::pair<Element, const Generator*>> parent;
  const Element e = spec.identity();
  parent.emplace(e, std::make_pair(e, nullptr));
  std::vector<Element> frontier{e};
  while (!parent.contains(g)) {
    if (frontier.empty()) throw InvalidArgument("element is not reachable from the identity");
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& gen : spec.generators()) {
        Element y = spec.multiply(x, gen.element);
        if (parent.contains(y)) continue;
        parent.emplace(y, std::make_pair(x, &gen));
        if (parent.size() > cap)
          throw ResourceLimit("word search in " + spec.name() + " exceeded the cap");
        next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  Word out;
  for (Element x = g; x != e;) {
    const auto& [prev, gen] = parent.at(x);
    out.push_back(gen->name);
    x = prev;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Word inverse_word(const GroupSpec& spec, const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const auto& inv = spec.generator(*it).inverse_name;
    if (inv.empty()) throw UnsupportedOperation(spec.name() + " has no inverses");
    out.push_back(inv);
  }
  return out;
}

}  // namespace dayflow
