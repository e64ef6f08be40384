#include "dayflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dayflow/errors.hpp"

namespace dayflow {

TestFunction::TestFunction(GroupSpec group, double default_value)
    : group_(std::move(group)), default_(default_value), sup_(std::abs(default_value)) {}

TestFunction::TestFunction(GroupSpec group, std::map<Element, double> values, double default_value)
    : group_(std::move(group)), values_(std::move(values)), default_(default_value) {
  sup_ = std::abs(default_);
  for (const auto& [x, v] : values_) {
    group_.check(x);
    if (!std::isfinite(v)) throw InvalidArgument("test function values must be finite");
    sup_ = std::max(sup_, std::abs(v));
  }
}

TestFunction TestFunction::constant(GroupSpec group, double value) {
  return TestFunction(std::move(group), value);
}

TestFunction TestFunction::indicator(GroupSpec group, std::span<const Element> set) {
  std::map<Element, double> values;
  for (const auto& x : set) values[x] = 1.0;
  return TestFunction(std::move(group), std::move(values), 0.0);
}

double TestFunction::operator()(const Element& x) const {
  const auto it = values_.find(x);
  return it == values_.end() ? default_ : it->second;
}

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      compensation += (sum - t) + v;
    else
      compensation += (v - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

MolecularMeasure::MolecularMeasure(GroupSpec group) : group_(std::move(group)) {}

MolecularMeasure::MolecularMeasure(GroupSpec group, std::map<Element, double> coefficients)
    : group_(std::move(group)), coeffs_(std::move(coefficients)) {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0.0; });
  for (const auto& [x, c] : coeffs_) {
    group_.check(x);
    if (!std::isfinite(c)) throw InvalidArgument("measure coefficients must be finite");
  }
}

double MolecularMeasure::weight(const Element& x) const {
  const auto it = coeffs_.find(x);
  return it == coeffs_.end() ? 0.0 : it->second;
}

std::vector<Element> MolecularMeasure::support() const {
  std::vector<Element> out;
  out.reserve(coeffs_.size());
  for (const auto& [x, c] : coeffs_) out.push_back(x);
  return out;
}

double MolecularMeasure::total_mass() const {
  std::vector<double> values;
  values.reserve(coeffs_.size());
  for (const auto& [x, c] : coeffs_) values.push_back(c);
  return stable_sum(std::move(values));
}

MolecularMeasure point_mass(const GroupSpec& group, const Element& s) {
  group.check(s);
  return MolecularMeasure(group, {{s, 1.0}});
}

MolecularMeasure combine(std::span<const WeightedMeasure> terms) {
  if (terms.empty()) throw InvalidArgument("combine needs at least one term");
  const GroupSpec& group = terms.front().measure.group();
  std::map<Element, double> out;
  for (const auto& [r, mu] : terms) {
    if (!(mu.group() == group)) throw InvalidArgument("combine: measures on different groups");
    for (const auto& [x, c] : mu.coefficients()) out[x] += r * c;
  }
  return MolecularMeasure(group, std::move(out));
}

MolecularMeasure operator+(const MolecularMeasure& a, const MolecularMeasure& b) {
  const WeightedMeasure terms[] = {{1.0, a}, {1.0, b}};
  return combine(terms);
}

MolecularMeasure operator-(const MolecularMeasure& a, const MolecularMeasure& b) {
  const WeightedMeasure terms[] = {{1.0, a}, {-1.0, b}};
  return combine(terms);
}

MolecularMeasure operator*(double r, const MolecularMeasure& mu) {
  const WeightedMeasure terms[] = {{r, mu}};
  return combine(terms);
}

double evaluate(const MolecularMeasure& mu, const TestFunction& f) {
  if (!(mu.group() == f.group())) throw InvalidArgument("evaluate: function on a different group");
  std::vector<double> terms;
  terms.reserve(mu.support_size());
  for (const auto& [x, c] : mu.coefficients()) terms.push_back(c * f(x));
  return stable_sum(std::move(terms));
}

MolecularMeasure convolve_left(const Element& s, const MolecularMeasure& mu) {
  const GroupSpec& group = mu.group();
  group.check(s);
  std::map<Element, double> out;
  for (const auto& [x, c] : mu.coefficients()) out[group.multiply(s, x)] += c;
  return MolecularMeasure(group, std::move(out));
}

MolecularMeasure convolve_right(const MolecularMeasure& mu, const Element& s) {
  const GroupSpec& group = mu.group();
  group.check(s);
  std::map<Element, double> out;
  for (const auto& [x, c] : mu.coefficients()) out[group.multiply(x, s)] += c;
  return MolecularMeasure(group, std::move(out));
}

double tv_norm(const MolecularMeasure& mu) {
  std::vector<double> values;
  values.reserve(mu.support_size());
  for (const auto& [x, c] : mu.coefficients()) values.push_back(std::abs(c));
  return stable_sum(std::move(values));
}

bool is_mean(const MolecularMeasure& mu, double tol) {
  if (tol < 0) throw InvalidArgument("is_mean: tolerance must be nonnegative");
  for (const auto& [x, c] : mu.coefficients())
    if (c < -tol) return false;
  return std::abs(mu.total_mass() - 1.0) <= tol;
}

MolecularMeasure uniform_mean(const GroupSpec& group, std::span<const Element> set) {
  const std::set<Element> distinct(set.begin(), set.end());
  if (distinct.empty()) throw InvalidArgument("uniform_mean of an empty set");
  const double w = 1.0 / static_cast<double>(distinct.size());
  std::map<Element, double> out;
  for (const auto& x : distinct) out.emplace(x, w);
  return MolecularMeasure(group, std::move(out));
}

}  // namespace dayflow
