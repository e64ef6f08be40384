#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dayflow/groups.hpp"
#include "dayflow/test_function.hpp"

namespace dayflow {

// A finitely supported signed measure sum_i c_i delta(s_i). Coefficients
// that are exactly zero are never stored.
class MolecularMeasure {
 public:
  explicit MolecularMeasure(GroupSpec group);
  MolecularMeasure(GroupSpec group, std::map<Element, double> coefficients);

  const GroupSpec& group() const { return group_; }
  const std::map<Element, double>& coefficients() const { return coeffs_; }
  double weight(const Element& x) const;
  std::vector<Element> support() const;
  std::size_t support_size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  // Accurately rounded sum of coefficients, independent of storage order.
  double total_mass() const;

  friend bool operator==(const MolecularMeasure& a, const MolecularMeasure& b) {
    return a.group_ == b.group_ && a.coeffs_ == b.coeffs_;
  }

 private:
  GroupSpec group_;
  std::map<Element, double> coeffs_;
};

struct WeightedMeasure {
  double coefficient;
  MolecularMeasure measure;
};

MolecularMeasure point_mass(const GroupSpec& group, const Element& s);

// sum_k r_k mu_k, merged coefficient-wise. Throws InvalidArgument on an empty
// list or mixed groups.
MolecularMeasure combine(std::span<const WeightedMeasure> terms);

MolecularMeasure operator+(const MolecularMeasure& a, const MolecularMeasure& b);
MolecularMeasure operator-(const MolecularMeasure& a, const MolecularMeasure& b);
MolecularMeasure operator*(double r, const MolecularMeasure& mu);

// mu(f) = sum_i c_i f(s_i)
double evaluate(const MolecularMeasure& mu, const TestFunction& f);

// (s * mu)(f) = mu(_s f), i.e. sum_i c_i delta(s s_i).
MolecularMeasure convolve_left(const Element& s, const MolecularMeasure& mu);
// (mu * s)(f) = mu(f_s), i.e. sum_i c_i delta(s_i s).
MolecularMeasure convolve_right(const MolecularMeasure& mu, const Element& s);

// sum_i |c_i|, the dual of the sup norm.
double tv_norm(const MolecularMeasure& mu);

bool is_mean(const MolecularMeasure& mu, double tol = 0.0);

// Uniform mean on a finite nonempty set (duplicates are ignored).
MolecularMeasure uniform_mean(const GroupSpec& group, std::span<const Element> set);

// Sum of values with Neumaier compensation, taken in sorted order so the
// result does not depend on the input order.
double stable_sum(std::vector<double> values);

}  // namespace dayflow
