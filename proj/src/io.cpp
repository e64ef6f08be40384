#include "dayflow/io.hpp"

#include <cstdio>
#include <fstream>

#include "dayflow/errors.hpp"

namespace dayflow::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument(std::string(what) + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw InvalidArgument("matrix 'A' must have one row per dimension");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const Vector row = vector_from_json(j[r], "matrix row");
    if (static_cast<std::size_t>(row.size()) != n) throw InvalidArgument("matrix 'A' must be square");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

}  // namespace

GroupSpec group_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "integers") return GroupSpec::integers(field<int>(j, "dim"));
  if (kind == "cyclic") return GroupSpec::cyclic(field<std::int64_t>(j, "order"));
  if (kind == "symmetric") return GroupSpec::symmetric(field<int>(j, "n"));
  if (kind == "free_group") return GroupSpec::free_group(field<int>(j, "rank"));
  if (kind == "heisenberg") return GroupSpec::heisenberg();
  if (kind == "lamplighter") return GroupSpec::lamplighter();
  if (kind == "naturals") return GroupSpec::naturals();
  if (kind == "direct_product") {
    const auto factors = field<json>(j, "factors");
    if (!factors.is_array()) throw InvalidArgument("'factors' must be an array");
    std::vector<GroupSpec> parts;
    for (const auto& f : factors) parts.push_back(group_from_json(f));
    return GroupSpec::direct_product(std::move(parts));
  }
  throw InvalidArgument("unknown group kind '" + kind +
                        "' (expected integers, cyclic, symmetric, free_group, heisenberg, "
                        "lamplighter, naturals or direct_product)");
}

json group_to_json(const GroupSpec& group) {
  switch (group.kind()) {
    case GroupKind::Integers: return {{"kind", "integers"}, {"dim", group.parameter()}};
    case GroupKind::Cyclic: return {{"kind", "cyclic"}, {"order", group.parameter()}};
    case GroupKind::Symmetric: return {{"kind", "symmetric"}, {"n", group.parameter()}};
    case GroupKind::Free: return {{"kind", "free_group"}, {"rank", group.parameter()}};
    case GroupKind::Heisenberg: return {{"kind", "heisenberg"}};
    case GroupKind::Lamplighter: return {{"kind", "lamplighter"}};
    case GroupKind::Naturals: return {{"kind", "naturals"}};
    case GroupKind::DirectProduct: {
      json factors = json::array();
      for (const auto& f : group.factors()) factors.push_back(group_to_json(f));
      return {{"kind", "direct_product"}, {"factors", factors}};
    }
  }
  throw InternalError("unhandled group kind");
}

json element_to_json(const GroupSpec& group, const Element& g) {
  group.check(g);
  switch (group.kind()) {
    case GroupKind::Free: {
      const auto s = group.format(g);
      return s == "e" ? std::string() : s;
    }
    case GroupKind::Lamplighter:
      return {{"position", g.nf[0]},
              {"lamps", std::vector<std::int64_t>(g.nf.begin() + 1, g.nf.end())}};
    case GroupKind::DirectProduct: {
      json out = json::array();
      const auto parts = group.split(g);
      for (std::size_t i = 0; i < parts.size(); ++i)
        out.push_back(element_to_json(group.factors()[i], parts[i]));
      return out;
    }
    default: return g.nf;
  }
}

Element element_from_json(const GroupSpec& group, const json& j) {
  Element g;
  try {
    switch (group.kind()) {
      case GroupKind::Free: {
        auto s = j.get<std::string>();
        if (s == "e") s.clear();
        for (char c : s) {
          const bool upper = c >= 'A' && c <= 'Z';
          const bool lower = c >= 'a' && c <= 'z';
          if (!upper && !lower) throw InvalidArgument("bad free group letter '" + std::string(1, c) + "'");
          const std::int64_t idx = (upper ? c - 'A' : c - 'a') + 1;
          g = group.multiply(g, Element{{upper ? -idx : idx}});
        }
        return g;
      }
      case GroupKind::Lamplighter: {
        auto lamps = field<std::vector<std::int64_t>>(j, "lamps");
        std::sort(lamps.begin(), lamps.end());
        g.nf.push_back(field<std::int64_t>(j, "position"));
        g.nf.insert(g.nf.end(), lamps.begin(), lamps.end());
        break;
      }
      case GroupKind::DirectProduct: {
        if (!j.is_array() || j.size() != group.factors().size())
          throw InvalidArgument("product element must list one entry per factor");
        std::vector<Element> parts;
        for (std::size_t i = 0; i < j.size(); ++i)
          parts.push_back(element_from_json(group.factors()[i], j[i]));
        return group.join(parts);
      }
      default: g.nf = j.get<std::vector<std::int64_t>>(); break;
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed element: ") + e.what());
  }
  group.check(g);
  return g;
}

json measure_to_json(const MolecularMeasure& mu, double prune) {
  json out = json::array();
  for (const auto& [x, w] : mu.coefficients()) {
    if (prune > 0.0 && std::abs(w) <= prune) continue;
    out.push_back({{"element", element_to_json(mu.group(), x)}, {"weight", w}});
  }
  return out;
}

MolecularMeasure measure_from_json(const GroupSpec& group, const json& j) {
  if (!j.is_array()) throw InvalidArgument("measure must be an array");
  std::map<Element, double> coeffs;
  for (const auto& entry : j)
    coeffs[element_from_json(group, field<json>(entry, "element"))] += field<double>(entry, "weight");
  return MolecularMeasure(group, std::move(coeffs));
}

json function_to_json(const TestFunction& f) {
  json values = json::array();
  for (const auto& [x, v] : f.values())
    values.push_back({{"element", element_to_json(f.group(), x)}, {"value", v}});
  return {{"default", f.default_value()}, {"values", values}};
}

TestFunction function_from_json(const GroupSpec& group, const json& j) {
  std::map<Element, double> values;
  const double def = j.contains("default") ? field<double>(j, "default") : 0.0;
  if (j.contains("values"))
    for (const auto& entry : field<json>(j, "values"))
      values[element_from_json(group, field<json>(entry, "element"))] = field<double>(entry, "value");
  return TestFunction(group, std::move(values), def);
}

AffineAction action_from_json(const GroupSpec& group, const json& j, std::uint64_t seed) {
  if (!j.is_object()) throw InvalidArgument("action must be a JSON object");
  if (j.value("canonical", false)) return canonical_action(group);
  const auto n = field<std::size_t>(j, "dimension");
  if (n == 0) throw InvalidArgument("action dimension must be positive");
  const auto gens = field<json>(j, "generators");
  if (!gens.is_object()) throw InvalidArgument("'generators' must be an object");
  std::map<std::string, AffineMap> maps;
  for (const auto& [name, spec] : gens.items()) {
    const auto dim = static_cast<Eigen::Index>(n);
    AffineMap m{Matrix::Identity(dim, dim), Vector::Zero(dim)};
    if (spec.contains("A")) m.linear = matrix_from_json(spec.at("A"), n);
    if (spec.contains("b")) m.offset = vector_from_json(spec.at("b"), "offset 'b'");
    if (static_cast<std::size_t>(m.offset.size()) != n)
      throw InvalidArgument("offset for generator '" + name + "' has the wrong dimension");
    maps.emplace(name, std::move(m));
  }
  Domain domain;
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    const auto type = field<std::string>(d, "type");
    if (type == "ball") {
      domain = BallDomain{vector_from_json(field<json>(d, "center"), "center"),
                          field<double>(d, "radius")};
    } else if (type == "box") {
      domain = BoxDomain{vector_from_json(field<json>(d, "lower"), "lower"),
                         vector_from_json(field<json>(d, "upper"), "upper")};
    } else if (type == "hull") {
      HullDomain hull;
      for (const auto& p : field<json>(d, "points")) hull.points.push_back(vector_from_json(p, "hull point"));
      domain = std::move(hull);
    } else if (type == "simplex") {
      domain = SimplexDomain{};
    } else {
      throw InvalidArgument("unknown domain type '" + type + "'");
    }
  }
  return AffineAction(group, std::move(maps), std::move(domain), seed);
}

json action_to_json(const AffineAction& action) {
  json gens = json::object();
  for (const auto& [name, m] : action.maps()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.linear.rows(); ++r) rows.push_back(vector_to_json(m.linear.row(r).transpose()));
    gens[name] = {{"A", rows}, {"b", vector_to_json(m.offset)}};
  }
  json out = {{"dimension", action.dimension()}, {"generators", gens}};
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, BallDomain>) {
          out["domain"] = {{"type", "ball"}, {"center", vector_to_json(d.center)}, {"radius", d.radius}};
        } else if constexpr (std::is_same_v<D, BoxDomain>) {
          out["domain"] = {{"type", "box"}, {"lower", vector_to_json(d.lower)}, {"upper", vector_to_json(d.upper)}};
        } else if constexpr (std::is_same_v<D, HullDomain>) {
          json pts = json::array();
          for (const auto& p : d.points) pts.push_back(vector_to_json(p));
          out["domain"] = {{"type", "hull"}, {"points", pts}};
        } else if constexpr (std::is_same_v<D, SimplexDomain>) {
          out["domain"] = {{"type", "simplex"}};
        }
      },
      action.domain());
  return out;
}

json report_to_json(const DefectReport& report, const GroupSpec& group, const DefectKind& kind) {
  json defects = json::object();
  for (const auto& [name, d] : report.defects) defects[name] = d;
  return {{"group", group_to_json(group)},
          {"radius", report.radius},
          {"kind", kind_name(kind)},
          {"lp_status", to_string(report.status)},
          {"lp_objective", report.lp_objective},
          {"max_defect", report.max_defect},
          {"defects", defects},
          {"gap", report.gap},
          {"lp_variables", report.lp_variables},
          {"lp_rows", report.lp_rows},
          {"measure", measure_to_json(report.mean)}};
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("cannot parse '" + path.string() + "': " + e.what());
  }
}

}  // namespace dayflow::io
