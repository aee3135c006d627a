#include "cluster_bifurc/potentials.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cluster_bifurc/errors.hpp"
#include "json_detail.hpp"

namespace cluster_bifurc {

std::string_view to_string(ProblemKind kind) noexcept {
  return kind == ProblemKind::triangle ? "triangle" : "tetrahedron";
}

ProblemKind problem_kind_from_string(std::string_view name) {
  if (name == "triangle") return ProblemKind::triangle;
  if (name == "tetrahedron") return ProblemKind::tetrahedron;
  throw ConfigError("problem", "expected 'triangle' or 'tetrahedron', got '" + std::string(name) + "'");
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void validate(const LennardJones& p) {
  if (!positive(p.c1) || !positive(p.c2))
    throw DomainError("lennard_jones: c1 and c2 must be positive");
  if (!(std::isfinite(p.delta1) && std::isfinite(p.delta2) && p.delta1 > p.delta2 && p.delta2 > 2.0))
    throw DomainError("lennard_jones: need delta1 > delta2 > 2");
}

void validate(const Buckingham& p) {
  if (!positive(p.alpha) || !positive(p.beta) || !positive(p.gamma) || !positive(p.eta))
    throw DomainError("buckingham: alpha, beta, gamma, eta must be positive");
}

void validate(const NormalizedBuckingham& p) {
  if (!positive(p.depth) || !positive(p.radius) || !positive(p.xi) || !positive(p.eta))
    throw DomainError("normalized_buckingham: D, R, xi, eta must be positive");
  if (!(p.xi > p.eta)) throw DomainError("normalized_buckingham: need xi > eta");
}

void validate(const PolynomialSpring& p) {
  if (!positive(p.k)) throw DomainError("spring: k must be positive");
  if (!std::isfinite(p.beta)) throw DomainError("spring: beta must be finite");
}

// alpha exp(-beta r) - gamma r^-eta with alpha carried as a logarithm, so
// e^xi from the normalized form never materializes on its own.
struct ExpPowerTerms {
  double log_alpha;
  double beta;
  double gamma;
  double eta;
};

ExpPowerTerms terms(const Buckingham& p) { return {std::log(p.alpha), p.beta, p.gamma, p.eta}; }

ExpPowerTerms terms(const NormalizedBuckingham& p) {
  const double gap = p.xi - p.eta;
  return {std::log(p.depth * p.eta / gap) + p.xi, p.xi / p.radius,
          p.depth * p.xi * std::pow(p.radius, p.eta) / gap, p.eta};
}

double eval_terms(const ExpPowerTerms& t, double r, int order) {
  const double ex = std::exp(t.log_alpha - t.beta * r);
  switch (order) {
    case 0:
      return ex - t.gamma * std::pow(r, -t.eta);
    case 1:
      return -t.beta * ex + t.gamma * t.eta * std::pow(r, -t.eta - 1.0);
    default:
      return t.beta * t.beta * ex - t.gamma * t.eta * (t.eta + 1.0) * std::pow(r, -t.eta - 2.0);
  }
}

}  // namespace

PotentialSpec::PotentialSpec(Variant v) : v_(std::move(v)) {
  std::visit([](const auto& p) { validate(p); }, v_);
}

std::string_view PotentialSpec::family() const noexcept {
  return std::visit(Overloaded{
                        [](const LennardJones&) { return std::string_view("lennard_jones"); },
                        [](const Buckingham&) { return std::string_view("buckingham"); },
                        [](const NormalizedBuckingham&) { return std::string_view("normalized_buckingham"); },
                        [](const PolynomialSpring&) { return std::string_view("spring"); },
                    },
                    v_);
}

double eval_potential(const PotentialSpec& spec, double r, int order) {
  if (order < 0 || order > 2) throw UsageError("eval_potential: order must be 0, 1 or 2");
  if (!(r > 0.0)) throw DomainError("eval_potential: r must be positive");
  return std::visit(
      Overloaded{
          [&](const LennardJones& p) {
            const double a = std::pow(r, -p.delta1);
            const double b = std::pow(r, -p.delta2);
            switch (order) {
              case 0:
                return p.c1 * a - p.c2 * b;
              case 1:
                return (-p.c1 * p.delta1 * a + p.c2 * p.delta2 * b) / r;
              default:
                return (p.c1 * p.delta1 * (p.delta1 + 1.0) * a - p.c2 * p.delta2 * (p.delta2 + 1.0) * b) /
                       (r * r);
            }
          },
          [&](const Buckingham& p) { return eval_terms(terms(p), r, order); },
          [&](const NormalizedBuckingham& p) { return eval_terms(terms(p), r, order); },
          [&](const PolynomialSpring& p) {
            switch (order) {
              case 0:
                return 0.5 * p.k * r * r + 0.25 * p.beta * r * r * r * r;
              case 1:
                return p.k * r + p.beta * r * r * r;
              default:
                return p.k + 3.0 * p.beta * r * r;
            }
          },
      },
      spec.variant());
}

double stability_margin(const PotentialSpec& spec, double r, double k_coeff) {
  if (!(r > 0.0)) throw DomainError("stability_margin: r must be positive");
  return eval_potential(spec, r, 2) + k_coeff * eval_potential(spec, r, 1) / r;
}

std::vector<LabeledValue> closed_form_thresholds(const PotentialSpec& spec, ProblemKind problem) {
  using std::numbers::sqrt2;
  using std::numbers::sqrt3;
  std::vector<LabeledValue> out;
  if (const auto* lj = spec.get_if<LennardJones>()) {
    const double gap = lj->delta1 - lj->delta2;
    const double ratio3 =
        lj->c1 * lj->delta1 * (lj->delta1 - 2.0) / (lj->c2 * lj->delta2 * (lj->delta2 - 2.0));
    if (problem == ProblemKind::triangle) {
      out.push_back({"A0", sqrt3 / 4.0 * std::pow(ratio3, 2.0 / gap)});
    } else {
      out.push_back({"V0", sqrt2 / 12.0 * std::pow(ratio3, 3.0 / gap)});
      // delta2 in (2, 6] with delta1 > 6 leaves the second condition always
      // satisfied; delta2 = 6 exactly falls in that case.
      const double num = lj->c1 * lj->delta1 * (lj->delta1 - 6.0);
      const double den = lj->c2 * lj->delta2 * (lj->delta2 - 6.0);
      if (lj->delta2 != 6.0 && num / den > 0.0)
        out.push_back({"V1", sqrt2 / 12.0 * std::pow(num / den, 3.0 / gap)});
    }
  } else if (const auto* sp = spec.get_if<PolynomialSpring>()) {
    if (sp->beta < 0.0) {
      const double k = sp->k;
      const double b = sp->beta;
      if (problem == ProblemKind::triangle) {
        out.push_back({"A0", -k / (2.0 * sqrt3 * b)});
      } else {
        out.push_back({"V1", std::sqrt(-k * k * k / (243.0 * b * b * b))});
        out.push_back({"V2", std::sqrt(-8.0 * k * k * k / (1125.0 * b * b * b))});
      }
    }
  }
  return out;
}

bool buckingham_interval_certificate(const PotentialSpec& spec) {
  ExpPowerTerms t{};
  if (const auto* b = spec.get_if<Buckingham>()) {
    t = terms(*b);
  } else if (const auto* nb = spec.get_if<NormalizedBuckingham>()) {
    t = terms(*nb);
  } else {
    throw UsageError("buckingham_interval_certificate: potential is not a Buckingham variant");
  }
  if (!(t.eta > 2.0)) throw UsageError("buckingham_interval_certificate: requires eta > 2");
  // Compare logarithms of both sides.
  const double lhs = t.log_alpha + std::log(t.beta) - 4.0;
  const double rhs = std::log(t.gamma) + std::log(t.eta) + std::log(t.eta - 2.0) +
                     (t.eta + 1.0) * std::log(t.beta / 4.0);
  return lhs > rhs;
}

Buckingham normalized_buckingham_convert(double depth, double radius, double xi, double eta) {
  validate(NormalizedBuckingham{depth, radius, xi, eta});
  const double gap = xi - eta;
  return Buckingham{depth * eta * std::exp(xi) / gap, xi / radius, depth * xi * std::pow(radius, eta) / gap, eta};
}

namespace detail {

namespace {

double param(const nlohmann::json& params, const char* name, const std::string& path) {
  const std::string key = path + ".params." + name;
  if (!params.contains(name)) throw ConfigError(key, "missing parameter");
  const auto& v = params.at(name);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

void reject_unknown(const nlohmann::json& params, std::initializer_list<const char*> known,
                    const std::string& path) {
  for (const auto& [k, _] : params.items()) {
    bool ok = false;
    for (const char* n : known) ok = ok || k == n;
    if (!ok) throw ConfigError(path + ".params." + k, "unknown parameter");
  }
}

}  // namespace

nlohmann::json potential_to_object(const PotentialSpec& spec) {
  nlohmann::json params = std::visit(
      Overloaded{
          [](const LennardJones& p) {
            return nlohmann::json{{"c1", p.c1}, {"c2", p.c2}, {"delta1", p.delta1}, {"delta2", p.delta2}};
          },
          [](const Buckingham& p) {
            return nlohmann::json{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"eta", p.eta}};
          },
          [](const NormalizedBuckingham& p) {
            return nlohmann::json{{"D", p.depth}, {"R", p.radius}, {"xi", p.xi}, {"eta", p.eta}};
          },
          [](const PolynomialSpring& p) { return nlohmann::json{{"k", p.k}, {"beta", p.beta}}; },
      },
      spec.variant());
  return {{"family", std::string(spec.family())}, {"params", params}};
}

PotentialSpec potential_from_object(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError(path + ".family", "missing family");
  const auto family = j.at("family").get<std::string>();
  const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
  if (!params.is_object()) throw ConfigError(path + ".params", "expected an object");
  try {
    if (family == "lennard_jones") {
      reject_unknown(params, {"c1", "c2", "delta1", "delta2"}, path);
      return PotentialSpec(LennardJones{param(params, "c1", path), param(params, "c2", path), param(params, "delta1", path),
                          param(params, "delta2", path)});
    }
    if (family == "buckingham") {
      reject_unknown(params, {"alpha", "beta", "gamma", "eta"}, path);
      return PotentialSpec(Buckingham{param(params, "alpha", path), param(params, "beta", path), param(params, "gamma", path),
                        param(params, "eta", path)});
    }
    if (family == "normalized_buckingham") {
      reject_unknown(params, {"D", "R", "xi", "eta"}, path);
      return PotentialSpec(NormalizedBuckingham{param(params, "D", path), param(params, "R", path), param(params, "xi", path),
                                  param(params, "eta", path)});
    }
    if (family == "spring") {
      reject_unknown(params, {"k", "beta"}, path);
      return PotentialSpec(PolynomialSpring{param(params, "k", path), param(params, "beta", path)});
    }
  } catch (const DomainError& e) {
    throw ConfigError(path + ".params", e.what());
  }
  throw ConfigError(path + ".family", "unknown potential family '" + family + "'");
}

}  // namespace detail

PotentialSpec potential_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("potential", std::string("invalid JSON: ") + e.what());
  }
  return detail::potential_from_object(j, "potential");
}

std::string potential_to_json(const PotentialSpec& spec) { return detail::potential_to_object(spec).dump(); }

}  // namespace cluster_bifurc
