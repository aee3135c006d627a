#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cluster_bifurc {

enum class ProblemKind { triangle, tetrahedron };

std::string_view to_string(ProblemKind kind) noexcept;
ProblemKind problem_kind_from_string(std::string_view name);

/// phi(r) = c1 / r^delta1 - c2 / r^delta2, with delta1 > delta2 > 2.
struct LennardJones {
  double c1 = 1.0;
  double c2 = 2.0;
  double delta1 = 12.0;
  double delta2 = 6.0;
  friend bool operator==(const LennardJones&, const LennardJones&) = default;
};

/// phi(r) = alpha exp(-beta r) - gamma / r^eta.
struct Buckingham {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double eta = 4.0;
  friend bool operator==(const Buckingham&, const Buckingham&) = default;
};

/// Buckingham written through its well depth D at separation R, with
/// stiffness xi > eta. Stored in this form; converted on evaluation.
struct NormalizedBuckingham {
  double depth = 1.0;   // D
  double radius = 1.0;  // R
  double xi = 14.3863;
  double eta = 5.6518;
  friend bool operator==(const NormalizedBuckingham&, const NormalizedBuckingham&) = default;
};

/// phi(r) = k r^2 / 2 + beta r^4 / 4. Hooke for beta = 0, hard for beta > 0,
/// soft for beta < 0.
struct PolynomialSpring {
  double k = 1.0;
  double beta = 0.0;
  friend bool operator==(const PolynomialSpring&, const PolynomialSpring&) = default;
};

/// Immutable, validated choice of inter-particle potential.
class PotentialSpec {
 public:
  using Variant = std::variant<LennardJones, Buckingham, NormalizedBuckingham, PolynomialSpring>;

  /// Throws DomainError when the family's parameter constraints fail.
  PotentialSpec(Variant v);  // NOLINT(google-explicit-constructor)

  const Variant& variant() const noexcept { return v_; }
  std::string_view family() const noexcept;

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;

 private:
  Variant v_;
};

/// phi, phi' or phi'' at r > 0. order outside {0,1,2} is a UsageError.
double eval_potential(const PotentialSpec& spec, double r, int order);

/// phi''(r) + k_coeff * phi'(r) / r. The triangle uses k_coeff = 3, the
/// tetrahedron 3 and 7.
double stability_margin(const PotentialSpec& spec, double r, double k_coeff);

struct LabeledValue {
  std::string label;
  double value = 0.0;
  friend bool operator==(const LabeledValue&, const LabeledValue&) = default;
};

/// Closed-form stability boundaries of the symmetric state, where known:
///   Lennard-Jones triangle: A0; tetrahedron: V0, plus V1 when the mu2 root exists.
///   Soft spring (beta < 0): A0 for the triangle; V1, V2 for the tetrahedron.
/// Buckingham families and hard/Hooke springs return an empty list.
std::vector<LabeledValue> closed_form_thresholds(const PotentialSpec& spec, ProblemKind problem);

/// True iff alpha beta e^-4 > gamma eta (eta - 2) (beta/4)^(eta+1), which
/// guarantees a nonempty interval (A0, A1) of stable equilateral states.
/// Accepts Buckingham and NormalizedBuckingham; anything else is a UsageError.
bool buckingham_interval_certificate(const PotentialSpec& spec);

/// (alpha, beta, gamma) = (D eta e^xi / (xi - eta), xi / R, D xi R^eta / (xi - eta)).
Buckingham normalized_buckingham_convert(double depth, double radius, double xi, double eta);

/// Config-file form {"family": ..., "params": {...}}. Unknown family or a
/// missing parameter raises ConfigError naming the key.
PotentialSpec potential_from_json(std::string_view json_text);
std::string potential_to_json(const PotentialSpec& spec);

}  // namespace cluster_bifurc
