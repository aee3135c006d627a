#pragma once

// Uniform view of the two constrained problems for the continuation code.
// States are packed vectors x = (lambda, edges...), the parameter p is the
// area (triangle) or volume (tetrahedron).

#include <memory>
#include <string>
#include <vector>

#include "cluster_bifurc/linalg.hpp"
#include "cluster_bifurc/potentials.hpp"
#include "cluster_bifurc/triangle.hpp"

namespace cluster_bifurc {

/// A critical eigenvalue of the trivial branch and the kernel directions
/// whose isotropy subgroups carry the bifurcating branches.
struct CriticalMode {
  std::string label;  ///< "mu", "mu1", "mu2"
  double value = 0.0;
  int kernel_dim = 0;
  std::vector<linalg::Vector> axial;  ///< one per bifurcating family
};

class System {
 public:
  virtual ~System() = default;

  virtual ProblemKind kind() const noexcept = 0;
  virtual std::size_t dim() const noexcept = 0;
  virtual const PotentialSpec& potential() const noexcept = 0;

  virtual linalg::Vector residual(const linalg::Vector& x, double p) const = 0;
  virtual linalg::Matrix jacobian(const linalg::Vector& x, double p) const = 0;
  /// dF/dp; only the constraint row depends on the parameter.
  virtual linalg::Vector residual_dp(double p) const = 0;
  /// Size of the constraint term (A^2 or 288 V^2), used to scale its residual.
  virtual double constraint_scale(double p) const = 0;

  virtual bool feasible(const linalg::Vector& x) const = 0;
  virtual linalg::Vector trivial(double p) const = 0;
  virtual Classification classify(const linalg::Vector& x, double p) const = 0;
  virtual double energy(const linalg::Vector& x) const = 0;
  virtual std::vector<CriticalMode> critical_modes(double p) const = 0;
};

class TriangleSystem final : public System {
 public:
  explicit TriangleSystem(PotentialSpec spec) : spec_(std::move(spec)) {}

  ProblemKind kind() const noexcept override { return ProblemKind::triangle; }
  std::size_t dim() const noexcept override { return 4; }
  const PotentialSpec& potential() const noexcept override { return spec_; }
  linalg::Vector residual(const linalg::Vector& x, double p) const override;
  linalg::Matrix jacobian(const linalg::Vector& x, double p) const override;
  linalg::Vector residual_dp(double p) const override;
  double constraint_scale(double p) const override;
  bool feasible(const linalg::Vector& x) const override;
  linalg::Vector trivial(double p) const override;
  Classification classify(const linalg::Vector& x, double p) const override;
  double energy(const linalg::Vector& x) const override;
  std::vector<CriticalMode> critical_modes(double p) const override;

 private:
  PotentialSpec spec_;
};

class TetraSystem final : public System {
 public:
  explicit TetraSystem(PotentialSpec spec) : spec_(std::move(spec)) {}

  ProblemKind kind() const noexcept override { return ProblemKind::tetrahedron; }
  std::size_t dim() const noexcept override { return 7; }
  const PotentialSpec& potential() const noexcept override { return spec_; }
  linalg::Vector residual(const linalg::Vector& x, double p) const override;
  linalg::Matrix jacobian(const linalg::Vector& x, double p) const override;
  linalg::Vector residual_dp(double p) const override;
  double constraint_scale(double p) const override;
  bool feasible(const linalg::Vector& x) const override;
  linalg::Vector trivial(double p) const override;
  Classification classify(const linalg::Vector& x, double p) const override;
  double energy(const linalg::Vector& x) const override;
  std::vector<CriticalMode> critical_modes(double p) const override;

 private:
  PotentialSpec spec_;
};

std::unique_ptr<System> make_system(ProblemKind kind, const PotentialSpec& spec);

}  // namespace cluster_bifurc
