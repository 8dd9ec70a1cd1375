#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "folia/fourier.hpp"

namespace folia {

/// Outcome of one validation check.  Model validation is diagnostic, not
/// throwing: invalid data produces a populated failure list.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Relative singular value threshold used when computing bivector ranks.
inline constexpr double kRankTolerance = 1e-10;

/// Torus T^m with a constant antisymmetric bivector P.  The Poisson bracket
/// is {f,g} = sum_ij P_ij d_i f d_j g.  The characteristic distribution is
/// image(P); a deterministic orthonormal leafwise frame is precomputed by
/// Gram-Schmidt over the projections of the standard basis onto image(P),
/// which keeps axis-aligned images axis-aligned.
class ConstantTorusModel {
 public:
  explicit ConstantTorusModel(Eigen::MatrixXd bivector);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& bivector() const { return bivector_; }
  int rank() const { return rank_; }
  const std::vector<Eigen::VectorXd>& frame() const { return frame_; }

  std::vector<CheckResult> validate() const;

 private:
  int dim_;
  Eigen::MatrixXd bivector_;
  int rank_ = 0;
  std::vector<Eigen::VectorXd> frame_;
};

/// Torus T^(2n+1) carrying a constant closed pair (theta, eta) with
/// theta ^ eta^n a volume form.  The induced bivector inverts eta on
/// ker(theta) and is stored explicitly; the leafwise frame is the kernel
/// basis e_i - (theta_i/theta_p) e_p over the non-pivot axes, kept
/// unnormalized so slope parameters appear with coefficient one.
class CosymplecticTorusModel {
 public:
  CosymplecticTorusModel(Eigen::VectorXd theta, Eigen::MatrixXd eta);

  int dim() const { return dim_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& eta() const { return eta_; }
  /// Coefficient of theta ^ eta^n against the standard volume.
  double volume_pairing() const { return volume_pairing_; }
  const Eigen::MatrixXd& bivector() const { return bivector_; }
  const std::vector<Eigen::VectorXd>& frame() const { return frame_; }

  std::vector<CheckResult> validate() const;

 private:
  int dim_;
  Eigen::VectorXd theta_;
  Eigen::MatrixXd eta_;
  double volume_pairing_ = 0.0;
  Eigen::MatrixXd bivector_;
  std::vector<Eigen::VectorXd> frame_;
};

/// Mapping torus of a hyperbolic A in SL(2,Z): the quotient of T^2 x [0,1]
/// which glues (m, 1) to (Am, 0).  Carries the leafwise 2-plane field
/// spanned by the dominant eigenvector v and d/dt, and the bivector
/// lambda^t (v ^ d/dt), the gluing-invariant normalization.
class MappingTorusModel {
 public:
  explicit MappingTorusModel(Eigen::Matrix2i gluing);

  const Eigen::Matrix2i& gluing() const { return gluing_; }
  /// Transposed action transporting Fourier modes under pullback.
  const Eigen::Matrix2i& mode_action() const { return mode_action_; }
  Eigen::Matrix2i mode_action_inverse() const;
  double lambda() const { return lambda_; }
  const Eigen::Vector2d& eigenvector() const { return eigenvector_; }
  /// Slope of the invariant line field, as eigenvector()[1]/eigenvector()[0].
  double slope() const { return slope_; }

  std::vector<CheckResult> validate() const;

 private:
  Eigen::Matrix2i gluing_;
  Eigen::Matrix2i mode_action_;
  double lambda_ = 0.0;
  Eigen::Vector2d eigenvector_;
  double slope_ = 0.0;
};

class PoissonModel;

struct ProductModel {
  std::shared_ptr<const PoissonModel> left;
  std::shared_ptr<const PoissonModel> right;
};

/// Sum type over the supported model families.  Immutable after
/// construction; all operations on models are pure functions.
class PoissonModel {
 public:
  using Storage =
      std::variant<ConstantTorusModel, CosymplecticTorusModel, MappingTorusModel, ProductModel>;

  PoissonModel(ConstantTorusModel m) : storage_(std::move(m)) {}
  PoissonModel(CosymplecticTorusModel m) : storage_(std::move(m)) {}
  PoissonModel(MappingTorusModel m) : storage_(std::move(m)) {}
  PoissonModel(ProductModel m) : storage_(std::move(m)) {}

  const Storage& storage() const { return storage_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&storage_);
  }

 private:
  Storage storage_;
};

PoissonModel make_product(PoissonModel left, PoissonModel right);

std::vector<CheckResult> validate(const PoissonModel& model);
bool is_valid(const PoissonModel& model);

std::string family_name(const PoissonModel& model);
int ambient_dim(const PoissonModel& model);
int leaf_rank(const PoissonModel& model);

/// Constant bivector matrix for families that have one (everything except
/// the mapping torus, whose bivector is time dependent).
std::optional<Eigen::MatrixXd> bivector_matrix(const PoissonModel& model);

/// Collapses constant-bivector families and their products to a single
/// ConstantTorusModel on the joint torus.  Empty for mapping-torus factors.
std::optional<ConstantTorusModel> flatten_to_constant(const PoissonModel& model);

/// Leafwise frame vectors for rank-2n constant-bivector families.
std::vector<Eigen::VectorXd> leafwise_frame(const PoissonModel& model);

/// Characteristic slope fed to the Diophantine diagnostics, when the model
/// has one (Kronecker-type cosymplectic tori and mapping tori).
std::optional<double> model_slope(const PoissonModel& model);

/// Poisson bracket {f,g} = sum_ij P_ij d_i f d_j g for constant-bivector
/// families.  Mapping-torus functions use mt_bracket instead.
TrigPolynomial bracket(const PoissonModel& model, const TrigPolynomial& f,
                       const TrigPolynomial& g);

/// X_f applied to g; equal to bracket(model, f, g).
TrigPolynomial hamiltonian_field_apply(const PoissonModel& model,
                                       const TrigPolynomial& f,
                                       const TrigPolynomial& g);

/// Coefficients of the Hamiltonian field X_f in the model's leafwise frame.
std::vector<TrigPolynomial> hamiltonian_frame_coefficients(const PoissonModel& model,
                                                           const TrigPolynomial& f);

}  // namespace folia
