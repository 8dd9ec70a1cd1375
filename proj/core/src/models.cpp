#include "folia/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace folia {

namespace {

/// Pfaffian by expansion along the first remaining index; inputs are tiny.
double pfaffian(const Eigen::MatrixXd& a, std::vector<int> idx) {
  if (idx.empty()) return 1.0;
  const int i0 = idx.front();
  double acc = 0.0;
  for (std::size_t p = 1; p < idx.size(); ++p) {
    const int j = idx[p];
    std::vector<int> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t q = 1; q < idx.size(); ++q) {
      if (q != p) rest.push_back(idx[q]);
    }
    const double sign = (p % 2 == 1) ? 1.0 : -1.0;
    acc += sign * a(i0, j) * pfaffian(a, rest);
  }
  return acc;
}

template <typename Vector>
void sign_normalize(Vector& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

/// Orthonormal basis of image(P) built from the projections of the standard
/// basis vectors, taken in axis order.
std::vector<Eigen::VectorXd> image_frame(const Eigen::MatrixXd& p, int rank) {
  const int m = static_cast<int>(p.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeFullU);
  Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
  Eigen::MatrixXd projector = basis * basis.transpose();

  std::vector<Eigen::VectorXd> frame;
  for (int i = 0; i < m && static_cast<int>(frame.size()) < rank; ++i) {
    Eigen::VectorXd w = projector * Eigen::VectorXd::Unit(m, i);
    for (const auto& e : frame) w -= e.dot(w) * e;
    if (w.norm() > 1e-10) {
      w.normalize();
      sign_normalize(w);
      frame.push_back(w);
    }
  }
  return frame;
}

int bivector_rank(const Eigen::MatrixXd& p) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTolerance * sv[0]) ++r;
  }
  return r;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

ConstantTorusModel::ConstantTorusModel(Eigen::MatrixXd bivector)
    : dim_(static_cast<int>(bivector.rows())), bivector_(std::move(bivector)) {
  if (bivector_.rows() != bivector_.cols() || dim_ <= 0) {
    throw std::invalid_argument("bivector must be a square matrix");
  }
  rank_ = bivector_rank(bivector_);
  if (rank_ > 0) frame_ = image_frame(bivector_, rank_);
}

std::vector<CheckResult> ConstantTorusModel::validate() const {
  std::vector<CheckResult> out;
  bool antisym = true;
  for (int i = 0; i < dim_ && antisym; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (bivector_(i, j) != -bivector_(j, i)) {
        antisym = false;
        break;
      }
    }
  }
  out.push_back({"bivector-antisymmetric", antisym,
                 antisym ? "P == -P^T entrywise" : "P != -P^T"});
  out.push_back({"rank-even", rank_ % 2 == 0, "rank " + std::to_string(rank_)});
  out.push_back({"rank-positive", rank_ > 0, "rank " + std::to_string(rank_)});
  out.push_back({"frame-spans-image", static_cast<int>(frame_.size()) == rank_,
                 std::to_string(frame_.size()) + " frame vectors"});
  return out;
}

CosymplecticTorusModel::CosymplecticTorusModel(Eigen::VectorXd theta, Eigen::MatrixXd eta)
    : dim_(static_cast<int>(theta.size())), theta_(std::move(theta)), eta_(std::move(eta)) {
  if (eta_.rows() != dim_ || eta_.cols() != dim_) {
    throw std::invalid_argument("eta must be square with theta's dimension");
  }
  if (dim_ % 2 == 0 || dim_ < 3) {
    throw std::invalid_argument("cosymplectic torus dimension must be odd and >= 3");
  }

  // theta ^ eta^n against dx_1 ... dx_m, expanded over the omitted axis.
  double pairing = 0.0;
  for (int i = 0; i < dim_; ++i) {
    std::vector<int> idx;
    for (int j = 0; j < dim_; ++j) {
      if (j != i) idx.push_back(j);
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    pairing += sign * theta_[i] * pfaffian(eta_, idx);
  }
  const int n = (dim_ - 1) / 2;
  double factorial = 1.0;
  for (int j = 2; j <= n; ++j) factorial *= j;
  volume_pairing_ = pairing * factorial;

  // Kernel basis of theta: e_i - (theta_i / theta_p) e_p over non-pivot axes.
  int pivot = 0;
  for (int i = 1; i < dim_; ++i) {
    if (std::abs(theta_[i]) >= std::abs(theta_[pivot])) pivot = i;
  }
  if (std::abs(theta_[pivot]) > 1e-14) {
    for (int i = 0; i < dim_; ++i) {
      if (i == pivot) continue;
      Eigen::VectorXd b = Eigen::VectorXd::Unit(dim_, i);
      b[pivot] = -theta_[i] / theta_[pivot];
      frame_.push_back(b);
    }
  }

  bivector_ = Eigen::MatrixXd::Zero(dim_, dim_);
  if (static_cast<int>(frame_.size()) == dim_ - 1) {
    Eigen::MatrixXd basis(dim_, dim_ - 1);
    for (int j = 0; j < dim_ - 1; ++j) basis.col(j) = frame_[j];
    Eigen::MatrixXd restricted = basis.transpose() * eta_ * basis;
    if (std::abs(restricted.determinant()) > 1e-14) {
      // {f,g} = (grad f)^T P grad g with P inverting eta on ker(theta); the
      // minus sign matches the convention of the constant-torus examples.
      Eigen::MatrixXd inv = -restricted.inverse();
      bivector_ = basis * inv * basis.transpose();
      bivector_ = 0.5 * (bivector_ - bivector_.transpose().eval());
    }
  }
}

std::vector<CheckResult> CosymplecticTorusModel::validate() const {
  std::vector<CheckResult> out;
  out.push_back({"closed-forms", true, "constant coefficients, d(theta) = d(eta) = 0"});
  const bool volume_ok = std::abs(volume_pairing_) > 1e-12;
  std::ostringstream vol;
  vol << "theta ^ eta^n pairing " << volume_pairing_;
  out.push_back({"volume-form", volume_ok, vol.str()});
  const bool bivector_ok = bivector_rank(bivector_) == dim_ - 1;
  out.push_back({"bivector-corank-one", bivector_ok,
                 "rank " + std::to_string(bivector_rank(bivector_))});
  const double kernel_residual = (theta_.transpose() * bivector_).norm();
  out.push_back({"bivector-image-in-kernel", kernel_residual <= 1e-12,
                 "theta^T P norm " + std::to_string(kernel_residual)});
  return out;
}

MappingTorusModel::MappingTorusModel(Eigen::Matrix2i gluing) : gluing_(std::move(gluing)) {
  mode_action_ = gluing_.transpose();
  const double tr = gluing_(0, 0) + gluing_(1, 1);
  const double disc = tr * tr - 4.0;
  if (disc > 0.0) {
    lambda_ = (tr >= 0.0) ? 0.5 * (tr + std::sqrt(disc)) : 0.5 * (tr - std::sqrt(disc));
    Eigen::Matrix2d a = gluing_.cast<double>();
    Eigen::Vector2d cand1(a(0, 1), lambda_ - a(0, 0));
    Eigen::Vector2d cand2(lambda_ - a(1, 1), a(1, 0));
    eigenvector_ = (cand1.norm() >= cand2.norm()) ? cand1 : cand2;
    eigenvector_.normalize();
    sign_normalize(eigenvector_);
    if (std::abs(eigenvector_[0]) > 1e-14) slope_ = eigenvector_[1] / eigenvector_[0];
  }
}

Eigen::Matrix2i MappingTorusModel::mode_action_inverse() const {
  Eigen::Matrix2i inv;
  // det == 1, so the adjugate is the inverse.
  inv << mode_action_(1, 1), -mode_action_(0, 1), -mode_action_(1, 0), mode_action_(0, 0);
  return inv;
}

std::vector<CheckResult> MappingTorusModel::validate() const {
  std::vector<CheckResult> out;
  const int det = gluing_(0, 0) * gluing_(1, 1) - gluing_(0, 1) * gluing_(1, 0);
  out.push_back({"determinant-one", det == 1, "det " + std::to_string(det)});
  const int tr = gluing_(0, 0) + gluing_(1, 1);
  out.push_back({"hyperbolic", std::abs(tr) > 2, "trace " + std::to_string(tr)});
  const double mag = std::abs(lambda_);
  out.push_back({"dominant-eigenvalue", mag > 1.0, "lambda " + std::to_string(lambda_)});
  Eigen::Vector2d image = gluing_.cast<double>() * eigenvector_;
  const double residual = (image - lambda_ * eigenvector_).norm();
  out.push_back({"eigenvector", residual <= 1e-12,
                 "A v - lambda v norm " + std::to_string(residual)});
  const double cross = image[0] * eigenvector_[1] - image[1] * eigenvector_[0];
  out.push_back({"invariant-plane-field", std::abs(cross) <= 1e-12,
                 "A v parallel to v, cross " + std::to_string(cross)});
  return out;
}

PoissonModel make_product(PoissonModel left, PoissonModel right) {
  ProductModel p;
  p.left = std::make_shared<PoissonModel>(std::move(left));
  p.right = std::make_shared<PoissonModel>(std::move(right));
  return PoissonModel(std::move(p));
}

std::vector<CheckResult> validate(const PoissonModel& model) {
  return std::visit(
      [](const auto& m) -> std::vector<CheckResult> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductModel>) {
          std::vector<CheckResult> out = validate(*m.left);
          std::vector<CheckResult> right = validate(*m.right);
          for (auto& r : right) {
            r.name = "right:" + r.name;
            out.push_back(std::move(r));
          }
          for (std::size_t i = 0; i < out.size() - right.size(); ++i) {
            out[i].name = "left:" + out[i].name;
          }
          return out;
        } else {
          return m.validate();
        }
      },
      model.storage());
}

bool is_valid(const PoissonModel& model) {
  for (const auto& check : validate(model)) {
    if (!check.passed) return false;
  }
  return true;
}

std::string family_name(const PoissonModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantTorusModel>) return "constant-torus";
        if constexpr (std::is_same_v<T, CosymplecticTorusModel>) return "cosymplectic-torus";
        if constexpr (std::is_same_v<T, MappingTorusModel>) return "mapping-torus";
        return "product";
      },
      model.storage());
}

int ambient_dim(const PoissonModel& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantTorusModel>) return m.dim();
        if constexpr (std::is_same_v<T, CosymplecticTorusModel>) return m.dim();
        if constexpr (std::is_same_v<T, MappingTorusModel>) return 3;
        if constexpr (std::is_same_v<T, ProductModel>) {
          return ambient_dim(*m.left) + ambient_dim(*m.right);
        }
      },
      model.storage());
}

int leaf_rank(const PoissonModel& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantTorusModel>) return m.rank();
        if constexpr (std::is_same_v<T, CosymplecticTorusModel>) return m.dim() - 1;
        if constexpr (std::is_same_v<T, MappingTorusModel>) return 2;
        if constexpr (std::is_same_v<T, ProductModel>) {
          return leaf_rank(*m.left) + leaf_rank(*m.right);
        }
      },
      model.storage());
}

std::optional<Eigen::MatrixXd> bivector_matrix(const PoissonModel& model) {
  return std::visit(
      [](const auto& m) -> std::optional<Eigen::MatrixXd> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantTorusModel>) return m.bivector();
        if constexpr (std::is_same_v<T, CosymplecticTorusModel>) return m.bivector();
        if constexpr (std::is_same_v<T, MappingTorusModel>) return std::nullopt;
        if constexpr (std::is_same_v<T, ProductModel>) {
          auto l = bivector_matrix(*m.left);
          auto r = bivector_matrix(*m.right);
          if (!l || !r) return std::nullopt;
          return block_diagonal(*l, *r);
        }
      },
      model.storage());
}

std::optional<ConstantTorusModel> flatten_to_constant(const PoissonModel& model) {
  auto p = bivector_matrix(model);
  if (!p) return std::nullopt;
  return ConstantTorusModel(*p);
}

std::vector<Eigen::VectorXd> leafwise_frame(const PoissonModel& model) {
  return std::visit(
      [&](const auto& m) -> std::vector<Eigen::VectorXd> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantTorusModel>) return m.frame();
        if constexpr (std::is_same_v<T, CosymplecticTorusModel>) return m.frame();
        if constexpr (std::is_same_v<T, MappingTorusModel>) {
          throw std::invalid_argument("mapping torus has no constant ambient frame");
        }
        if constexpr (std::is_same_v<T, ProductModel>) {
          auto flat = flatten_to_constant(model);
          if (!flat) {
            throw std::invalid_argument("product with mapping-torus factor has no constant frame");
          }
          return flat->frame();
        }
      },
      model.storage());
}

std::optional<double> model_slope(const PoissonModel& model) {
  if (const auto* mt = model.get_if<MappingTorusModel>()) {
    double s = std::abs(mt->slope());
    return s - std::floor(s);
  }
  if (const auto* cs = model.get_if<CosymplecticTorusModel>()) {
    // Slope of the first kernel direction against its own axis, e.g. the
    // alpha of theta = (-alpha, 0, 1).
    if (cs->frame().empty()) return std::nullopt;
    const Eigen::VectorXd& b = cs->frame().front();
    int axis = -1;
    for (int i = 0; i < b.size(); ++i) {
      if (std::abs(b[i]) == 1.0 && axis < 0) axis = i;
    }
    if (axis < 0) return std::nullopt;
    for (int i = 0; i < b.size(); ++i) {
      if (i != axis && std::abs(b[i]) > 1e-14) {
        double s = std::abs(b[i] / b[axis]);
        return s - std::floor(s);
      }
    }
    return 0.0;
  }
  return std::nullopt;
}

TrigPolynomial bracket(const PoissonModel& model, const TrigPolynomial& f,
                       const TrigPolynomial& g) {
  auto p = bivector_matrix(model);
  if (!p) {
    throw std::invalid_argument("mapping-torus functions use the equivariant bracket");
  }
  if (f.dim() != p->rows() || g.dim() != p->rows()) {
    throw std::invalid_argument("function dimension does not match the model");
  }
  // {e_a, e_b} = -4 pi^2 (a^T P b) e_{a+b}, extended bilinearly.
  std::vector<std::pair<Mode, Complex>> terms;
  terms.reserve(f.term_count() * g.term_count());
  const int m = static_cast<int>(p->rows());
  for (const auto& [a, ca] : f.coefficients()) {
    Eigen::VectorXd pa = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) pa[j] += a[i] * (*p)(i, j);
    }
    for (const auto& [b, cb] : g.coefficients()) {
      double pairing = 0.0;
      for (int j = 0; j < m; ++j) pairing += pa[j] * b[j];
      if (pairing == 0.0) continue;
      terms.emplace_back(mode_add(a, b), -kTwoPi * kTwoPi * pairing * ca * cb);
    }
  }
  return TrigPolynomial::from_coefficients(f.dim(), terms);
}

TrigPolynomial hamiltonian_field_apply(const PoissonModel& model, const TrigPolynomial& f,
                                       const TrigPolynomial& g) {
  return bracket(model, f, g);
}

std::vector<TrigPolynomial> hamiltonian_frame_coefficients(const PoissonModel& model,
                                                           const TrigPolynomial& f) {
  auto p = bivector_matrix(model);
  if (!p) {
    throw std::invalid_argument("mapping-torus functions use the equivariant bracket");
  }
  const auto frame = leafwise_frame(model);
  const int m = static_cast<int>(p->rows());
  Eigen::MatrixXd basis(m, static_cast<int>(frame.size()));
  for (std::size_t j = 0; j < frame.size(); ++j) basis.col(static_cast<int>(j)) = frame[j];
  // X_f = P^T grad f; its frame coefficients are (B^T B)^{-1} B^T X_f.
  Eigen::MatrixXd dual = (basis.transpose() * basis).inverse() * basis.transpose();
  Eigen::MatrixXd rows = dual * p->transpose();
  std::vector<TrigPolynomial> out;
  out.reserve(frame.size());
  for (int j = 0; j < rows.rows(); ++j) {
    std::vector<double> direction(m);
    for (int i = 0; i < m; ++i) direction[i] = rows(j, i);
    out.push_back(directional_derivative(f, direction));
  }
  return out;
}

}  // namespace folia
