#include "folia/mapping_torus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace folia {

namespace {

void require_grid(int grid) {
  if (grid < 8 || grid % 2 != 0) {
    throw std::invalid_argument("time grid must be even and >= 8");
  }
}

/// Fornberg weights for the derivative of given order at x0 over the nodes.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][order];
  return w;
}

/// 6th-order differentiation matrix on t_j = j/G with 7-point stencils,
/// shifted at the boundaries.  Exact on polynomials of degree <= 6, which
/// covers every curve the solver and the input generator produce.
Eigen::MatrixXd derivative_matrix(int grid) {
  const auto t = time_grid(grid);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(grid + 1, grid + 1);
  for (int i = 0; i <= grid; ++i) {
    int start = std::clamp(i - 3, 0, grid - 6);
    std::vector<double> nodes(t.begin() + start, t.begin() + start + 7);
    const auto w = fornberg_weights(t[i], nodes, 1);
    for (int j = 0; j < 7; ++j) d(i, start + j) = w[j];
  }
  return d;
}

/// Composite Boole weights when 4 | G (exact through degree 5), otherwise
/// composite Simpson (exact through degree 3).
std::vector<double> quadrature_weights(int grid) {
  std::vector<double> w(grid + 1, 0.0);
  const double h = 1.0 / grid;
  if (grid % 4 == 0) {
    for (int block = 0; block < grid; block += 4) {
      w[block] += 14.0 * h / 45.0;
      w[block + 1] += 64.0 * h / 45.0;
      w[block + 2] += 24.0 * h / 45.0;
      w[block + 3] += 64.0 * h / 45.0;
      w[block + 4] += 14.0 * h / 45.0;
    }
  } else {
    for (int block = 0; block < grid; block += 2) {
      w[block] += h / 3.0;
      w[block + 1] += 4.0 * h / 3.0;
      w[block + 2] += h / 3.0;
    }
  }
  return w;
}

std::vector<Complex> apply_matrix(const Eigen::MatrixXd& m, const std::vector<Complex>& x) {
  std::vector<Complex> y(x.size(), Complex(0.0, 0.0));
  for (int i = 0; i < m.rows(); ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double curve_sup(const std::vector<Complex>& c) {
  double s = 0.0;
  for (const auto& v : c) s = std::max(s, std::abs(v));
  return s;
}

double mode_dot(const Mode2& k, const Eigen::Vector2d& v) {
  return k[0] * v[0] + k[1] * v[1];
}

void store_curve(EquivariantFunction& f, const Mode2& k, std::vector<Complex> curve) {
  if (curve_sup(curve) >= kPruneThreshold) f.curves[k] = std::move(curve);
}

void require_curve_sizes(const EquivariantFunction& f) {
  for (const auto& [k, c] : f.curves) {
    if (static_cast<int>(c.size()) != f.grid + 1) {
      throw std::invalid_argument("curve sample count does not match the grid");
    }
  }
}

}  // namespace

std::vector<double> time_grid(int grid) {
  require_grid(grid);
  std::vector<double> t(grid + 1);
  for (int j = 0; j <= grid; ++j) t[j] = static_cast<double>(j) / grid;
  return t;
}

EquivariantFunction EquivariantFunction::zero(int grid, int weight) {
  require_grid(grid);
  EquivariantFunction f;
  f.grid = grid;
  f.weight = weight;
  return f;
}

int EquivariantFunction::arena() const {
  int n = 0;
  for (const auto& [k, c] : curves) {
    n = std::max({n, std::abs(k[0]), std::abs(k[1])});
  }
  return n;
}

double EquivariantFunction::sup_estimate() const {
  double s = 0.0;
  for (const auto& [k, c] : curves) s += curve_sup(c);
  return s;
}

bool EquivariantFunction::is_real_valued(double tol) const {
  for (const auto& [k, c] : curves) {
    const Mode2 neg{-k[0], -k[1]};
    auto it = curves.find(neg);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Complex mirror = (it == curves.end()) ? Complex(0.0, 0.0) : it->second[j];
      if (std::abs(mirror - std::conj(c[j])) > tol) return false;
    }
  }
  return true;
}

Mode2 mode_apply(const Eigen::Matrix2i& m, const Mode2& k) {
  return Mode2{m(0, 0) * k[0] + m(0, 1) * k[1], m(1, 0) * k[0] + m(1, 1) * k[1]};
}

EquivariantFunction ef_add(const EquivariantFunction& f, const EquivariantFunction& g) {
  if (f.grid != g.grid) throw std::invalid_argument("time grids must match");
  if (f.weight != g.weight) throw std::invalid_argument("weights must match");
  EquivariantFunction out = EquivariantFunction::zero(f.grid, f.weight);
  std::map<Mode2, std::vector<Complex>> acc = f.curves;
  for (const auto& [k, c] : g.curves) {
    auto& curve =
        acc.try_emplace(k, std::vector<Complex>(f.grid + 1, Complex(0.0, 0.0))).first->second;
    for (int j = 0; j <= f.grid; ++j) curve[j] += c[j];
  }
  for (auto& [k, curve] : acc) store_curve(out, k, std::move(curve));
  return out;
}

EquivariantFunction ef_scale(Complex s, const EquivariantFunction& f) {
  EquivariantFunction out = EquivariantFunction::zero(f.grid, f.weight);
  for (const auto& [k, c] : f.curves) {
    std::vector<Complex> curve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) curve[j] = s * c[j];
    store_curve(out, k, std::move(curve));
  }
  return out;
}

EquivariantFunction ef_multiply(const EquivariantFunction& f, const EquivariantFunction& g) {
  if (f.grid != g.grid) throw std::invalid_argument("time grids must match");
  std::map<Mode2, std::vector<Complex>> acc;
  for (const auto& [ka, ca] : f.curves) {
    for (const auto& [kb, cb] : g.curves) {
      const Mode2 sum{ka[0] + kb[0], ka[1] + kb[1]};
      auto& curve = acc.try_emplace(sum, std::vector<Complex>(f.grid + 1, Complex(0.0, 0.0)))
                        .first->second;
      for (int j = 0; j <= f.grid; ++j) curve[j] += ca[j] * cb[j];
    }
  }
  EquivariantFunction out = EquivariantFunction::zero(f.grid, f.weight + g.weight);
  for (auto& [k, curve] : acc) store_curve(out, k, std::move(curve));
  return out;
}

double seam_mismatch(const MappingTorusModel& model, const EquivariantFunction& f) {
  if (f.curves.empty()) return 0.0;
  const double scale = std::pow(model.lambda(), f.weight);
  const Eigen::Matrix2i inverse = model.mode_action_inverse();

  std::set<Mode2> sources;
  for (const auto& [k, c] : f.curves) {
    sources.insert(k);
    sources.insert(mode_apply(inverse, k));
  }
  double mismatch = 0.0;
  for (const auto& k : sources) {
    auto at = [&](const Mode2& mode, std::size_t j) -> Complex {
      auto it = f.curves.find(mode);
      return it == f.curves.end() ? Complex(0.0, 0.0) : it->second[j];
    };
    const Mode2 image = mode_apply(model.mode_action(), k);
    mismatch = std::max(mismatch,
                        std::abs(at(image, 0) - scale * at(k, static_cast<std::size_t>(f.grid))));
  }
  return mismatch;
}

std::vector<LatticeOrbit> orbit_decomposition(const MappingTorusModel& model, int truncation,
                                              int extended) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  const Eigen::Matrix2i action = model.mode_action();
  const Eigen::Matrix2i inverse = model.mode_action_inverse();
  int norm = 0;
  for (int i = 0; i < 2; ++i) {
    norm = std::max(norm, std::abs(action(i, 0)) + std::abs(action(i, 1)));
  }
  if (extended <= 0) extended = (norm + 1) * truncation;

  auto inside = [](const Mode2& k, int bound) {
    return std::abs(k[0]) <= bound && std::abs(k[1]) <= bound;
  };

  std::set<Mode2> visited;
  std::vector<LatticeOrbit> orbits;
  for (int k0 = -truncation; k0 <= truncation; ++k0) {
    for (int k1 = -truncation; k1 <= truncation; ++k1) {
      const Mode2 base{k0, k1};
      if (visited.count(base)) continue;
      LatticeOrbit orbit;
      orbit.base = base;
      orbit.fixed_point = (k0 == 0 && k1 == 0);
      // Walk backward to the segment start inside the extended box, then
      // forward through it.
      Mode2 start = base;
      if (!orbit.fixed_point) {
        Mode2 prev = mode_apply(inverse, start);
        while (inside(prev, extended) && !(prev == base)) {
          start = prev;
          prev = mode_apply(inverse, start);
        }
      }
      Mode2 cur = start;
      while (inside(cur, extended)) {
        orbit.segment.push_back(cur);
        visited.insert(cur);
        if (orbit.fixed_point) break;
        cur = mode_apply(model.mode_action(), cur);
        if (cur == start) break;
      }
      orbits.push_back(std::move(orbit));
    }
  }
  return orbits;
}

EquivariantFunction mt_bracket(const MappingTorusModel& model, const EquivariantFunction& f,
                               const EquivariantFunction& g) {
  if (f.grid != g.grid) throw std::invalid_argument("time grids must match");
  const int grid = f.grid;
  require_grid(grid);
  require_curve_sizes(f);
  require_curve_sizes(g);
  const auto t = time_grid(grid);
  const Eigen::MatrixXd d = derivative_matrix(grid);
  const Eigen::Vector2d v = model.eigenvector();

  struct Prepared {
    Mode2 mode;
    std::vector<Complex> v_part;   // 2 pi i (k.v) c_k
    std::vector<Complex> dt_part;  // d_t c_k
  };
  auto prepare = [&](const EquivariantFunction& h) {
    std::vector<Prepared> out;
    out.reserve(h.curves.size());
    for (const auto& [k, c] : h.curves) {
      Prepared p;
      p.mode = k;
      const Complex mult(0.0, kTwoPi * mode_dot(k, v));
      p.v_part.resize(c.size());
      for (std::size_t j = 0; j < c.size(); ++j) p.v_part[j] = mult * c[j];
      p.dt_part = apply_matrix(d, c);
      out.push_back(std::move(p));
    }
    return out;
  };

  const auto pf = prepare(f);
  const auto pg = prepare(g);

  std::vector<double> scaling(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) scaling[j] = std::pow(model.lambda(), t[j]);

  std::map<Mode2, std::vector<Complex>> acc;
  for (const auto& a : pf) {
    for (const auto& b : pg) {
      const Mode2 sum{a.mode[0] + b.mode[0], a.mode[1] + b.mode[1]};
      auto& curve = acc.try_emplace(sum, std::vector<Complex>(t.size(), Complex(0.0, 0.0)))
                        .first->second;
      for (std::size_t j = 0; j < t.size(); ++j) {
        curve[j] += scaling[j] * (a.v_part[j] * b.dt_part[j] - a.dt_part[j] * b.v_part[j]);
      }
    }
  }

  EquivariantFunction out = EquivariantFunction::zero(grid, f.weight + g.weight);
  for (auto& [k, curve] : acc) store_curve(out, k, std::move(curve));
  return out;
}

EquivariantFunction d_mt_top(const MappingTorusModel& model, const EquivariantFunction& a,
                             const EquivariantFunction& b) {
  if (a.grid != b.grid) throw std::invalid_argument("time grids must match");
  const int grid = a.grid;
  require_grid(grid);
  require_curve_sizes(a);
  require_curve_sizes(b);
  const Eigen::MatrixXd d = derivative_matrix(grid);
  const Eigen::Vector2d v = model.eigenvector();

  std::map<Mode2, std::vector<Complex>> acc;
  for (const auto& [k, c] : b.curves) {
    const Complex mult(0.0, kTwoPi * mode_dot(k, v));
    auto& curve =
        acc.try_emplace(k, std::vector<Complex>(grid + 1, Complex(0.0, 0.0))).first->second;
    for (int j = 0; j <= grid; ++j) curve[j] += mult * c[j];
  }
  for (const auto& [k, c] : a.curves) {
    auto& curve =
        acc.try_emplace(k, std::vector<Complex>(grid + 1, Complex(0.0, 0.0))).first->second;
    const auto dc = apply_matrix(d, c);
    for (int j = 0; j <= grid; ++j) curve[j] -= dc[j];
  }

  EquivariantFunction out = EquivariantFunction::zero(grid, 0);
  for (auto& [k, curve] : acc) store_curve(out, k, std::move(curve));
  return out;
}

namespace {

/// Cap profile t (1-t)^2: zero endpoint values, unit derivative at t = 0,
/// zero derivative at t = 1, degree 3.
std::vector<Complex> cap_curve(const std::vector<double>& t, Complex scale) {
  std::vector<Complex> c(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double u = t[j];
    c[j] = scale * (u * (1.0 - u) * (1.0 - u));
  }
  return c;
}

double residual_against(const MappingTorusModel& model, const EquivariantFunction& a,
                        const EquivariantFunction& b, const EquivariantFunction& f) {
  EquivariantFunction d = d_mt_top(model, a, b);
  std::set<Mode2> modes;
  for (const auto& [k, c] : d.curves) modes.insert(k);
  for (const auto& [k, c] : f.curves) modes.insert(k);
  double r = 0.0;
  for (const auto& k : modes) {
    auto itd = d.curves.find(k);
    auto itf = f.curves.find(k);
    for (int j = 0; j <= f.grid; ++j) {
      const Complex lhs = itd == d.curves.end() ? Complex(0.0, 0.0) : itd->second[j];
      const Complex rhs = itf == f.curves.end() ? Complex(0.0, 0.0) : itf->second[j];
      r = std::max(r, std::abs(lhs - rhs));
    }
  }
  return r;
}

}  // namespace

MtSolveResult solve_mt_top_primitive(const MappingTorusModel& model, const EquivariantFunction& f,
                                     const MtSolveOptions& options) {
  const int grid = f.grid;
  require_grid(grid);
  require_curve_sizes(f);
  if (f.weight != 0) {
    throw std::invalid_argument("top coefficients carry weight 0");
  }
  const auto t = time_grid(grid);
  const Eigen::MatrixXd d = derivative_matrix(grid);
  const double lambda = model.lambda();
  const Eigen::Vector2d v = model.eigenvector();

  MtSolveResult result;
  result.a = EquivariantFunction::zero(grid, -1);
  result.b = EquivariantFunction::zero(grid, 0);
  result.report.input_seam_mismatch = seam_mismatch(model, f);

  // k = 0: affine seam fixed point.  Solve d_t a_0 = -f_0 against the same
  // difference operator used by d_mt_top, with a_0(0) = -(int f_0)/(lambda-1).
  auto it0 = f.curves.find(Mode2{0, 0});
  if (it0 != f.curves.end()) {
    const auto& f0 = it0->second;
    const auto w = quadrature_weights(grid);
    Complex integral(0.0, 0.0);
    for (int j = 0; j <= grid; ++j) integral += w[j] * f0[j];
    const Complex a00 = -integral / (lambda - 1.0);
    result.report.seam_constant = a00;

    Eigen::MatrixXcd system = Eigen::MatrixXcd::Zero(grid + 1, grid + 1);
    Eigen::VectorXcd rhs(grid + 1);
    system.row(0).setZero();
    system(0, 0) = Complex(1.0, 0.0);
    rhs[0] = a00;
    for (int i = 1; i <= grid; ++i) {
      for (int j = 0; j <= grid; ++j) system(i, j) = Complex(d(i, j), 0.0);
      rhs[i] = -f0[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
    if (!lu.isInvertible()) {
      result.report.failures.push_back("time integration system is singular");
    } else {
      Eigen::VectorXcd sol = lu.solve(rhs);
      std::vector<Complex> a0(grid + 1);
      for (int j = 0; j <= grid; ++j) a0[j] = sol[j];
      store_curve(result.a, Mode2{0, 0}, std::move(a0));
    }
  }

  // Nonzero modes, chained along the transposed action.  The a component
  // carries only seam caps; b absorbs the rest pointwise, so the residual
  // vanishes identically on these modes.
  std::set<Mode2> visited;
  const Eigen::Matrix2i inverse = model.mode_action_inverse();
  for (const auto& [base, curve] : f.curves) {
    if ((base == Mode2{0, 0}) || visited.count(base)) continue;

    Mode2 start = base;
    int back_steps = 0;
    while (f.curves.count(mode_apply(inverse, start)) &&
           !(mode_apply(inverse, start) == Mode2{0, 0})) {
      start = mode_apply(inverse, start);
      if (++back_steps > options.orbit_budget) break;
    }
    if (back_steps > options.orbit_budget) {
      std::ostringstream os;
      os << "orbit extension budget exceeded walking back from (" << base[0] << "," << base[1]
         << ")";
      result.report.failures.push_back(os.str());
      continue;
    }
    ++result.report.orbit_count;

    Complex prev_end(0.0, 0.0);  // f value at t=1 on the previous mode
    Mode2 cur = start;
    int steps = 0;
    bool more = true;
    while (more) {
      auto itf = f.curves.find(cur);
      const bool supported = itf != f.curves.end();
      if (supported) visited.insert(cur);

      const double divisor = kTwoPi * mode_dot(cur, v);
      if (std::abs(divisor) < options.divisor_floor) {
        std::ostringstream os;
        os << "divisor " << std::abs(divisor) << " below floor at mode (" << cur[0] << ","
           << cur[1] << ")";
        result.report.failures.push_back(os.str());
        break;
      }
      result.report.min_divisor = std::min(result.report.min_divisor, std::abs(divisor));

      const Complex q = (lambda - 1.0) * prev_end;
      std::vector<Complex> a_curve;
      std::vector<Complex> da(grid + 1, Complex(0.0, 0.0));
      if (std::abs(q) >= kPruneThreshold) {
        a_curve = cap_curve(t, q);
        da = apply_matrix(d, a_curve);
        store_curve(result.a, cur, std::move(a_curve));
      }

      std::vector<Complex> b_curve(grid + 1);
      const Complex inv_divisor = Complex(1.0, 0.0) / Complex(0.0, divisor);
      for (int j = 0; j <= grid; ++j) {
        const Complex fj = supported ? itf->second[j] : Complex(0.0, 0.0);
        b_curve[j] = (fj + da[j]) * inv_divisor;
      }
      store_curve(result.b, cur, std::move(b_curve));

      prev_end = supported ? itf->second[grid] : Complex(0.0, 0.0);
      if (!supported) more = false;  // one closing step past the support
      cur = mode_apply(model.mode_action(), cur);
      if (++steps > options.orbit_budget) {
        result.report.failures.push_back("orbit extension budget exceeded");
        break;
      }
    }
  }

  result.residual = residual_against(model, result.a, result.b, f);
  if (result.residual > options.tolerance) {
    std::ostringstream os;
    os << "residual " << result.residual << " above tolerance " << options.tolerance;
    result.report.failures.push_back(os.str());
  }
  return result;
}

H2Certificate h2_vanishing_certificate(const MappingTorusModel& model,
                                       const H2CertificateParams& params) {
  H2Certificate cert;
  cert.params = params;

  MtSolveOptions options;
  options.tolerance = params.tolerance;

  auto record = [&](const MtSolveResult& r) {
    cert.max_residual = std::max(cert.max_residual, r.residual);
    cert.max_seam_mismatch = std::max(cert.max_seam_mismatch, seam_mismatch(model, r.a));
    cert.max_seam_mismatch = std::max(cert.max_seam_mismatch, seam_mismatch(model, r.b));
    for (const auto& failure : r.report.failures) cert.failures.push_back(failure);
  };

  // Unit input first: the coefficient of the leafwise volume itself.
  EquivariantFunction unit = EquivariantFunction::zero(params.grid, 0);
  unit.curves[Mode2{0, 0}] = std::vector<Complex>(params.grid + 1, Complex(1.0, 0.0));
  MtSolveResult unit_result = solve_mt_top_primitive(model, unit, options);
  cert.unit_input_constant = unit_result.report.seam_constant;
  record(unit_result);

  std::mt19937_64 rng(params.seed);
  for (int trial = 0; trial < params.trials; ++trial) {
    EquivariantFunction f =
        random_equivariant_function(model, params.truncation, params.grid, rng);
    record(solve_mt_top_primitive(model, f, options));
  }

  cert.passed = cert.failures.empty() && cert.max_residual <= params.tolerance &&
                cert.max_seam_mismatch <= params.tolerance;
  return cert;
}

EquivariantFunction random_equivariant_function(const MappingTorusModel& model, int truncation,
                                                int grid, std::mt19937_64& rng,
                                                double amplitude) {
  require_grid(grid);
  const auto t = time_grid(grid);
  EquivariantFunction f = EquivariantFunction::zero(grid, 0);

  // k = 0: real cubic with matching endpoint values and derivatives, so the
  // quotient function is C^1 across the seam and integrates exactly under
  // the 4th-order machinery.
  {
    const double base = 0.5 * unit_interval_sample(rng);
    const double swing = 0.5 * unit_interval_sample(rng);
    std::vector<Complex> c(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double u = t[j];
      c[j] = Complex(base + swing * (u * u * u - 1.5 * u * u + 0.5 * u), 0.0);
    }
    store_curve(f, Mode2{0, 0}, std::move(c));
  }

  auto hermite = [&](Complex p0, Complex m0, Complex p1, Complex m1, Complex bump) {
    std::vector<Complex> c(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double u = t[j];
      const double h00 = 2 * u * u * u - 3 * u * u + 1;
      const double h10 = u * u * u - 2 * u * u + u;
      const double h01 = -2 * u * u * u + 3 * u * u;
      const double h11 = u * u * u - u * u;
      const double bell = u * u * (1.0 - u) * (1.0 - u);
      c[j] = h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1 + bell * bump;
    }
    return c;
  };

  auto random_complex = [&](double scale) {
    return Complex(scale * unit_interval_sample(rng), scale * unit_interval_sample(rng));
  };

  std::set<Mode2> used;
  const int chains = 3;
  for (int chain = 0; chain < chains; ++chain) {
    // Draw a small base mode whose forward walk stays inside the box for at
    // least one step.
    Mode2 base{0, 0};
    for (int attempt = 0; attempt < 32; ++attempt) {
      const int b0 = static_cast<int>(rng() % 5) - 2;
      const int b1 = static_cast<int>(rng() % 5) - 2;
      if (b0 == 0 && b1 == 0) continue;
      const Mode2 candidate{b0, b1};
      const Mode2 mirror{-b0, -b1};
      if (used.count(candidate) || used.count(mirror)) continue;
      base = candidate;
      break;
    }
    if (base == Mode2{0, 0}) continue;

    std::vector<Mode2> segment;
    Mode2 cur = base;
    while (std::abs(cur[0]) <= truncation && std::abs(cur[1]) <= truncation &&
           static_cast<int>(segment.size()) < 6) {
      if (used.count(cur) || used.count(Mode2{-cur[0], -cur[1]})) break;
      segment.push_back(cur);
      cur = mode_apply(model.mode_action(), cur);
    }
    if (segment.empty()) continue;

    Complex prev_value(0.0, 0.0);
    Complex prev_slope(0.0, 0.0);
    for (std::size_t j = 0; j < segment.size(); ++j) {
      const bool last = (j + 1 == segment.size());
      const Complex end_value = last ? Complex(0.0, 0.0) : random_complex(0.4);
      const Complex end_slope = last ? Complex(0.0, 0.0) : random_complex(0.6);
      auto curve = hermite(prev_value, prev_slope, end_value, end_slope, random_complex(0.4));
      std::vector<Complex> mirror(curve.size());
      for (std::size_t s = 0; s < curve.size(); ++s) mirror[s] = std::conj(curve[s]);
      store_curve(f, segment[j], std::move(curve));
      store_curve(f, Mode2{-segment[j][0], -segment[j][1]}, std::move(mirror));
      used.insert(segment[j]);
      used.insert(Mode2{-segment[j][0], -segment[j][1]});
      prev_value = end_value;
      prev_slope = end_slope;
    }
  }

  const double scale = f.sup_estimate();
  if (scale > 0.0) {
    for (auto& [k, c] : f.curves) {
      for (auto& value : c) value *= amplitude / scale;
    }
  }
  return f;
}

}  // namespace folia
