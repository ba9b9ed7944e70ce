#include "dbar/forward.hpp"

#include <cmath>
#include <random>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

#include "dbar/errors.hpp"

namespace dbar {

namespace {

double cross(cplx a, cplx b, cplx c) { return ((b - a) * std::conj(c - a)).imag() * -1.0; }

// Zips ring `a` (inner) to ring `b` (outer); both are ccw with the first
// node at angle 0.
void zip_rings(const std::vector<int>& a, const std::vector<int>& b, std::vector<std::array<int, 3>>& tris) {
  const auto na = a.size();
  const auto nb = b.size();
  if (na == 1) {
    for (std::size_t j = 0; j < nb; ++j) tris.push_back({a[0], b[j], b[(j + 1) % nb]});
    return;
  }
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < na || ib < nb) {
    // Next angles as fractions of a full turn; exact rationals avoid ties
    // being broken by rounding.
    const double next_a = static_cast<double>(ia + 1) / static_cast<double>(na);
    const double next_b = static_cast<double>(ib + 1) / static_cast<double>(nb);
    if (ib == nb || (ia < na && next_a <= next_b)) {
      tris.push_back({a[ia], a[(ia + 1) % na], b[ib % nb]});
      ++ia;
    } else {
      tris.push_back({a[ia % na], b[ib], b[(ib + 1) % nb]});
      ++ib;
    }
  }
}

}  // namespace

DiskMesh build_disk_mesh(int rings) {
  if (rings < 1) throw InvalidArgument("disk mesh needs at least one ring");
  DiskMesh mesh;
  mesh.rings = rings;
  mesh.vertices.push_back(0.0);
  std::vector<int> previous{0};
  for (int i = 1; i <= rings; ++i) {
    std::vector<int> ring;
    const int count = 6 * i;
    const double r = static_cast<double>(i) / rings;
    for (int j = 0; j < count; ++j) {
      ring.push_back(static_cast<int>(mesh.vertices.size()));
      mesh.vertices.push_back(std::polar(r, 2.0 * pi * j / count));
    }
    zip_rings(previous, ring, mesh.triangles);
    previous = std::move(ring);
  }
  mesh.boundary = previous;
  for (auto& t : mesh.triangles)
    if (cross(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) < 0.0) std::swap(t[1], t[2]);
  return mesh;
}

int rings_for_triangles(std::size_t triangles) {
  return std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(triangles) / 6.0))));
}

DNMatrix assemble_dn(const std::function<cplx(cplx)>& q, int n_modes, const DiskMesh& mesh) {
  if (n_modes < 1) throw InvalidArgument("N must be at least 1");
  const auto nv = static_cast<int>(mesh.vertices.size());

  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(mesh.triangles.size() * 9);
  for (const auto& t : mesh.triangles) {
    const cplx p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    const double area = 0.5 * cross(p[0], p[1], p[2]);
    // ∇φ_a = i·(p_c - p_b)/(2·area) as a complex number, (a, b, c) cyclic.
    cplx grad[3];
    for (int a = 0; a < 3; ++a) grad[a] = I * (p[(a + 2) % 3] - p[(a + 1) % 3]) / (2.0 * area);
    // Edge-midpoint rule, exact for quadratics: midpoint m_c lies opposite
    // vertex c, where φ_a = φ_b = 1/2 for a, b ≠ c.
    cplx qm[3];
    for (int c = 0; c < 3; ++c) qm[c] = q(0.5 * (p[(c + 1) % 3] + p[(c + 2) % 3]));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double stiff = area * (grad[a] * std::conj(grad[b])).real();
        cplx mass{};
        for (int c = 0; c < 3; ++c)
          if (c != a && c != b) mass += qm[c] * 0.25;
        entries.emplace_back(t[a], t[b], stiff + area / 3.0 * mass);
      }
    }
  }
  Eigen::SparseMatrix<cplx> full(nv, nv);
  full.setFromTriplets(entries.begin(), entries.end());

  // Renumber: interior unknowns first.
  std::vector<int> slot(nv, -1);
  std::vector<bool> on_boundary(nv, false);
  for (int b : mesh.boundary) on_boundary[b] = true;
  int ni = 0;
  for (int v = 0; v < nv; ++v)
    if (!on_boundary[v]) slot[v] = ni++;
  const auto nb = static_cast<int>(mesh.boundary.size());
  std::vector<int> bslot(nv, -1);
  for (int j = 0; j < nb; ++j) bslot[mesh.boundary[j]] = j;

  std::vector<Eigen::Triplet<cplx>> tii, tib, tbi, tbb;
  for (int col = 0; col < full.outerSize(); ++col) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(full, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      if (!on_boundary[r] && !on_boundary[c]) tii.emplace_back(slot[r], slot[c], it.value());
      else if (!on_boundary[r]) tib.emplace_back(slot[r], bslot[c], it.value());
      else if (!on_boundary[c]) tbi.emplace_back(bslot[r], slot[c], it.value());
      else tbb.emplace_back(bslot[r], bslot[c], it.value());
    }
  }
  Eigen::SparseMatrix<cplx> aii(ni, ni), aib(ni, nb), abi(nb, ni), abb(nb, nb);
  aii.setFromTriplets(tii.begin(), tii.end());
  aib.setFromTriplets(tib.begin(), tib.end());
  abi.setFromTriplets(tbi.begin(), tbi.end());
  abb.setFromTriplets(tbb.begin(), tbb.end());

  const int dim = 2 * n_modes + 1;
  Eigen::MatrixXcd boundary_data(nb, dim);
  const double norm = 1.0 / std::sqrt(2.0 * pi);
  for (int j = 0; j < nb; ++j) {
    const double theta = std::arg(mesh.vertices[mesh.boundary[j]]);
    for (int n = -n_modes; n <= n_modes; ++n) boundary_data(j, n + n_modes) = std::polar(norm, n * theta);
  }
  const Eigen::MatrixXcd rhs = -(aib * boundary_data);

  bool real_q = true;
  for (const auto& e : tii) real_q = real_q && e.value().imag() == 0.0;

  Eigen::MatrixXcd interior;
  if (real_q) {
    Eigen::SparseMatrix<double> re = aii.real();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(re);
    if (solver.info() != Eigen::Success) throw WellPosednessViolation("FEM factorization failed");
    interior.resize(ni, dim);
    for (int c = 0; c < dim; ++c) {
      const Eigen::VectorXd xr = solver.solve(rhs.col(c).real());
      const Eigen::VectorXd xi = solver.solve(rhs.col(c).imag());
      interior.col(c) = xr.cast<cplx>() + I * xi.cast<cplx>();
    }
    // An indefinite but nonsingular q is fine for LDLT; a (near) zero pivot
    // means 0 is a Dirichlet eigenvalue.
    const double dmin = solver.vectorD().cwiseAbs().minCoeff();
    if (!(dmin > 1e-14 * solver.vectorD().cwiseAbs().maxCoeff()))
      throw WellPosednessViolation("zero is (numerically) a Dirichlet eigenvalue of -Δ+q");
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> solver;
    aii.makeCompressed();
    solver.compute(aii);
    if (solver.info() != Eigen::Success) throw WellPosednessViolation("FEM factorization failed");
    interior = solver.solve(rhs);
  }
  if (!interior.allFinite()) throw WellPosednessViolation("FEM solution is not finite");

  const Eigen::MatrixXcd flux = abi * interior + abb * boundary_data;
  DNMatrix out{n_modes, boundary_data.adjoint() * flux};
  return out;
}

DNMatrix dn_homogeneous(Energy energy, int n_modes) {
  if (!energy.is_real_negative()) throw InvalidArgument("homogeneous DN map needs real E < 0");
  const double k = energy.kappa();
  DNMatrix out{n_modes, Eigen::MatrixXcd::Zero(2 * n_modes + 1, 2 * n_modes + 1)};
  for (int n = -n_modes; n <= n_modes; ++n) {
    const int m = std::abs(n);
    // I_m' = I_{m+1} + (m/x) I_m
    const double in = std::cyl_bessel_i(static_cast<double>(m), k);
    const double in1 = std::cyl_bessel_i(static_cast<double>(m + 1), k);
    out.entries(n + n_modes, n + n_modes) = k * in1 / in + m;
  }
  return out;
}

double dn_radial_mode(const std::function<double(double)>& q, int n) {
  namespace ode = boost::numeric::odeint;
  const int m = std::abs(n);
  const double r0 = 1e-3;
  // u = r^m (1 + a r²) with a = q(0)/(4(m+1)), scaled by r0^{-m}.
  const double a = q(0.0) / (4.0 * (m + 1));
  std::array<double, 2> y{1.0 + a * r0 * r0, (m / r0) * (1.0 + a * r0 * r0) + 2.0 * a * r0};
  auto rhs = [&](const std::array<double, 2>& s, std::array<double, 2>& ds, double r) {
    ds[0] = s[1];
    ds[1] = -s[1] / r + (m * m / (r * r) + q(r)) * s[0];
  };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::array<double, 2>>>(1e-13, 1e-13), rhs,
                          y, r0, 1.0, 1e-4);
  return y[1] / y[0];
}

DNMatrix dn_radial(const std::function<double(double)>& q, int n_modes) {
  DNMatrix out{n_modes, Eigen::MatrixXcd::Zero(2 * n_modes + 1, 2 * n_modes + 1)};
  for (int n = 0; n <= n_modes; ++n) {
    const double v = dn_radial_mode(q, n);
    out.entries(n + n_modes, n + n_modes) = v;
    out.entries(-n + n_modes, -n + n_modes) = v;
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

DNMatrix add_noise(const DNMatrix& dn, double target_rel, std::uint64_t seed) {
  if (target_rel < 0.0) throw InvalidArgument("noise level must be non-negative");
  if (target_rel == 0.0) return dn;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = dn.dim();
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  const double c = target_rel * spectral_norm(dn.entries) / spectral_norm(g.cast<cplx>());
  return {dn.n_modes, dn.entries + c * g.cast<cplx>()};
}

}  // namespace dbar
