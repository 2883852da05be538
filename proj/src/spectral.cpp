#include "striphomog/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "striphomog/errors.hpp"
#include "striphomog/geometry.hpp"
#include "striphomog/kernels.hpp"
#include "striphomog/meshgen.hpp"

namespace striphomog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- 1D shooting oracle ---------------------------------------------------

// RK4 for (phi, psi)' = (psi, -nu phi) over [a, b] with n fixed steps.
void rk4_run(double nu, double a, double b, int n, double& phi, double& psi) {
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    const double k1p = psi, k1q = -nu * phi;
    const double k2p = psi + 0.5 * h * k1q, k2q = -nu * (phi + 0.5 * h * k1p);
    const double k3p = psi + 0.5 * h * k2q, k3q = -nu * (phi + 0.5 * h * k2p);
    const double k4p = psi + h * k3q, k4q = -nu * (phi + h * k3p);
    phi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    psi += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
  }
}

// Shooting function whose roots are the eigenvalues: phi(pi/2) for the
// half-interval dirichlet problem, phi(pi) otherwise (with the delta jump
// psi += beta phi applied midway).
double shoot(TransverseBC bc, double beta, double nu) {
  const int n = 4096;
  double phi = 0.0, psi = 1.0;
  if (bc == TransverseBC::dirichlet) {
    rk4_run(nu, 0.0, 0.5 * kPi, n, phi, psi);
    return phi;
  }
  rk4_run(nu, 0.0, 0.5 * kPi, n, phi, psi);
  if (bc == TransverseBC::delta) psi += beta * phi;
  rk4_run(nu, 0.5 * kPi, kPi, n, phi, psi);
  return phi;
}

}  // namespace

std::vector<double> transverse_oracle(TransverseBC bc, double beta, int k) {
  if (k < 1) fail(ErrKind::config, "transverse oracle needs k >= 1");
  if (beta < 0.0)
    fail(ErrKind::config, "transverse oracle assumes a nonnegative jump strength");
  // Bisection on the shot endpoint value over a wavenumber interval known to
  // contain exactly one sign change.  Scanning nu uniformly instead would
  // eventually skip pairs: the jump case packs a symmetric root arbitrarily
  // close under each antisymmetric one as beta grows.
  auto bisect = [&](double lo, double hi) {
    double flo = shoot(bc, beta, lo * lo);
    const double fhi = shoot(bc, beta, hi * hi);
    if ((flo < 0.0) == (fhi < 0.0))
      fail(ErrKind::numerical, "transverse oracle: bracket lost its root");
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = shoot(bc, beta, mid * mid);
      if ((flo < 0.0) != (fm < 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
      if (hi - lo < 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> out;
  if (bc == TransverseBC::dirichlet) {
    // two uncoupled halves: every eigenvalue doubles
    for (int m = 1; static_cast<int>(out.size()) < k; ++m) {
      const double s = bisect(2.0 * m - 1.0, 2.0 * m + 1.0);
      out.push_back(s * s);
      if (static_cast<int>(out.size()) < k) out.push_back(s * s);
    }
  } else if (bc == TransverseBC::none || beta == 0.0) {
    for (int m = 1; static_cast<int>(out.size()) < k; ++m) {
      const double s = bisect(m - 0.5, m + 0.5);
      out.push_back(s * s);
    }
  } else {
    // jump case: the shot value at wavenumber 2m-1 is beta/(2m-1) > 0 and
    // approaches 0 from below at 2m, so (2m-1, 2m) holds one symmetric root
    // (climbing toward the Dirichlet pair as beta grows); the antisymmetric
    // mode at exactly 2m is blind to the jump and caught from the far side
    for (int m = 1; static_cast<int>(out.size()) < k; ++m) {
      const double s = bisect(2.0 * m - 1.0, 2.0 * m - 1e-7);
      out.push_back(s * s);
      if (static_cast<int>(out.size()) < k) {
        const double a = bisect(0.5 * (s + 2.0 * m), 2.0 * m + 0.5);
        out.push_back(a * a);
      }
    }
  }
  return out;
}

std::vector<double> homogenized_oracle(TransverseBC bc, double beta, double X,
                                       int k) {
  const std::vector<double> nus = transverse_oracle(bc, beta, k);
  std::vector<double> sums;
  for (double nu : nus)
    for (int m = 1; m <= k + 4; ++m)
      sums.push_back(nu + std::pow(m * kPi / (2.0 * X), 2));
  std::sort(sums.begin(), sums.end());
  sums.resize(static_cast<size_t>(k));
  return sums;
}

// ---- discrete eigensolve ---------------------------------------------------

namespace {

struct RealFree {
  int nf = 0;
  std::vector<int> ptr_k, idx_k, ptr_m, idx_m;
  std::vector<double> val_k, val_m;
};

void extract_real(const SparseCsr& a, const std::vector<int>& free_of_node,
                  const std::vector<int>& node_of_free, std::vector<int>& ptr,
                  std::vector<int>& idx, std::vector<double>& val) {
  double max_re = 0.0, max_im = 0.0;
  const int nf = static_cast<int>(node_of_free.size());
  ptr.assign(static_cast<size_t>(nf) + 1, 0);
  for (int fi = 0; fi < nf; ++fi) {
    const int node = node_of_free[static_cast<size_t>(fi)];
    for (int p = a.ptr[static_cast<size_t>(node)];
         p < a.ptr[static_cast<size_t>(node) + 1]; ++p) {
      const int fj = free_of_node[static_cast<size_t>(a.idx[static_cast<size_t>(p)])];
      if (fj < 0) continue;
      const cplx v = a.val[static_cast<size_t>(p)];
      max_re = std::max(max_re, std::abs(v.real()));
      max_im = std::max(max_im, std::abs(v.imag()));
      ptr[static_cast<size_t>(fi) + 1]++;
      idx.push_back(fj);
      val.push_back(v.real());
    }
  }
  for (int i = 0; i < nf; ++i) ptr[static_cast<size_t>(i) + 1] += ptr[static_cast<size_t>(i)];
  if (max_im > 1e-12 * (max_re + 1.0))
    fail(ErrKind::config, "eigensolve requires a real symmetric configuration");
}

void spmv(const std::vector<int>& ptr, const std::vector<int>& idx,
          const std::vector<double>& val, const Eigen::VectorXd& x,
          Eigen::VectorXd& y) {
  kern::csr_spmv(ptr.data(), idx.data(), val.data(), x.data(), y.data(),
                 static_cast<int>(ptr.size()) - 1);
}

}  // namespace

std::vector<double> lowest_eigenvalues(const AssembledSystem& sys, int k) {
  if (k < 1) fail(ErrKind::config, "eigensolve needs k >= 1");
  std::vector<int> free_of_node(static_cast<size_t>(sys.n), -1);
  std::vector<int> node_of_free;
  for (int i = 0; i < sys.n; ++i)
    if (!sys.constrained[static_cast<size_t>(i)]) {
      free_of_node[static_cast<size_t>(i)] = static_cast<int>(node_of_free.size());
      node_of_free.push_back(i);
    }
  RealFree rf;
  rf.nf = static_cast<int>(node_of_free.size());
  if (rf.nf <= k)
    fail(ErrKind::config, "eigensolve: fewer free dofs than requested pairs");
  extract_real(sys.K, free_of_node, node_of_free, rf.ptr_k, rf.idx_k, rf.val_k);
  extract_real(sys.M, free_of_node, node_of_free, rf.ptr_m, rf.idx_m, rf.val_m);
  const int nf = rf.nf;

  if (nf <= 1200) {
    Eigen::MatrixXd kd = Eigen::MatrixXd::Zero(nf, nf);
    Eigen::MatrixXd md = Eigen::MatrixXd::Zero(nf, nf);
    for (int i = 0; i < nf; ++i) {
      for (int p = rf.ptr_k[static_cast<size_t>(i)]; p < rf.ptr_k[static_cast<size_t>(i) + 1]; ++p)
        kd(i, rf.idx_k[static_cast<size_t>(p)]) = rf.val_k[static_cast<size_t>(p)];
      for (int p = rf.ptr_m[static_cast<size_t>(i)]; p < rf.ptr_m[static_cast<size_t>(i) + 1]; ++p)
        md(i, rf.idx_m[static_cast<size_t>(p)]) = rf.val_m[static_cast<size_t>(p)];
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
    if (es.info() != Eigen::Success)
      fail(ErrKind::numerical, "dense generalized eigensolve failed");
    std::vector<double> out(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()[i];
    return out;
  }

  // shift-invert Lanczos at sigma = 0 in the M-inner product
  Eigen::SparseMatrix<double> kmat(nf, nf);
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(rf.val_k.size());
    for (int i = 0; i < nf; ++i)
      for (int p = rf.ptr_k[static_cast<size_t>(i)]; p < rf.ptr_k[static_cast<size_t>(i) + 1]; ++p)
        trip.emplace_back(i, rf.idx_k[static_cast<size_t>(p)], rf.val_k[static_cast<size_t>(p)]);
    kmat.setFromTriplets(trip.begin(), trip.end());
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(kmat);
  if (ldlt.info() != Eigen::Success)
    fail(ErrKind::numerical, "stiffness factorization failed in eigensolve");

  Eigen::VectorXd tmp(nf), mv(nf);
  auto minner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    spmv(rf.ptr_m, rf.idx_m, rf.val_m, b, tmp);
    return a.dot(tmp);
  };

  std::mt19937 rng(20240811u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  const int m_max = nf > 20000 ? 192 : 384;
  for (int m = 48; m <= m_max; m *= 2) {
    const int mm = std::min(m, nf - 1);
    std::vector<Eigen::VectorXd> v;
    v.reserve(static_cast<size_t>(mm) + 1);
    Eigen::VectorXd v0(nf);
    for (int i = 0; i < nf; ++i) v0[i] = uni(rng);
    v0 /= std::sqrt(minner(v0, v0));
    v.push_back(v0);
    std::vector<double> alpha, beta;
    for (int j = 0; j < mm; ++j) {
      spmv(rf.ptr_m, rf.idx_m, rf.val_m, v[static_cast<size_t>(j)], mv);
      Eigen::VectorXd w = ldlt.solve(mv);
      const double aj = minner(w, v[static_cast<size_t>(j)]);
      alpha.push_back(aj);
      w -= aj * v[static_cast<size_t>(j)];
      if (j > 0) w -= beta[static_cast<size_t>(j) - 1] * v[static_cast<size_t>(j) - 1];
      for (int pass = 0; pass < 2; ++pass)
        for (size_t i = 0; i < v.size(); ++i) w -= minner(w, v[i]) * v[i];
      const double bj = std::sqrt(std::max(0.0, minner(w, w)));
      if (bj < 1e-14) {
        // invariant subspace; restart direction
        for (int i = 0; i < nf; ++i) w[i] = uni(rng);
        for (size_t i = 0; i < v.size(); ++i) w -= minner(w, v[i]) * v[i];
        const double bn = std::sqrt(minner(w, w));
        beta.push_back(0.0);
        v.push_back(w / bn);
        continue;
      }
      beta.push_back(bj);
      v.push_back(w / bj);
    }

    const int t = static_cast<int>(alpha.size());
    Eigen::MatrixXd trid = Eigen::MatrixXd::Zero(t, t);
    for (int i = 0; i < t; ++i) {
      trid(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < t && beta[static_cast<size_t>(i)] != 0.0) {
        trid(i, i + 1) = beta[static_cast<size_t>(i)];
        trid(i + 1, i) = beta[static_cast<size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(trid);

    // largest theta = 1/lambda first
    std::vector<int> order(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return tes.eigenvalues()[a] > tes.eigenvalues()[b];
    });

    std::vector<double> accepted;
    Eigen::VectorXd ku(nf);
    for (int oi = 0; oi < t && static_cast<int>(accepted.size()) < k; ++oi) {
      const double theta = tes.eigenvalues()[order[static_cast<size_t>(oi)]];
      if (theta <= 0.0) break;
      const double lam = 1.0 / theta;
      Eigen::VectorXd u = Eigen::VectorXd::Zero(nf);
      for (int j = 0; j < t; ++j)
        u += tes.eigenvectors()(j, order[static_cast<size_t>(oi)]) * v[static_cast<size_t>(j)];
      spmv(rf.ptr_m, rf.idx_m, rf.val_m, u, mv);
      spmv(rf.ptr_k, rf.idx_k, rf.val_k, u, ku);
      const double res = (ku - lam * mv).norm();
      if (res <= 1e-8 * lam * mv.norm())
        accepted.push_back(lam);
      else
        break;  // deeper pairs are not converged either; enlarge the basis
    }
    if (static_cast<int>(accepted.size()) >= k) {
      std::sort(accepted.begin(), accepted.end());
      accepted.resize(static_cast<size_t>(k));
      return accepted;
    }
  }
  fail(ErrKind::numerical, "shift-invert iteration did not converge");
}

// ---- eps sweep --------------------------------------------------------------

SpectrumReport compare_spectra(const SpectralConfig& cfg) {
  SpectrumReport rep;
  rep.regime = cfg.regime;
  const bool is_delta = cfg.regime == SpectralRegime::delta;
  rep.beta = is_delta ? 2.0 * kPi / 3.0 * (cfg.rho + cfg.mu0) : 0.0;
  const TransverseBC bc =
      is_delta ? TransverseBC::delta : TransverseBC::dirichlet;

  StripGeometry strip{kPi, cfg.X};
  CurveSpec curve;
  curve.kind = CurveSpec::Kind::straight;
  curve.y0 = 0.5 * kPi;
  const Coefficients c = Coefficients::laplace();

  const std::vector<double> oracle =
      homogenized_oracle(bc, rep.beta, cfg.X, cfg.k);

  for (double eps : cfg.eps_list) {
    PerforationConfig pc;
    pc.eps = eps;
    pc.partition = HolePartition::all_dirichlet;
    // keep the last patch block (half-width = half the center gap) inside the cut
    pc.lateral_margin = 0.5 * pc.spacing_factor * eps;
    if (is_delta) {
      pc.eta_law.kind = EtaLaw::Kind::exponential;
      pc.eta_law.rho = cfg.rho;
      pc.eta_law.mu0 = cfg.mu0;
    } else {
      pc.eta_law.kind = EtaLaw::Kind::constant;
      pc.eta_law.c = cfg.eta_const;
    }
    PerforatedDomain dom = build_perforated_domain(strip, curve, HoleFamily{}, pc);

    MeshOptions mo;
    mo.h_far = cfg.h_far;
    TriMesh mesh = generate_mesh(dom, mo);
    AssembledSystem sys = assemble_perturbed(mesh, c);

    SpectrumRow row;
    row.eps = eps;
    row.eta = dom.eta;
    row.perturbed = lowest_eigenvalues(sys, cfg.k);
    row.oracle = oracle;
    row.gap1 = std::abs(row.perturbed[0] - oracle[0]);

    if (cfg.fem_homogenized) {
      TriMesh hm = generate_homogenized_mesh(strip, curve, cfg.h0, MeshOptions{});
      const double beta_val = rep.beta;
      AssembledSystem hs = assemble_homogenized(
          hm, c, is_delta ? HomogBC::delta : HomogBC::dirichlet_gamma,
          [beta_val](Vec2) { return beta_val; });
      row.fem_homogenized = lowest_eigenvalues(hs, cfg.k);
    }
    rep.rows.push_back(std::move(row));
  }

  for (size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].gap1 >= rep.rows[i - 1].gap1) rep.gap_monotone = false;
  return rep;
}

}  // namespace striphomog
