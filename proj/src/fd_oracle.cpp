#include "csturm/fd_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "csturm/error.hpp"
#include "csturm/rng.hpp"
#include "csturm/simd/kernels.hpp"

namespace csturm {

namespace {

// Regular vector (α0, α1) at e, or nothing for a Dirichlet proxy.
std::optional<std::array<cd, 2>> end_vector(const Realization& r, Endpoint e) {
  const auto& f = e == Endpoint::a ? r.spec().at_a : r.spec().at_b;
  if (!f) return std::nullopt;
  if (f->is_regular_vector()) return f->vec();
  const double x = r.potential().interval().at(e);
  if (!f->rep().contains(x)) throw DomainError("finite-difference oracle needs regular boundary vectors");
  State<2> g = f->rep().eval(x);
  return std::array<cd, 2>{g[0], g[1]};
}

cd node_potential(const Potential& p, double x, double inward) {
  cd v = p(x);
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) return v;
  return p(x + 1e-3 * inward);
}

// Gaussian elimination with partial pivoting for a tridiagonal system, as in
// LAPACK zgtsv. dl and du hold n-1 entries and are overwritten; b becomes x.
bool gtsv(std::vector<cd>& dl, std::vector<cd>& d, std::vector<cd>& du, std::vector<cd>& b) {
  const std::size_t n = d.size();
  auto mag = [](cd z) { return std::abs(z.real()) + std::abs(z.imag()); };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (dl[k] == 0.0) {
      if (d[k] == 0.0) return false;
    } else if (mag(d[k]) >= mag(dl[k])) {
      cd mult = dl[k] / d[k];
      d[k + 1] -= mult * du[k];
      b[k + 1] -= mult * b[k];
      if (k + 2 < n) dl[k] = 0.0;
    } else {
      cd mult = d[k] / dl[k];
      d[k] = dl[k];
      cd temp = d[k + 1];
      d[k + 1] = du[k] - mult * temp;
      if (k + 2 < n) {
        dl[k] = du[k + 1];
        du[k + 1] = -mult * dl[k];
      }
      du[k] = temp;
      temp = b[k];
      b[k] = b[k + 1];
      b[k + 1] = temp - mult * b[k + 1];
    }
  }
  if (d[n - 1] == 0.0) return false;
  b[n - 1] /= d[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t k = n - 2; k-- > 0;) b[k] = (b[k] - du[k] * b[k + 1] - dl[k] * b[k + 2]) / d[k];
  return true;
}

bool shifted_solve(const FDMatrix& m, cd lambda, std::vector<cd>& b) {
  std::vector<cd> dl = m.lower, du = m.upper, d = m.diag;
  for (auto& z : d) z -= lambda;
  return gtsv(dl, d, du, b);
}

// x^T W y without conjugation
cd bilinear(const FDMatrix& m, const std::vector<cd>& x, const std::vector<cd>& y) {
  cd s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m.w[i] * x[i] * y[i];
  return s;
}

}  // namespace

void FDMatrix::apply(const cd* in, cd* out) const {
  simd::tridiag_matvec(lower.data(), diag.data(), upper.data(), in, out, diag.size());
}

Eigen::MatrixXcd FDMatrix::dense() const {
  const auto k = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    a(i, i) = diag[i];
    if (i + 1 < k) {
      a(i, i + 1) = upper[i];
      a(i + 1, i) = lower[i];
    }
  }
  return a;
}

FDMatrix fd_oracle_build(const Realization& r, std::size_t n) {
  if (n < 8) throw DomainError("finite-difference grid needs at least 8 intervals");
  const Potential& p = r.potential();
  auto va = end_vector(r, Endpoint::a), vb = end_vector(r, Endpoint::b);
  FDMatrix m;
  m.n = n;
  m.lo = r.end(Endpoint::a);
  m.hi = r.end(Endpoint::b);
  m.h = (m.hi - m.lo) / static_cast<double>(n);
  m.proxy_a = !va;
  m.proxy_b = !vb;
  const double h = m.h, h2 = h * h;
  const bool keep_a = va && (*va)[0] != 0.0, keep_b = vb && (*vb)[0] != 0.0;
  const std::size_t first = keep_a ? 0 : 1, last = keep_b ? n : n - 1;
  for (std::size_t i = first; i <= last; ++i) {
    const double x = i == n ? m.hi : m.lo + static_cast<double>(i) * h;
    const double inward = i == 0 ? h : (i == n ? -h : 0.0);
    m.x.push_back(x);
    m.w.push_back((i == 0 || i == n) ? 0.5 * h : h);
    cd dg = 2.0 / h2 + node_potential(p, x, inward);
    if (i == 0) dg += 2.0 * (*va)[1] / ((*va)[0] * h);
    if (i == n) dg -= 2.0 * (*vb)[1] / ((*vb)[0] * h);
    m.diag.push_back(dg);
  }
  const std::size_t k = m.diag.size();
  m.lower.assign(k - 1, cd(-1.0 / h2));
  m.upper.assign(k - 1, cd(-1.0 / h2));
  if (keep_a) m.upper.front() = -2.0 / h2;
  if (keep_b) m.lower.back() = -2.0 / h2;
  return m;
}

std::vector<cd> fd_eigenvalues(const FDMatrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.dense(), false);
  if (es.info() != Eigen::Success) throw DomainError("dense eigenvalue solve failed");
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](cd l, cd r) {
    return std::abs(l) != std::abs(r) ? std::abs(l) < std::abs(r) : l.imag() < r.imag();
  });
  return out;
}

cd fd_refine(const FDMatrix& m, cd guess, int max_iter) {
  const std::size_t k = m.size();
  Rng rng(1);
  std::vector<cd> x(k), y(k);
  for (auto& z : x) z = rng.cnormal();
  cd sigma = guess;
  auto normalize = [&](std::vector<cd>& v) {
    double s = std::sqrt(simd::weighted_norm2(m.w.data(), v.data(), k));
    for (auto& z : v) z /= s;
  };
  // two inverse-iteration sweeps at the fixed guess select the eigenvector
  for (int it = 0; it < 2; ++it) {
    if (!shifted_solve(m, guess, x)) return guess;
    normalize(x);
  }
  for (int it = 0; it < max_iter; ++it) {
    m.apply(x.data(), y.data());
    cd den = bilinear(m, x, x);
    if (std::abs(den) == 0.0) break;
    cd next = bilinear(m, x, y) / den;
    const bool done = std::abs(next - sigma) <= 1e-15 * std::abs(next);
    sigma = next;
    if (done) break;
    if (!shifted_solve(m, sigma, x)) break;
    normalize(x);
  }
  return sigma;
}

std::vector<cd> fd_solve(const FDMatrix& m, cd lambda, const std::vector<cd>& g) {
  if (g.size() != m.size()) throw UsageError("right-hand side does not match the grid");
  std::vector<cd> b = g;
  if (!shifted_solve(m, lambda, b)) throw DomainError("finite-difference system is singular at lambda");
  return b;
}

RichardsonResult fd_richardson(const Realization& r, std::size_t count, std::vector<std::size_t> ns) {
  if (ns.size() != 3) throw UsageError("Richardson extrapolation needs three grids");
  RichardsonResult out;
  out.ns = ns;
  std::vector<FDMatrix> ms;
  for (auto n : ns) ms.push_back(fd_oracle_build(r, n));
  auto seeds = fd_eigenvalues(ms[0]);
  if (seeds.size() < count) throw DomainError("grid too small for the requested eigenvalue count");
  out.raw.assign(3, std::vector<cd>(count));
  for (std::size_t j = 0; j < count; ++j) {
    cd guess = seeds[j];
    for (std::size_t g = 0; g < 3; ++g) {
      guess = fd_refine(ms[g], guess);
      out.raw[g][j] = guess;
    }
  }
  Eigen::Matrix3d a;
  for (int g = 0; g < 3; ++g) {
    double h2 = ms[g].h * ms[g].h;
    a(g, 0) = 1.0;
    a(g, 1) = h2;
    a(g, 2) = h2 * h2;
  }
  Eigen::PartialPivLU<Eigen::Matrix3d> lu(a);
  for (std::size_t j = 0; j < count; ++j) {
    Eigen::Vector3cd rhs(out.raw[0][j], out.raw[1][j], out.raw[2][j]);
    Eigen::Vector3cd sol = lu.solve(rhs.real()).cast<cd>() + cd(0.0, 1.0) * lu.solve(rhs.imag()).cast<cd>();
    out.extrapolated.push_back(sol(0));
  }
  return out;
}

std::vector<cd> fd_numerical_range(const FDMatrix& m, std::size_t samples, std::uint64_t seed) {
  const std::size_t k = m.size();
  Rng rng(seed);
  std::vector<cd> out, f(k), mf(k);
  const double width = m.hi - m.lo;
  for (std::size_t s = 0; s < samples; ++s) {
    if (s % 2 == 0) {
      for (auto& z : f) z = rng.cnormal();
    } else {
      const double xc = m.x[static_cast<std::size_t>(rng.uniform() * static_cast<double>(k)) % k];
      const double sw = rng.uniform(2.0 * m.h, 0.25 * width);
      const double freq = rng.uniform(-20.0, 20.0) / width;
      const cd amp = rng.cnormal();
      for (std::size_t i = 0; i < k; ++i) {
        double t = (m.x[i] - xc) / sw;
        f[i] = amp * std::exp(-t * t) * std::polar(1.0, freq * m.x[i]) + 1e-3 * rng.cnormal();
      }
    }
    m.apply(f.data(), mf.data());
    out.push_back(simd::weighted_dot(m.w.data(), f.data(), mf.data(), k) /
                  simd::weighted_norm2(m.w.data(), f.data(), k));
  }
  return out;
}

}  // namespace csturm
