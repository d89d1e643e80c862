#include "gnvort/operators.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "gnvort/stencil.hpp"

namespace gnvort {

namespace {

void require_matching(const Field& h, const VectorField& v, const char* where) {
  if (v.size() != static_cast<std::size_t>(h.grid().dim()))
    throw GridMismatch(std::string(where) + ": vector has wrong number of components");
  for (const Field& f : v) require_same_grid(h, f, where);
}

Field inv(const Field& f) { return map(f, [](double x) { return 1.0 / x; }); }

}  // namespace

void DispersiveSolveSettings::validate() const {
  if (!(rel_tolerance > 0.0)) throw ValidationError("rel_tolerance", "must be > 0");
  if (max_iterations < 0) throw ValidationError("max_iterations", "must be >= 0");
  if (restart < 1) throw ValidationError("restart", "must be >= 1");
}

VectorField apply_T(const Field& h, const Field& b, const VectorField& V, const ScaleParams& s) {
  require_matching(h, V, "apply_T");
  require_same_grid(h, b, "apply_T");
  const double beta = s.beta;
  const Field h2 = square(h);
  const Field h3 = pow3(h);
  const Field ih = inv(h);
  const VectorField gb = grad(b);
  const Field d = div(V);
  const VectorField g1 = grad(h3 * d);
  const Field bv = dot(gb, V);
  const VectorField g2 = grad(h2 * bv);
  VectorField out;
  for (std::size_t c = 0; c < V.size(); ++c) {
    Field t = (-1.0 / 3.0) * (ih * g1[c]);
    t += (0.5 * beta) * (ih * (g2[c] - h2 * gb[c] * d));
    t += (beta * beta) * (gb[c] * bv);
    out.push_back(std::move(t));
  }
  return out;
}

VectorField apply_Q1(const Field& h, const Field& b, const VectorField& V, const ScaleParams& s) {
  require_matching(h, V, "apply_Q1");
  require_same_grid(h, b, "apply_Q1");
  const double beta = s.beta;
  const int dim = h.grid().dim();
  const Field h2 = square(h);
  const Field h3 = pow3(h);
  const Field ih = inv(h);
  const VectorField gb = grad(b);

  // w1 = d1V . d2V^perp + (div V)^2, w2 = beta * V.(V.grad)grad b
  const Field d = div(V);
  Field w1 = square(d);
  Field w2(h.grid());
  if (dim == 1) {
    const Field bxx = ddx(ddx(b));
    w2 = beta * (square(V[0]) * bxx);
  } else {
    w1 += ddx(V[1]) * ddy(V[0]) - ddx(V[0]) * ddy(V[1]);
    const Field bxx = ddx(ddx(b)), bxy = ddy(ddx(b)), byy = ddy(ddy(b));
    w2 = beta * (square(V[0]) * bxx + 2.0 * (V[0] * V[1] * bxy) + square(V[1]) * byy);
  }

  // -2 R1 w1 + R2 w2 with R1 w = -(1/3h) grad(h^3 w) - (beta h / 2) w grad b
  // and R2 w = (1/2h) grad(h^2 w) + beta w grad b.
  const VectorField gr1 = grad(h3 * w1);
  const VectorField gr2 = grad(h2 * w2);
  VectorField out;
  for (int c = 0; c < dim; ++c) {
    Field q = (2.0 / 3.0) * (ih * gr1[c]);
    q += beta * (h * w1 * gb[c]);
    q += 0.5 * (ih * gr2[c]);
    q += beta * (w2 * gb[c]);
    out.push_back(std::move(q));
  }
  return out;
}

double dispersive_residual(const Field& h, const Field& b, const VectorField& V,
                           const VectorField& rhs, const ScaleParams& s) {
  VectorField r = sub(rhs, V);
  axpy(r, -s.mu, apply_T(h, b, V, s));
  return max_abs(r);
}

namespace {

VectorField solve_banded_1d(const Field& h, const Field& b, const VectorField& rhs,
                            const ScaleParams& s) {
  const Grid& g = h.grid();
  const int n = g.nx();
  const double c = 1.0 / (2.0 * g.dx());
  const double mu = s.mu, beta = s.beta;
  const Field bx = ddx(b);
  const Field gfun = square(h) * bx;
  const Field h3 = pow3(h);
  auto w = [n](int i) { return ((i % n) + n) % n; };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double hi = h[i];
    const int ip = w(i + 1), im = w(i - 1);
    const double a2p = -c * c * h3[ip] / (3.0 * hi);
    const double a2m = -c * c * h3[im] / (3.0 * hi);
    const double a0 = c * c * (h3[ip] + h3[im]) / (3.0 * hi) + beta * beta * bx[i] * bx[i];
    const double a1p = beta * c * (gfun[ip] - gfun[i]) / (2.0 * hi);
    const double a1m = beta * c * (gfun[i] - gfun[im]) / (2.0 * hi);
    trip.emplace_back(i, w(i + 2), mu * a2p);
    trip.emplace_back(i, w(i - 2), mu * a2m);
    trip.emplace_back(i, i, 1.0 + mu * a0);
    trip.emplace_back(i, ip, mu * a1p);
    trip.emplace_back(i, im, mu * a1m);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NonConvergence("dispersive operator factorization failed (singular matrix)");
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = rhs[0][i];
  Eigen::VectorXd x = lu.solve(r);
  if (lu.info() != Eigen::Success) throw NonConvergence("dispersive banded solve failed");
  Field out(g);
  for (int i = 0; i < n; ++i) out[i] = x[i];
  return {out};
}

// Flattening of a vector field into one contiguous array.
std::vector<double> flatten(const VectorField& v) {
  std::vector<double> out;
  out.reserve(v.size() * v[0].size());
  for (const Field& f : v) out.insert(out.end(), f.values().begin(), f.values().end());
  return out;
}

VectorField unflatten(const std::vector<double>& x, const Grid& g, std::size_t ncomp) {
  VectorField out(ncomp, Field(g));
  const std::size_t n = g.size();
  for (std::size_t c = 0; c < ncomp; ++c)
    for (std::size_t k = 0; k < n; ++k) out[c][k] = x[c * n + k];
  return out;
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm_inf(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// Restarted GMRES (modified Gram-Schmidt, Givens rotations), matrix free.
// Stopping on ||r||_2 <= tol * ||rhs||_inf bounds the max-norm residual too.
VectorField solve_gmres(const Field& h, const Field& b, const VectorField& rhs,
                        const ScaleParams& s, const DispersiveSolveSettings& st) {
  const Grid& g = h.grid();
  const std::size_t ncomp = rhs.size();
  const std::vector<double> bvec = flatten(rhs);
  const std::size_t n = bvec.size();
  const double target = st.rel_tolerance * norm_inf(bvec);
  const int budget = st.max_iterations > 0 ? st.max_iterations : static_cast<int>(10 * g.size());
  const int m = st.restart;

  auto apply = [&](const std::vector<double>& x) {
    const VectorField X = unflatten(x, g, ncomp);
    VectorField Y = X;
    axpy(Y, s.mu, apply_T(h, b, X, s));
    return flatten(Y);
  };

  std::vector<double> x(n, 0.0);
  if (target == 0.0) return unflatten(x, g, ncomp);

  int iters = 0;
  double last = INFINITY;
  while (true) {
    std::vector<double> ax = apply(x);
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = bvec[k] - ax[k];
    const double beta0 = norm2(r);
    last = norm_inf(r);
    if (last <= target) break;
    if (iters >= budget) {
      std::ostringstream os;
      os << "GMRES did not reach residual " << target << " within " << budget
         << " iterations (residual " << last << ")";
      throw NonConvergence(os.str());
    }

    std::vector<std::vector<double>> Vk;
    Vk.reserve(m + 1);
    Vk.push_back(r);
    for (double& v : Vk[0]) v /= beta0;
    std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), gvec(m + 1, 0.0);
    gvec[0] = beta0;
    int k = 0;
    for (; k < m && iters < budget; ++k, ++iters) {
      std::vector<double> w = apply(Vk[k]);
      for (int i = 0; i <= k; ++i) {
        double hij = 0.0;
        for (std::size_t q = 0; q < n; ++q) hij += w[q] * Vk[i][q];
        H[i][k] = hij;
        for (std::size_t q = 0; q < n; ++q) w[q] -= hij * Vk[i][q];
      }
      const double hn = norm2(w);
      H[k + 1][k] = hn;
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
        H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
        H[i][k] = t;
      }
      const double den = std::hypot(H[k][k], H[k + 1][k]);
      cs[k] = H[k][k] / den;
      sn[k] = H[k + 1][k] / den;
      H[k][k] = den;
      H[k + 1][k] = 0.0;
      gvec[k + 1] = -sn[k] * gvec[k];
      gvec[k] = cs[k] * gvec[k];
      const bool done = std::abs(gvec[k + 1]) <= target || hn == 0.0;
      if (!done) {
        for (double& v : w) v /= hn;
        Vk.push_back(std::move(w));
      } else {
        ++k;
        ++iters;
        break;
      }
    }
    // back substitution on the k x k triangle
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double acc = gvec[i];
      for (int j = i + 1; j < k; ++j) acc -= H[i][j] * y[j];
      y[i] = acc / H[i][i];
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t q = 0; q < n; ++q) x[q] += y[i] * Vk[i][q];
  }
  return unflatten(x, g, ncomp);
}

}  // namespace

VectorField invert_dispersive(const Field& h, const Field& b, const VectorField& rhs,
                              const ScaleParams& s, const DispersiveSolveSettings& settings) {
  require_matching(h, rhs, "invert_dispersive");
  require_same_grid(h, b, "invert_dispersive");
  settings.validate();
  if (s.mu == 0.0) return rhs;
  using M = DispersiveSolveSettings::Method;
  M method = settings.method;
  if (method == M::Auto) method = h.grid().dim() == 1 ? M::DirectBanded : M::Iterative;
  if (method == M::DirectBanded) {
    if (h.grid().dim() != 1) throw GridMismatch("banded dispersive solve is 1D only");
    return solve_banded_1d(h, b, rhs, s);
  }
  return solve_gmres(h, b, rhs, s, settings);
}

VectorField apply_C(const Field& h, const VectorField& vsharp, const VectorField& vbar,
                    const ScaleParams&) {
  require_matching(h, vsharp, "apply_C");
  require_matching(h, vbar, "apply_C");
  const Field h3 = pow3(h);
  const Field ih = inv(h);
  if (h.grid().dim() == 1) {
    const Field A = h3 * vsharp[0];
    const Field vx = ddx(vbar[0]);
    const Field inner = 2.0 * (A * ddx(vx)) + ddx(A) * vx;
    return {(-1.0 / 6.0) * (ih * ddx(inner))};
  }
  const VectorField A = scale(h3, vsharp);
  const Field d = div(vbar);
  const VectorField G = grad(d);
  // symmetric tensor S = A (x) G + G (x) A
  const Field S11 = 2.0 * (A[0] * G[0]);
  const Field S12 = A[0] * G[1] + G[0] * A[1];
  const Field S22 = 2.0 * (A[1] * G[1]);
  const Field divA = div(A);
  const Field trace = ddx(vbar[0]) * ddx(A[0]) + ddx(vbar[1]) * ddy(A[0]) +
                      ddy(vbar[0]) * ddx(A[1]) + ddy(vbar[1]) * ddy(A[1]);
  const Field phi = dot(A, G) + (1.0 / 3.0) * (d * divA) + (1.0 / 3.0) * trace;
  const VectorField gphi = grad(phi);
  VectorField out(2, Field(h.grid()));
  out[0] = (-1.0 / 24.0) * (ih * (ddx(S11) + ddy(S12))) - 0.25 * (ih * gphi[0]);
  out[1] = (-1.0 / 24.0) * (ih * (ddx(S12) + ddy(S22))) - 0.25 * (ih * gphi[1]);
  return out;
}

VectorField apply_Cb(const Field& h, const Field& b, const VectorField& vsharp,
                     const VectorField& vbar, const ScaleParams&) {
  if (h.grid().dim() != 1) throw GridMismatch("apply_Cb is 1D only");
  require_matching(h, vsharp, "apply_Cb");
  require_matching(h, vbar, "apply_Cb");
  require_same_grid(h, b, "apply_Cb");
  const Field P = square(h) * vsharp[0] * ddx(ddx(b));
  const Field& v = vbar[0];
  return {(1.0 / 3.0) * ((ddx(P * v) + P * ddx(v)) / h)};
}

VectorField apply_D(const Field& h, const VectorField& vsharp, const VectorField& vbar,
                    const ScaleParams&) {
  if (h.grid().dim() != 2) throw GridMismatch("apply_D is 2D only");
  require_matching(h, vsharp, "apply_D");
  require_matching(h, vbar, "apply_D");
  const Field pref = (1.0 / 24.0) * (pow3(h) * curl(vbar));
  const VectorField g = perp_grad(div(vbar));
  return {pref * (2.0 * (g[0] * vsharp[0])), pref * (g[0] * vsharp[1] + vsharp[0] * g[1]),
          pref * (2.0 * (g[1] * vsharp[1]))};
}

namespace {

// T*_theta = a(theta) h^2 grad div V + c(theta) beta h (grad b div V + grad(grad b . V));
// the integral form uses the antiderivatives of a and c.
VectorField level_correction_impl(const Field& h, const Field& b, const VectorField& vbar,
                                  double a, double c, const ScaleParams& s) {
  require_matching(h, vbar, "level_dispersive_correction");
  require_same_grid(h, b, "level_dispersive_correction");
  const Field d = div(vbar);
  const VectorField gd = grad(d);
  const VectorField gb = grad(b);
  const VectorField gbv = grad(dot(gb, vbar));
  const Field h2 = square(h);
  VectorField out;
  for (std::size_t k = 0; k < vbar.size(); ++k)
    out.push_back(a * (h2 * gd[k]) + (c * s.beta) * (h * (gb[k] * d + gbv[k])));
  return out;
}

}  // namespace

VectorField level_dispersive_correction(const Field& h, const Field& b, const VectorField& vbar,
                                        double theta, const ScaleParams& s) {
  if (theta < 0.0 || theta > 1.0) throw ValidationError("theta", "must lie in [0, 1]");
  return level_correction_impl(h, b, vbar, -0.5 * (theta * theta - 1.0 / 3.0), theta - 0.5, s);
}

VectorField level_dispersive_correction_integral(const Field& h, const Field& b,
                                                 const VectorField& vbar, double theta,
                                                 const ScaleParams& s) {
  if (theta < 0.0 || theta > 1.0) throw ValidationError("theta", "must lie in [0, 1]");
  const double a = -0.5 * (theta * theta * theta / 3.0 - theta / 3.0);
  const double c = 0.5 * theta * theta - 0.5 * theta;
  return level_correction_impl(h, b, vbar, a, c, s);
}

VectorField flux_C(const Field& h, const VectorField& vsharp, const VectorField& vbar) {
  require_matching(h, vsharp, "flux_C");
  require_matching(h, vbar, "flux_C");
  const Field h3 = pow3(h);
  if (h.grid().dim() == 1) {
    const Field A = h3 * vsharp[0];
    const Field& v = vbar[0];
    const Field vx = ddx(v);
    const Field vxx = ddx(vx);
    return {(1.0 / 6.0) * (A * (square(vx) - v * vxx)) - (1.0 / 6.0) * (ddx(A * vx) * v)};
  }
  const VectorField A = scale(h3, vsharp);
  const Field d = div(vbar);
  const VectorField G = grad(d);
  const Field trace = ddx(vbar[0]) * ddx(A[0]) + ddx(vbar[1]) * ddy(A[0]) +
                      ddy(vbar[0]) * ddx(A[1]) + ddy(vbar[1]) * ddy(A[1]);
  const Field phi = dot(A, G) + (1.0 / 3.0) * (d * div(A)) + (1.0 / 3.0) * trace;
  const Field vG = dot(vbar, G), vA = dot(vbar, A);
  const VectorField adv = advect(A, vbar);
  const Field d2 = square(d);
  VectorField out;
  for (int k = 0; k < 2; ++k)
    out.push_back((-1.0 / 24.0) * (vG * A[k] + vA * G[k]) - 0.25 * (phi * vbar[k]) +
                  (1.0 / 12.0) * (d2 * A[k]) + (1.0 / 12.0) * (d * adv[k]));
  return out;
}

Field flux_Cb(const Field& h, const Field& b, const Field& vsharp, const Field& vbar) {
  require_same_grid(h, b, "flux_Cb");
  return (1.0 / 3.0) * (square(h) * vsharp * ddx(ddx(b)) * square(vbar));
}

}  // namespace gnvort
