#include "core/identities.hpp"

#include "core/rng.hpp"

#include <cmath>

namespace grushin {

namespace {

double scaled_err(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double scaled_err(const Vec& a, const Vec& b) {
  double e = 0.0;
  for (int i = 0; i < a.size(); ++i) e = std::max(e, scaled_err(a(i), b(i)));
  return e;
}

double scaled_err(const Mat& a, const Mat& b) {
  double e = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) e = std::max(e, scaled_err(a(i, j), b(i, j)));
  return e;
}

// rho recomputed through second-order jet arithmetic alone; the reference the
// closed forms are certified against.
AmbientField rho_by_jets(const Params& P) {
  const double beta = P.alpha + 1.0;
  return AmbientField::from_callable(P, [beta](const std::vector<Jet2>& z) {
    const int n = static_cast<int>(z.size()) - 1;
    Jet2 s2 = z[0] * z[0];
    for (int i = 1; i < n; ++i) s2 = s2 + z[i] * z[i];
    const Jet2 w = pow(s2, beta) + (beta * beta) * (z[n] * z[n]);
    return pow(w, 0.5 / beta);
  });
}

// X-Hessian assembled from a coordinate jet (both mixed orderings):
//   X_i X_j = d_i d_j,        X_i X_{n+1} = (d_i a) d_y + a d_i d_y,
//   X_{n+1} X_j = a d_y d_j,  X_{n+1} X_{n+1} = a^2 d_y^2.
Mat xhessian_from_jet(const Params& P, const AmbientJet& j, const Vec& x) {
  const int n = P.n;
  const double s2 = x.squaredNorm();
  const double a = std::pow(s2, 0.5 * P.alpha);
  const Vec da = P.alpha * std::pow(s2, 0.5 * P.alpha - 1.0) * x;
  Mat H(n + 1, n + 1);
  H.topLeftCorner(n, n) = j.hess.topLeftCorner(n, n);
  for (int i = 0; i < n; ++i) {
    H(i, n) = da(i) * j.grad(n) + a * j.hess(i, n);
    H(n, i) = a * j.hess(n, i);
  }
  H(n, n) = a * a * j.hess(n, n);
  return H;
}

struct TestFields {
  SurfaceField poly;     // polynomial in x
  AmbientField ambient;  // polynomial in (x, y)
  SurfaceField rad_sq;   // rho^2 profile
  SurfaceField rad_inv;  // 1 / (1 + rho^2) profile
};

TestFields make_fields(const GraphSurface& S) {
  const int n = S.params().n;
  TestFields tf;
  if (n == 1) {
    tf.poly = SurfaceField::polynomial(1, {{{3}, 1.0}, {{1}, 0.5}});
  } else {
    std::vector<MonomialTerm> terms;
    std::vector<int> e1(n, 0), e2(n, 0), e3(n, 0);
    e1[0] = 2;
    e1[1] = 1;
    e2[0] = 1;
    e3[1] = 3;
    terms.push_back({e1, 1.0});
    terms.push_back({e2, 0.5});
    terms.push_back({e3, -1.0});
    tf.poly = SurfaceField::polynomial(n, terms);
  }
  tf.ambient = AmbientField::from_callable(S.params(), [n](const std::vector<Jet2>& z) {
    const Jet2& y = z[n];
    if (n == 1) return z[0] * z[0] * y + 0.5 * (y * y) + z[0];
    return z[0] * z[0] * z[1] + z[1] * y + 0.5 * (y * y) + z[0];
  });
  tf.rad_sq = SurfaceField::radial_profile(
      S, [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
      [](double) { return 2.0; });
  tf.rad_inv = SurfaceField::radial_profile(
      S, [](double t) { return 1.0 / (1.0 + t * t); },
      [](double t) {
        const double w = 1.0 + t * t;
        return -2.0 * t / (w * w);
      },
      [](double t) {
        const double w = 1.0 + t * t;
        return (6.0 * t * t - 2.0) / (w * w * w);
      });
  return tf;
}

}  // namespace

std::vector<IdentityResult> run_identities(const GraphSurface& S, const IdentityOptions& opt) {
  if (opt.points < 1) throw argument_error("identity suite: needs at least one point");
  if (!(0.0 < opt.rmin && opt.rmin < opt.rmax))
    throw argument_error("identity suite: bad sampling annulus");
  const Params& P = S.params();
  const int n = P.n;
  const double beta = P.alpha + 1.0;
  const double na = P.homogeneous_order();

  const TestFields tf = make_fields(S);
  const AmbientField rho_ad = rho_by_jets(P);
  const double alpha = P.alpha;
  const SurfaceField log_a = SurfaceField::from_callable(n, [alpha](const std::vector<Jet2>& z) {
    Jet2 s2 = z[0] * z[0];
    for (std::size_t i = 1; i < z.size(); ++i) s2 = s2 + z[i] * z[i];
    return (0.5 * alpha) * log(s2);
  });

  const std::vector<std::string> names = {
      "gauge-gradient-ad",     "gauge-hessian-ad",
      "xgrad-norm",            "gauge-operator-radial",
      "xhessian-ad",           "normal-unit",
      "area-element",          "tangential-projection",
      "kernel-fastpath",       "normal-divergence",
      "surface-vs-tangential", "ambient-restriction",
      "three-way-surface-operator", "radial-surface-operator",
      "q-forms",               "xrho-factorization"};
  std::vector<IdentityResult> out(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) out[i].name = names[i];
  auto note = [&](int slot, double err) {
    out[slot].max_err = std::max(out[slot].max_err, err);
  };

  SampleRng rng(opt.seed);
  int accepted = 0;
  int attempts = 0;
  while (accepted < opt.points && attempts < 100 * opt.points) {
    ++attempts;
    const Vec x = rng.annulus_point(n, opt.rmin, opt.rmax);
    if (!S.in_domain(x)) continue;
    ++accepted;

    const Frame fr = make_frame(S, x);
    const Point p{x, fr.u.value};

    // gauge closed forms vs jet arithmetic
    const AmbientJet cf = rho_jet(P, p);
    const AmbientJet ad = rho_ad.jet(p);
    note(0, scaled_err(cf.grad, ad.grad));
    note(1, scaled_err(cf.hess, ad.hess));

    // |X rho|^2 and L rho
    const GaugeDerivs gd = gauge_derivatives(P, p);
    note(2, scaled_err(gd.xgrad.squaredNorm(), gd.xgrad_norm2));
    note(3, scaled_err(gd.lrho, na * gd.xgrad_norm2 / fr.rho));

    // X-Hessian closed form vs assembly from the jet-arithmetic Hessian
    note(4, scaled_err(gd.xhess, xhessian_from_jet(P, ad, x)));

    // frame basics
    const Vec nu = fr.nu();
    note(5, scaled_err(nu.squaredNorm(), 1.0));
    note(6, scaled_err(fr.v * fr.v, fr.u.grad.squaredNorm() + std::pow(fr.s2, P.alpha)));

    // projected gradients are orthogonal to nu
    const Vec dpoly = tangential_gradient(fr, tf.poly);
    const Vec damb = tangential_gradient(fr, tf.ambient);
    note(7, std::max(scaled_err(dpoly.dot(nu), 0.0), scaled_err(damb.dot(nu), 0.0)));

    // kernel fast path == frame route, and 0 <= kernel <= |X rho|^2
    const double kfast = kernel(S, x);
    const Vec drho = delta_rho(fr);
    note(8, scaled_err(kfast, drho.squaredNorm()));
    note(8, std::max(0.0, kfast - fr.xrho2));
    note(8, std::max(0.0, -kfast));

    // sum_i delta_i nu_i = -n H
    double div_nu = 0.0;
    for (int i = 0; i < n; ++i)
      div_nu += fr.dnu_bar(i, i) - fr.dnu_bar.row(i).dot(fr.nu_bar) * fr.nu_bar(i);
    div_nu += -fr.dnu_last.dot(fr.nu_bar) * fr.nu_last;
    note(9, scaled_err(div_nu, -n * fr.H));

    // L_S phi = Delta_S phi + nu_last^2 <delta phi, delta log a>
    //           + delta_n phi * (delta log a)_n, with delta log a by jets
    {
      const Vec dla = tangential_gradient(fr, log_a);
      const double lhs = surface_laplacian(S, tf.poly, x, LaplacianMethod::adjoint);
      const double rhs = tangential_laplacian(S, tf.poly, x) +
                         fr.nu_last * fr.nu_last * dpoly.dot(dla) + dpoly(n) * dla(n);
      note(10, scaled_err(lhs, rhs));
    }

    // Delta_S phi = L phi - <(X^2 phi) nu, nu> + n H <X phi, nu>  (ambient phi)
    {
      const AmbientJet aj = tf.ambient.jet(p);
      const double lphi = grushin_operator(P, aj, x);
      const Mat xh = xhessian_from_jet(P, aj, x);
      Vec xphi(n + 1);
      xphi.head(n) = aj.grad.head(n);
      xphi(n) = std::pow(fr.s2, 0.5 * P.alpha) * aj.grad(n);
      const double lhs = tangential_laplacian(S, tf.ambient, x);
      const double rhs = lphi - nu.dot(xh * nu) + n * fr.H * xphi.dot(nu);
      note(11, scaled_err(lhs, rhs));
    }

    // three routes to L_S
    {
      const double a1 = surface_laplacian(S, tf.poly, x, LaplacianMethod::adjoint);
      const double a2 = surface_laplacian(S, tf.poly, x, LaplacianMethod::corrected);
      const double a3 = surface_laplacian(S, tf.poly, x, LaplacianMethod::divergence);
      note(12, std::max({scaled_err(a1, a2), scaled_err(a1, a3), scaled_err(a2, a3)}));
    }

    // radial identity vs nested operator on two profiles
    {
      const double l1 = surface_laplacian(S, tf.rad_sq, x, LaplacianMethod::adjoint);
      const double r1 = radial_surface_laplacian(
          S, x, [](double t) { return 2.0 * t; }, [](double) { return 2.0; });
      note(13, scaled_err(l1, r1));
      const double l2 = surface_laplacian(S, tf.rad_inv, x, LaplacianMethod::adjoint);
      const double r2 = radial_surface_laplacian(
          S, x,
          [](double t) {
            const double w = 1.0 + t * t;
            return -2.0 * t / (w * w);
          },
          [](double t) {
            const double w = 1.0 + t * t;
            return (6.0 * t * t - 2.0) / (w * w * w);
          });
      note(13, scaled_err(l2, r2));
    }

    // the two printed forms of the structural function
    note(14, scaled_err(q_sigma(S, x, QVariant::compact), q_sigma(S, x, QVariant::expanded)));

    // factorization of <X rho, nu>
    {
      const double lhs = xrho_dot_nu(fr);
      const double xrho_norm = std::sqrt(fr.xrho2);
      const double rhs = xrho_norm / std::pow(fr.rho, P.alpha + 1.0) *
                         (std::pow(fr.s2, 0.5 * P.alpha) * x.dot(fr.nu_bar) +
                          beta * fr.u.value * fr.nu_last);
      note(15, scaled_err(lhs, rhs));
    }
  }
  if (accepted < opt.points)
    throw domain_error("identity suite: sampling annulus leaves the surface domain");
  for (auto& r : out) r.samples = accepted;
  return out;
}

}  // namespace grushin
