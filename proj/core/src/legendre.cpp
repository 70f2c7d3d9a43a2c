#include "metriplectic/legendre.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "metriplectic/error.hpp"
#include "metriplectic/observable.hpp"

namespace metriplectic {

Vec momentum(const LagrangianSide& ls, VecView q, VecView qdot, VecView S) {
  return ls.partials(q, qdot, S).dqdot;
}

namespace {

double norm(VecView v) { return std::sqrt(dot(v, v)); }

Eigen::MatrixXd fd_hessian_qdot(const LagrangianSide& ls, VecView q, const Vec& v, VecView S) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd jac(n, n);
  Vec probe = v;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double h = fd_step(v[uj]);
    probe[uj] = v[uj] + h;
    const Vec up = ls.partials(q, probe, S).dqdot;
    probe[uj] = v[uj] - h;
    const Vec down = ls.partials(q, probe, S).dqdot;
    probe[uj] = v[uj];
    const double step = (v[uj] + h) - (v[uj] - h);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      jac(i, j) = (up[ui] - down[ui]) / step;
    }
  }
  return jac;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !std::isfinite(smax)) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

Vec newton_inverse(const LagrangianSide& ls, VecView q, VecView p, VecView S,
                   const LegendreOptions& options) {
  Vec v(p.size(), 0.0);
  const double tol = options.relative_tolerance * (1.0 + norm(p));
  double residual_norm = 0.0;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const Vec dqdot = ls.partials(q, v, S).dqdot;
    Eigen::VectorXd r(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) = dqdot[i] - p[i];
    }
    residual_norm = r.norm();
    const Eigen::MatrixXd jac = fd_hessian_qdot(ls, q, v, S);
    if (condition_number(jac) > options.max_condition) {
      throw Error(ErrorCode::LegendreInversionFailure,
                  "d2L/dqdot2 is singular; the Legendre transform is not invertible "
                  "(residual " + std::to_string(residual_norm) + ")");
    }
    if (residual_norm <= tol) {
      return v;
    }
    if (it == options.max_iterations) {
      break;
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(r);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] -= step(static_cast<Eigen::Index>(i));
    }
  }
  throw Error(ErrorCode::LegendreInversionFailure,
              "Newton iteration did not converge (residual " + std::to_string(residual_norm) + ")");
}

}  // namespace

Vec invert_legendre(const LagrangianSide& ls, VecView q, VecView p, VecView S,
                    const LegendreOptions& options) {
  if (p.size() != ls.dim || q.size() != ls.dim || S.size() != ls.entropy_count) {
    throw Error(ErrorCode::DimensionMismatch, "state does not match the Lagrangian dimensions");
  }
  if (!ls.kinetic_form) {
    return newton_inverse(ls, q, p, S, options);
  }
  const Eigen::MatrixXd mass = ls.kinetic_form(q, S);
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::LegendreInversionFailure, "kinetic form is not positive definite");
  }
  return to_vec(llt.solve(as_eigen(p)));
}

HamiltonianSide to_hamiltonian(const LagrangianSide& ls, const LegendreOptions& options) {
  HamiltonianSide hs;
  hs.dim = ls.dim;
  hs.entropy_count = ls.entropy_count;
  hs.inverse_legendre = [ls, options](VecView q, VecView p, VecView S) {
    return invert_legendre(ls, q, p, S, options);
  };
  hs.value = [ls, options](VecView q, VecView p, VecView S) {
    const Vec qdot = invert_legendre(ls, q, p, S, options);
    return dot(p, qdot) - ls.value(q, qdot, S);
  };
  hs.partials = [ls, options](VecView q, VecView p, VecView S) {
    Vec qdot = invert_legendre(ls, q, p, S, options);
    LagrangianPartials lp = ls.partials(q, qdot, S);
    HamiltonianPartials hp;
    hp.dq.resize(lp.dq.size());
    for (std::size_t i = 0; i < lp.dq.size(); ++i) hp.dq[i] = -lp.dq[i];
    hp.dS.resize(lp.dS.size());
    for (std::size_t i = 0; i < lp.dS.size(); ++i) hp.dS[i] = -lp.dS[i];
    hp.dp = std::move(qdot);
    return hp;
  };
  return hs;
}

double temperature(const HamiltonianSide& hs, VecView q, VecView p, VecView S) {
  if (hs.entropy_count != 1) {
    throw Error(ErrorCode::DimensionMismatch, "temperature() needs a single-entropy system");
  }
  return hs.partials(q, p, S).dS[0];
}

Vec temperatures(const HamiltonianSide& hs, VecView q, VecView p, VecView S) {
  return hs.partials(q, p, S).dS;
}

}  // namespace metriplectic
