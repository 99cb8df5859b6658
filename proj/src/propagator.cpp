#include "ctqw/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ctqw/error.hpp"

namespace ctqw {

namespace {

constexpr int kMaxJacobiSweeps = 100;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite())
    throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

double norm1(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Eigensystem eig_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  require_finite(m, "matrix");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, n > 0 ? m.cwiseAbs().maxCoeff() : 0.0);
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric within 1e-12");

  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob = a.norm();

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-14 * frob || off == 0.0) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged)
    throw Error(ErrorCode::ConvergenceFailure, "Jacobi iteration did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

QuantumPropagator::QuantumPropagator(const Eigen::MatrixXd& h) : eig_(eig_symmetric(h)) {}

ComplexVector QuantumPropagator::project(const ComplexVector& psi0) const {
  if (psi0.size() != eig_.values.size())
    throw Error(ErrorCode::InvalidArgument, "state dimension does not match Hamiltonian");
  return eig_.vectors.transpose().cast<std::complex<double>>() * psi0;
}

ComplexVector QuantumPropagator::evolve(const ComplexVector& psi0, double t) const {
  ComplexVector c = project(psi0);
  for (Eigen::Index k = 0; k < c.size(); ++k)
    c(k) *= std::polar(1.0, -eig_.values(k) * t);
  return eig_.vectors.cast<std::complex<double>>() * c;
}

std::complex<double> QuantumPropagator::amplitude(std::size_t site,
                                                  const ComplexVector& coefficients,
                                                  double t) const {
  const auto w = static_cast<Eigen::Index>(site);
  std::complex<double> sum = 0.0;
  for (Eigen::Index k = 0; k < coefficients.size(); ++k)
    sum += eig_.vectors(w, k) * coefficients(k) * std::polar(1.0, -eig_.values(k) * t);
  return sum;
}

ComplexVector evolve_quantum(const Eigen::MatrixXd& h, const ComplexVector& psi0, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "time must be non-negative and finite");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "initial state is not normalized");
  return QuantumPropagator(h).evolve(psi0, t);
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::InvalidArgument, "expm needs a square matrix");
  require_finite(m, "expm input");
  const Eigen::Index n = m.rows();

  // Higham (2005) coefficients for the [13/13] approximant.
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm = norm1(m);
  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const Eigen::MatrixXd a = m / std::ldexp(1.0, s);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * id);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

void clamp_probabilities(Eigen::VectorXd& p) {
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p(j) >= 0.0) continue;
    if (p(j) < -1e-12)
      throw Error(ErrorCode::NegativeProbability,
                  "probability " + std::to_string(p(j)) + " at site " + std::to_string(j));
    p(j) = 0.0;
  }
}

Eigen::VectorXd evolve_classical(const Eigen::MatrixXd& lc, const Eigen::VectorXd& p0,
                                 double gamma, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "time must be non-negative and finite");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (lc.cols() != p0.size())
    throw Error(ErrorCode::InvalidArgument, "distribution dimension does not match generator");
  Eigen::VectorXd p = expm(-gamma * t * lc) * p0;
  clamp_probabilities(p);
  return p;
}

AbsorbingWalk::AbsorbingWalk(const Graph& g, std::optional<std::size_t> target,
                             const Eigen::VectorXd& p0)
    : target_(target) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (p0.size() != n)
    throw Error(ErrorCode::InvalidArgument, "distribution dimension does not match graph");
  if (target_ && *target_ >= g.size())
    throw Error(ErrorCode::TargetOutOfRange, "target outside graph");

  for (Eigen::Index k = 0; k < n; ++k)
    if (!target_ || k != static_cast<Eigen::Index>(*target_)) free_sites_.push_back(k);

  const auto m = static_cast<Eigen::Index>(free_sites_.size());
  const auto& adj = g.adjacency();
  Eigen::MatrixXd block(m, m);
  Eigen::VectorXd free_p0(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    free_p0(r) = p0(free_sites_[r]);
    for (Eigen::Index c = 0; c < m; ++c)
      block(r, c) = r == c ? static_cast<double>(g.degree(free_sites_[r]))
                           : -adj(free_sites_[r], free_sites_[c]);
  }
  total_mass_ = p0.sum();
  initial_target_mass_ = target_ ? p0(static_cast<Eigen::Index>(*target_)) : 0.0;
  if (m > 0) {
    eig_ = eig_symmetric(block);
    coefficients_ = eig_.vectors.transpose() * free_p0;
    column_sums_ = eig_.vectors.colwise().sum().transpose();
  }
}

double AbsorbingWalk::target_probability(double gamma_t) const {
  if (!target_) throw Error(ErrorCode::InvalidArgument, "walk has no sink");
  double remaining = 0.0;
  for (Eigen::Index k = 0; k < coefficients_.size(); ++k)
    remaining += column_sums_(k) * coefficients_(k) * std::exp(-eig_.values(k) * gamma_t);
  return total_mass_ - remaining;
}

Eigen::VectorXd AbsorbingWalk::distribution(double gamma_t) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(free_sites_.size() + (target_ ? 1 : 0)));
  if (coefficients_.size() > 0) {
    Eigen::VectorXd decayed = coefficients_;
    for (Eigen::Index k = 0; k < decayed.size(); ++k)
      decayed(k) *= std::exp(-eig_.values(k) * gamma_t);
    const Eigen::VectorXd free_p = eig_.vectors * decayed;
    for (Eigen::Index r = 0; r < free_p.size(); ++r) out(free_sites_[r]) = free_p(r);
    if (target_) out(static_cast<Eigen::Index>(*target_)) = total_mass_ - free_p.sum();
  } else if (target_) {
    out(static_cast<Eigen::Index>(*target_)) = initial_target_mass_;
  }
  clamp_probabilities(out);
  return out;
}

namespace {

template <typename Matrix, typename Vector>
Vector runge_kutta4(const Matrix& m, const Vector& v0, double t, long steps) {
  if (m.rows() != m.cols() || m.cols() != v0.size())
    throw Error(ErrorCode::InvalidArgument, "ode_oracle dimension mismatch");
  const double required = 1000.0 * (m.cwiseAbs().colwise().sum().maxCoeff() * t + 1.0);
  if (static_cast<double>(steps) < required)
    throw Error(ErrorCode::StepCountTooSmall,
                "ode_oracle needs at least " + std::to_string(static_cast<long>(std::ceil(required))) +
                    " steps");
  const double h = t / static_cast<double>(steps);
  Vector v = v0;
  for (long step = 0; step < steps; ++step) {
    const Vector k1 = m * v;
    const Vector k2 = m * (v + 0.5 * h * k1);
    const Vector k3 = m * (v + 0.5 * h * k2);
    const Vector k4 = m * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace

Eigen::VectorXd ode_oracle(const Eigen::MatrixXd& m, const Eigen::VectorXd& v0, double t,
                           long steps) {
  return runge_kutta4(m, v0, t, steps);
}

Eigen::VectorXcd ode_oracle(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v0, double t,
                            long steps) {
  return runge_kutta4(m, v0, t, steps);
}

}  // namespace ctqw
