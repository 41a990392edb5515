#include "lindcorr/rational.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lindcorr/error.hpp"

namespace lindcorr {

CVector RationalFit::eval(cd z) const {
  const Eigen::Index ne = support_values.cols();
  CVector num = CVector::Zero(ne);
  cd den = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    const cd diff = z - support[j];
    if (diff == cd(0)) return support_values.row(static_cast<Eigen::Index>(j)).transpose();
    const cd c = weights(static_cast<Eigen::Index>(j)) / diff;
    num += c * support_values.row(static_cast<Eigen::Index>(j)).transpose();
    den += c;
  }
  return num / den;
}

RationalFit aaa_fit(const std::vector<cd>& z, const CMatrix& F, double tol, int max_terms) {
  const Eigen::Index M = static_cast<Eigen::Index>(z.size());
  const Eigen::Index ne = F.cols();
  if (M == 0 || F.rows() != M) throw Error(ErrorKind::InvalidArgument, "sample count mismatch");
  RationalFit fit;
  fit.scale = F.cwiseAbs().maxCoeff();
  fit.support_values.resize(0, ne);
  if (fit.scale == 0.0) {
    fit.support = {z[0]};
    fit.support_values = F.topRows(1);
    fit.weights = CVector::Ones(1);
    return fit;
  }

  std::vector<char> used(static_cast<std::size_t>(M), 0);
  std::vector<Eigen::Index> sup;
  // current approximation at all samples, initialised to the mean
  CMatrix R = F.colwise().mean().replicate(M, 1);
  double best_err = std::numeric_limits<double>::infinity();
  RationalFit best;
  const int limit = static_cast<int>(std::min<Eigen::Index>(max_terms, M / 2));

  for (int m = 0; m < limit; ++m) {
    // next support point: largest error among free samples
    Eigen::Index pick = -1;
    double worst = -1.0;
    for (Eigen::Index i = 0; i < M; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double e = (F.row(i) - R.row(i)).cwiseAbs().maxCoeff();
      if (e > worst) {
        worst = e;
        pick = i;
      }
    }
    if (pick < 0) break;
    used[static_cast<std::size_t>(pick)] = 1;
    sup.push_back(pick);
    const Eigen::Index ms = static_cast<Eigen::Index>(sup.size());

    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < M; ++i)
      if (!used[static_cast<std::size_t>(i)]) rows.push_back(i);
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());

    // stacked Loewner matrix, one block per entry
    CMatrix A(nr * ne, ms);
    for (Eigen::Index e = 0; e < ne; ++e)
      for (Eigen::Index a = 0; a < nr; ++a)
        for (Eigen::Index j = 0; j < ms; ++j) {
          const Eigen::Index i = rows[static_cast<std::size_t>(a)];
          A(e * nr + a, j) = (F(i, e) - F(sup[static_cast<std::size_t>(j)], e)) /
                             (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(sup[static_cast<std::size_t>(j)])]);
        }
    Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeThinV);
    CVector w = svd.matrixV().col(ms - 1);
    if (svd.matrixV().cols() < ms) {
      Eigen::JacobiSVD<CMatrix> full(A, Eigen::ComputeFullV);
      w = full.matrixV().col(ms - 1);
    }

    RationalFit cur;
    cur.scale = fit.scale;
    cur.weights = w;
    cur.support_values.resize(ms, ne);
    for (Eigen::Index j = 0; j < ms; ++j) {
      cur.support.push_back(z[static_cast<std::size_t>(sup[static_cast<std::size_t>(j)])]);
      cur.support_values.row(j) = F.row(sup[static_cast<std::size_t>(j)]);
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < M; ++i) {
      R.row(i) = cur.eval(z[static_cast<std::size_t>(i)]).transpose();
      err = std::max(err, (F.row(i) - R.row(i)).cwiseAbs().maxCoeff());
    }
    cur.max_error = err;
    if (err < best_err) {
      best_err = err;
      best = cur;
    }
    if (err <= tol * fit.scale) break;
  }
  return best;
}

std::vector<RationalPole> rational_poles(const RationalFit& fit) {
  const Eigen::Index m = static_cast<Eigen::Index>(fit.support.size());
  std::vector<RationalPole> out;
  if (m < 2) return out;
  // arrowhead pencil E - lambda B with B = diag(0, 1, ..., 1)
  CMatrix E = CMatrix::Zero(m + 1, m + 1);
  CMatrix B = CMatrix::Identity(m + 1, m + 1);
  B(0, 0) = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    E(0, j + 1) = fit.weights(j);
    E(j + 1, 0) = 1.0;
    E(j + 1, j + 1) = fit.support[static_cast<std::size_t>(j)];
  }
  double zmax = 0.0;
  for (const auto& s : fit.support) zmax = std::max(zmax, std::abs(s));
  const cd shifts[] = {cd(0.31, 0.47), cd(-0.53, 0.29), cd(0.17, -0.61)};
  for (const cd s0 : shifts) {
    const cd sigma = s0 * (zmax > 0 ? zmax : 1.0);
    Eigen::PartialPivLU<CMatrix> lu(E - sigma * B);
    const CMatrix K = lu.solve(B);
    if (!K.allFinite()) continue;
    Eigen::ComplexEigenSolver<CMatrix> es(K, false);
    const CVector mu = es.eigenvalues();
    const double mscale = mu.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (std::abs(mu(i)) <= 1e-13 * std::max(1.0, mscale)) continue;
      const cd p = sigma + 1.0 / mu(i);
      // residue: N(p) / D'(p)
      CVector num = CVector::Zero(fit.support_values.cols());
      cd dprime = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        const cd diff = p - fit.support[static_cast<std::size_t>(j)];
        num += fit.weights(j) / diff * fit.support_values.row(j).transpose();
        dprime -= fit.weights(j) / (diff * diff);
      }
      RationalPole rp;
      rp.location = p;
      rp.residue = (num / dprime).cwiseAbs().maxCoeff();
      if (std::isfinite(rp.residue)) out.push_back(rp);
    }
    return out;
  }
  throw Error(ErrorKind::NonFiniteSolve, "rational pole pencil is singular at every shift");
}

}  // namespace lindcorr
