#include "lindcorr/sylvester.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "lindcorr/error.hpp"

namespace lindcorr {

namespace {

// Real Schur form, then each 2x2 diagonal block is rotated to upper triangular
// form, which is much faster than a direct complex Schur decomposition.
void complex_schur(const RMatrix& X, CMatrix& T, CMatrix& U) {
  Eigen::RealSchur<RMatrix> rs(X);
  T = rs.matrixT().cast<cd>();
  U = rs.matrixU().cast<cd>();
  const Eigen::Index n = X.rows();
  for (Eigen::Index m = n - 1; m >= 1; --m) {
    if (T(m, m - 1) == cd(0)) continue;
    const cd a = T(m - 1, m - 1), b = T(m - 1, m), c = T(m, m - 1), d = T(m, m);
    const cd tr = 0.5 * (a + d);
    const cd disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const cd mu = tr + disc - d;
    const double r = std::hypot(std::abs(mu), std::abs(c));
    const cd cs = mu / r;
    const cd sn = c / r;
    // G = [[conj(cs), sn], [-sn, cs]]
    for (Eigen::Index j = m - 1; j < n; ++j) {
      const cd x = T(m - 1, j), y = T(m, j);
      T(m - 1, j) = std::conj(cs) * x + sn * y;
      T(m, j) = -sn * x + cs * y;
    }
    auto rotate_cols = [&](CMatrix& M, Eigen::Index rows) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const cd x = M(i, m - 1), y = M(i, m);
        M(i, m - 1) = x * cs + y * sn;
        M(i, m) = -x * sn + y * std::conj(cs);
      }
    };
    rotate_cols(T, m + 1);
    rotate_cols(U, n);
    T(m, m - 1) = 0.0;
  }
}

}  // namespace

SylvesterResult solve_lyapunov_schur(const RMatrix& X, const RMatrix& C, double sep_tol) {
  const Eigen::Index n = X.rows();
  SylvesterResult res;
  if (n == 0) {
    res.G = RMatrix(0, 0);
    return res;
  }
  CMatrix T, U;
  complex_schur(X, T, U);
  // With G' = U^* G conj(U):  T G' + G' T^T = U^* C conj(U).
  CMatrix F = U.adjoint() * C.cast<cd>() * U.conjugate();
  CMatrix Gp = CMatrix::Zero(n, n);
  const double scale = std::max(1e-300, X.cwiseAbs().maxCoeff());
  double min_sep = std::numeric_limits<double>::infinity();
  const CVector diag = T.diagonal();
  CMatrix S = T;  // T + T(j,j) I, diagonal refreshed per column
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const Eigen::Index tail = n - j - 1;
    CVector rhs = F.col(j);
    if (tail > 0) rhs.noalias() -= Gp.rightCols(tail) * T.row(j).tail(tail).transpose();
    S.diagonal() = diag.array() + T(j, j);
    min_sep = std::min(min_sep, S.diagonal().cwiseAbs().minCoeff());
    Gp.col(j) = S.triangularView<Eigen::Upper>().solve(rhs);
  }
  res.min_separation = min_sep;
  if (min_sep < sep_tol * scale)
    throw Error(ErrorKind::SingularSteadyState,
                "X has eigenvalues with lambda_i + lambda_j ~ 0; steady state not unique");
  const CMatrix G = U * Gp * U.transpose();
  res.G = G.real();
  return res;
}

CMatrix lyapunov_kron(const CMatrix& A, const CMatrix& B) {
  const Eigen::Index n = A.rows();
  CMatrix K = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) K.block(j * n, j * n, n, n) += A;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (B(i, j) != cd(0)) K.block(i * n, j * n, n, n).diagonal().array() += B(i, j);
  return K;
}

SmallLyapunovResult solve_lyapunov_small(const CMatrix& A, const CMatrix& B, const CMatrix& C,
                                         double singular_tol, double scale) {
  const Eigen::Index n = A.rows();
  const CMatrix K = lyapunov_kron(A, B);
  const CVector c = Eigen::Map<const CVector>(C.data(), n * n);
  SmallLyapunovResult res;
  Eigen::PartialPivLU<CMatrix> lu(K);
  const double knorm = K.cwiseAbs().colwise().sum().maxCoeff();
  const double ref = std::max(knorm, scale);
  res.sigma_ratio = lu.rcond();
  CVector g;
  if (!(res.sigma_ratio * knorm > 1e-10 * ref)) {
    Eigen::JacobiSVD<CMatrix> svd(K, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    res.sigma_ratio = smax > 0 ? smin / smax : 0.0;
    if (smax == 0.0 || smin < singular_tol * std::max(smax, scale)) {
      res.singular = true;
      res.G = CMatrix::Zero(n, n);
      return res;
    }
    g = svd.solve(c);
  } else {
    g = lu.solve(c);
  }
  res.G = Eigen::Map<const CMatrix>(g.data(), n, n);
  return res;
}

}  // namespace lindcorr
