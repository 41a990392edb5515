#include "lindcorr/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lindcorr/error.hpp"

namespace lindcorr {

namespace {

void track(RuleCheck& rc, double violation, const std::string& where) {
  if (violation > rc.max_violation) {
    rc.max_violation = violation;
    if (violation > kSymmetryTolerance) rc.where = where;
  }
  if (violation > kSymmetryTolerance) rc.pass = false;
}

double max_abs(const CMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CMatrix lookup(const std::map<Displacement, CMatrix>& mp, const Displacement& r, int n) {
  auto it = mp.find(r);
  return it == mp.end() ? CMatrix::Zero(n, n) : it->second;
}

CMatrix lookup(const std::map<DisplacementPair, CMatrix>& mp, const DisplacementPair& r, int n) {
  auto it = mp.find(r);
  return it == mp.end() ? CMatrix::Zero(n, n) : it->second;
}

template <class Map>
void accumulate(Map& mp, const typename Map::key_type& key, const typename Map::mapped_type& v) {
  auto it = mp.find(key);
  if (it == mp.end())
    mp.emplace(key, v);
  else
    it->second += v;
}

RMatrix real_part_checked(const CMatrix& a, const std::string& what) {
  const double scale = 1.0 + max_abs(a);
  const double im = a.size() ? a.imag().cwiseAbs().maxCoeff() : 0.0;
  if (im > 1e-12 * scale)
    throw Error(ErrorKind::NonRealResult,
                what + " has imaginary residue " + std::to_string(im) +
                    " (stencil violates the Hermiticity rules)");
  return a.real();
}

}  // namespace

bool CouplingStencil::quasifree() const {
  for (const auto& mu : m)
    for (const auto& [key, mat] : mu)
      if (max_abs(mat) > 0.0) return false;
  return true;
}

int CouplingStencil::range() const {
  int d = 0;
  for (const auto& [r, mat] : h) d = std::max(d, max_abs_component(r));
  for (const auto& es : ell)
    for (const auto& [r, v] : es) d = std::max(d, max_abs_component(r));
  for (const auto& mu : m)
    for (const auto& [rr, mat] : mu)
      d = std::max({d, max_abs_component(rr.first), max_abs_component(rr.second)});
  return d;
}

int EvolutionStencil::range() const {
  int d = 0;
  for (const auto& [r, mat] : x) d = std::max(d, max_abs_component(r));
  for (const auto& [r, mat] : y) d = std::max(d, max_abs_component(r));
  for (const auto& zu : z)
    for (const auto& [rr, mat] : zu)
      d = std::max({d, max_abs_component(rr.first), max_abs_component(rr.second)});
  return d;
}

CouplingStencil empty_stencil(Statistics s, const LatticeSpec& lattice) {
  CouplingStencil st;
  st.statistics = s;
  st.lattice = lattice;
  return st;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail");
  for (const auto& r : rules)
    if (!r.pass) os << "; " << r.rule << " violated by " << r.max_violation << " at " << r.where;
  return os.str();
}

ValidationReport validate_stencil(const CouplingStencil& st) {
  ValidationReport rep;
  const int n = st.block();
  const int D = st.lattice.dims;
  const double sign = st.statistics == Statistics::Fermion ? -1.0 : 1.0;

  RuleCheck shape{"shapes", true, 0.0, ""};
  auto bad_disp = [&](const Displacement& r) { return static_cast<int>(r.size()) != D; };
  for (const auto& [r, mat] : st.h)
    if (bad_disp(r) || mat.rows() != n || mat.cols() != n) {
      shape.pass = false;
      shape.max_violation = 1.0;
      shape.where = "h" + format_displacement(r);
    }
  for (std::size_t s = 0; s < st.ell.size(); ++s)
    for (const auto& [r, v] : st.ell[s])
      if (bad_disp(r) || v.size() != n) {
        shape.pass = false;
        shape.max_violation = 1.0;
        shape.where = "ell" + std::to_string(s) + format_displacement(r);
      }
  for (std::size_t u = 0; u < st.m.size(); ++u)
    for (const auto& [rr, mat] : st.m[u])
      if (bad_disp(rr.first) || bad_disp(rr.second) || mat.rows() != n || mat.cols() != n) {
        shape.pass = false;
        shape.max_violation = 1.0;
        shape.where = "m" + std::to_string(u) + format_displacement(rr.first) +
                      format_displacement(rr.second);
      }
  rep.rules.push_back(shape);
  if (!shape.pass) {
    rep.pass = false;
    return rep;
  }

  RuleCheck h_herm{"h(r) = h^dag(-r)", true, 0.0, ""};
  RuleCheck h_sym{st.statistics == Statistics::Fermion ? "h(r) = -h^T(-r)" : "h(r) = h^T(-r)",
                  true, 0.0, ""};
  for (const auto& [r, mat] : st.h) {
    const CMatrix other = lookup(st.h, negate(r), n);
    track(h_herm, max_abs(mat - other.adjoint()), format_displacement(r));
    track(h_sym, max_abs(mat - sign * other.transpose()), format_displacement(r));
  }
  rep.rules.push_back(h_herm);
  rep.rules.push_back(h_sym);

  RuleCheck m_herm{"m(r,r') = m^dag(r',r)", true, 0.0, ""};
  RuleCheck m_sym{st.statistics == Statistics::Fermion ? "m(r,r') = -m^T(r',r)"
                                                       : "m(r,r') = m^T(r',r)",
                  true, 0.0, ""};
  for (std::size_t u = 0; u < st.m.size(); ++u)
    for (const auto& [rr, mat] : st.m[u]) {
      const CMatrix other = lookup(st.m[u], {rr.second, rr.first}, n);
      const std::string where =
          "m" + std::to_string(u) + format_displacement(rr.first) + format_displacement(rr.second);
      track(m_herm, max_abs(mat - other.adjoint()), where);
      track(m_sym, max_abs(mat - sign * other.transpose()), where);
    }
  rep.rules.push_back(m_herm);
  rep.rules.push_back(m_sym);

  for (const auto& r : rep.rules) rep.pass = rep.pass && r.pass;
  return rep;
}

CouplingStencil canonicalize(const CouplingStencil& st) {
  const int n = st.block();
  const double sign = st.statistics == Statistics::Fermion ? -1.0 : 1.0;
  CouplingStencil out = st;
  out.h.clear();
  for (const auto& [r, mat] : st.h) {
    const Displacement mr = negate(r);
    for (const auto& key : {r, mr}) {
      if (out.h.count(key)) continue;
      CMatrix c = 0.5 * (lookup(st.h, key, n) + sign * lookup(st.h, negate(key), n).transpose());
      if (max_abs(c) > 0.0) out.h.emplace(key, std::move(c));
    }
  }
  for (std::size_t u = 0; u < st.m.size(); ++u) {
    out.m[u].clear();
    for (const auto& [rr, mat] : st.m[u]) {
      for (const DisplacementPair& key : {rr, DisplacementPair{rr.second, rr.first}}) {
        if (out.m[u].count(key)) continue;
        CMatrix c = 0.5 * (lookup(st.m[u], key, n) +
                           sign * lookup(st.m[u], {key.second, key.first}, n).transpose());
        if (max_abs(c) > 0.0) out.m[u].emplace(key, std::move(c));
      }
    }
  }
  return out;
}

std::map<Displacement, CMatrix> build_b_stencil(const CouplingStencil& st) {
  std::map<Displacement, CMatrix> b;
  for (const auto& es : st.ell)
    for (const auto& [a, va] : es)
      for (const auto& [c, vc] : es) accumulate(b, subtract(a, c), CMatrix(va * vc.adjoint()));
  return b;
}

CMatrix tau_block(int bands) {
  CMatrix t = CMatrix::Zero(2 * bands, 2 * bands);
  for (int c = 0; c < bands; ++c) {
    t(2 * c, 2 * c + 1) = cd(0, -1);
    t(2 * c + 1, 2 * c) = cd(0, 1);
  }
  return t;
}

EvolutionStencil build_evolution_stencil(const CouplingStencil& input) {
  const CouplingStencil st = canonicalize(input);
  const int n = st.block();
  const bool fermion = st.statistics == Statistics::Fermion;
  const cd I(0, 1);
  const CMatrix tau = tau_block(st.lattice.bands);

  EvolutionStencil ev;
  ev.statistics = st.statistics;
  ev.dims = st.lattice.dims;
  ev.bands = st.lattice.bands;

  std::map<Displacement, CMatrix> x, y;
  for (const auto& [r, hr] : st.h)
    accumulate(x, r, CMatrix(fermion ? CMatrix(-2.0 * I * hr) : CMatrix(-2.0 * I * tau * hr)));
  for (const auto& [r, br] : build_b_stencil(st)) {
    const CMatrix re = br.real().cast<cd>();
    const CMatrix im = br.imag().cast<cd>();
    if (fermion) {
      accumulate(x, r, CMatrix(-re));
      accumulate(y, r, im);
    } else {
      accumulate(x, r, CMatrix(I * tau * im));
      accumulate(y, r, CMatrix(tau * re * tau));
    }
  }
  // Sum over centers of M_n^2: pairs (a,c),(c,e) land on r = a - e.
  for (const auto& mu : st.m) {
    for (const auto& [k1, m1] : mu)
      for (const auto& [k2, m2] : mu) {
        if (k1.second != k2.first) continue;
        const CMatrix prod = fermion ? CMatrix(m1 * m2) : CMatrix(tau * m1 * tau * m2);
        accumulate(x, subtract(k1.first, k2.second), CMatrix(-2.0 * prod));
      }
  }

  for (const auto& [r, v] : x) {
    RMatrix re = real_part_checked(v, "x" + format_displacement(r));
    if (re.cwiseAbs().maxCoeff() > 0.0) ev.x.emplace(r, std::move(re));
  }
  for (const auto& [r, v] : y) {
    RMatrix re = real_part_checked(v, "y" + format_displacement(r));
    if (re.cwiseAbs().maxCoeff() > 0.0) ev.y.emplace(r, std::move(re));
  }
  for (const auto& mu : st.m) {
    std::map<DisplacementPair, RMatrix> zu;
    for (const auto& [key, mat] : mu) {
      const CMatrix zc = fermion ? CMatrix(2.0 * I * mat) : CMatrix(2.0 * I * tau * mat);
      RMatrix re = real_part_checked(zc, "z");
      if (re.cwiseAbs().maxCoeff() > 0.0) zu.emplace(key, std::move(re));
    }
    if (!zu.empty()) ev.z.push_back(std::move(zu));
  }
  (void)n;
  return ev;
}

CouplingStencil transform_basis(const CouplingStencil& st, const RMatrix& O) {
  const int n = st.block();
  if (O.rows() != n || O.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "basis transform must be 2b x 2b");
  // coefficients pick up the inverse transpose, which is O itself when O is orthogonal
  const CMatrix Oc = O.inverse().transpose().cast<cd>();
  CouplingStencil out = st;
  for (auto& [r, mat] : out.h) mat = Oc * mat * Oc.transpose();
  for (auto& es : out.ell)
    for (auto& [r, v] : es) v = Oc * v;
  for (auto& mu : out.m)
    for (auto& [rr, mat] : mu) mat = Oc * mat * Oc.transpose();
  return out;
}

}  // namespace lindcorr
