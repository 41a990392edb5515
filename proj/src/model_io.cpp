#include "lindcorr/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "lindcorr/error.hpp"
#include "lindcorr/models.hpp"

namespace lindcorr {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) fail(line, "bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(line, "bad integer '" + s + "'");
  }
}

double parse_double(const std::string& s, int line) {
  try {
    return parse_value(s);
  } catch (const Error&) {
    fail(line, "bad number '" + s + "'");
  }
}

std::vector<int> parse_extent(const std::string& v, int line) {
  if (v == "infinite") return {};
  std::vector<int> out;
  for (const auto& t : split_ws(v)) {
    const int L = parse_int(t, line);
    if (L < 1) fail(line, "extent must be >= 1");
    out.push_back(L);
  }
  if (out.empty()) fail(line, "empty extent");
  return out;
}

struct Statement {
  int line;
  std::string key;    // first word of the left-hand side
  std::string lhs;    // remainder of the left-hand side
  std::string value;  // right-hand side
};

// Reads "[1,0] [0,0]" style displacement lists from the left-hand side.
std::vector<Displacement> parse_displacements(const std::string& s, int dims, int line) {
  std::vector<Displacement> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ' ' || s[i] == '\t') {
      ++i;
      continue;
    }
    if (s[i] != '[') fail(line, "expected '[' in displacement");
    const auto close = s.find(']', i);
    if (close == std::string::npos) fail(line, "unterminated displacement");
    Displacement r;
    for (const auto& t : split_ws(s.substr(i + 1, close - i - 1))) r.push_back(parse_int(t, line));
    if (static_cast<int>(r.size()) != dims) fail(line, "displacement has the wrong dimension");
    out.push_back(r);
    i = close + 1;
  }
  return out;
}

std::vector<cd> parse_entries(const std::string& s, std::size_t count, int line) {
  const auto toks = split_ws(s);
  if (toks.size() != 2 * count)
    fail(line, "expected " + std::to_string(2 * count) + " numbers, got " + std::to_string(toks.size()));
  std::vector<cd> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = cd(parse_double(toks[2 * i], line), parse_double(toks[2 * i + 1], line));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_disp(const Displacement& r) {
  std::string s = "[";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s + "]";
}

}  // namespace

double parse_value(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty value");
  double acc = 1.0;
  char op = '*';
  std::size_t i = 0;
  while (true) {
    std::size_t j = i;
    while (j < s.size() && s[j] != '*' && s[j] != '/') ++j;
    const std::string tok = trim(s.substr(i, j - i));
    double v;
    if (tok == "pi" || tok == "-pi") {
      v = tok[0] == '-' ? -M_PI : M_PI;
    } else {
      std::size_t pos = 0;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::logic_error&) {
        throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
      }
      if (pos != tok.size()) throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
    }
    acc = op == '*' ? acc * v : acc / v;
    if (j >= s.size()) break;
    op = s[j];
    i = j + 1;
  }
  return acc;
}

CouplingStencil parse_model(const std::string& text) {
  std::vector<Statement> stmts;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string lhs = trim(line.substr(0, eq));
    Statement st{lineno, "", "", trim(line.substr(eq + 1))};
    const auto sp = lhs.find_first_of(" \t[");
    st.key = lhs.substr(0, sp);
    st.lhs = sp == std::string::npos ? "" : trim(lhs.substr(sp));
    stmts.push_back(st);
  }

  // preset files
  if (!stmts.empty() && stmts.front().key == "preset") {
    std::map<std::string, std::string> params;
    for (std::size_t i = 1; i < stmts.size(); ++i) {
      if (!stmts[i].lhs.empty() || stmts[i].key == "preset") fail(stmts[i].line, "unexpected statement in preset file");
      params[stmts[i].key] = stmts[i].value;
    }
    try {
      return build_preset(stmts.front().value, params);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) fail(stmts.front().line, e.what());
      throw;
    }
  }

  Statistics stats = Statistics::Fermion;
  int dims = 1, bands = 1;
  std::vector<int> extent;
  bool have_stats = false;
  for (const auto& st : stmts) {
    if (st.key == "statistics") {
      if (st.value != "fermion" && st.value != "boson") fail(st.line, "statistics must be fermion or boson");
      stats = st.value == "fermion" ? Statistics::Fermion : Statistics::Boson;
      have_stats = true;
    } else if (st.key == "dims") {
      dims = parse_int(st.value, st.line);
      if (dims < 1) fail(st.line, "dims must be >= 1");
    } else if (st.key == "bands") {
      bands = parse_int(st.value, st.line);
      if (bands < 1) fail(st.line, "bands must be >= 1");
    } else if (st.key == "extent") {
      extent = parse_extent(st.value, st.line);
    } else if (st.key != "h" && st.key != "ell" && st.key != "m") {
      fail(st.line, "unknown key '" + st.key + "'");
    }
    if ((st.key == "statistics" || st.key == "dims" || st.key == "bands" || st.key == "extent") && !st.lhs.empty())
      fail(st.line, "unexpected arguments for '" + st.key + "'");
  }
  if (!have_stats) fail(0, "missing 'statistics'");
  if (!extent.empty() && static_cast<int>(extent.size()) != dims) fail(0, "extent length does not match dims");

  const LatticeSpec lat = extent.empty() ? LatticeSpec::infinite(dims, bands) : LatticeSpec::finite(extent, bands);
  CouplingStencil out = empty_stencil(stats, lat);
  const int nb = 2 * bands;
  auto family_index = [&](std::string& rest, int line) {
    const auto sp = rest.find_first_of(" \t[");
    if (sp == std::string::npos) fail(line, "missing displacement");
    const int s = parse_int(rest.substr(0, sp), line);
    if (s < 0 || s > 100000) fail(line, "bad family index");
    rest = trim(rest.substr(sp));
    return static_cast<std::size_t>(s);
  };
  for (const auto& st : stmts) {
    if (st.key == "h") {
      const auto rs = parse_displacements(st.lhs, dims, st.line);
      if (rs.size() != 1) fail(st.line, "h needs one displacement");
      const auto e = parse_entries(st.value, static_cast<std::size_t>(nb * nb), st.line);
      CMatrix M(nb, nb);
      for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q) M(p, q) = e[static_cast<std::size_t>(p * nb + q)];
      auto it = out.h.find(rs[0]);
      if (it == out.h.end()) out.h[rs[0]] = M;
      else it->second += M;
    } else if (st.key == "ell") {
      std::string rest = st.lhs;
      const std::size_t s = family_index(rest, st.line);
      const auto rs = parse_displacements(rest, dims, st.line);
      if (rs.size() != 1) fail(st.line, "ell needs one displacement");
      const auto e = parse_entries(st.value, static_cast<std::size_t>(nb), st.line);
      if (out.ell.size() <= s) out.ell.resize(s + 1);
      CVector v(nb);
      for (int p = 0; p < nb; ++p) v(p) = e[static_cast<std::size_t>(p)];
      auto it = out.ell[s].find(rs[0]);
      if (it == out.ell[s].end()) out.ell[s][rs[0]] = v;
      else it->second += v;
    } else if (st.key == "m") {
      std::string rest = st.lhs;
      const std::size_t u = family_index(rest, st.line);
      const auto rs = parse_displacements(rest, dims, st.line);
      if (rs.size() != 2) fail(st.line, "m needs two displacements");
      const auto e = parse_entries(st.value, static_cast<std::size_t>(nb * nb), st.line);
      if (out.m.size() <= u) out.m.resize(u + 1);
      CMatrix M(nb, nb);
      for (int p = 0; p < nb; ++p)
        for (int q = 0; q < nb; ++q) M(p, q) = e[static_cast<std::size_t>(p * nb + q)];
      const DisplacementPair key{rs[0], rs[1]};
      auto it = out.m[u].find(key);
      if (it == out.m[u].end()) out.m[u][key] = M;
      else it->second += M;
    }
  }
  return out;
}

CouplingStencil load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_model(ss.str());
}

std::string format_model(const CouplingStencil& st) {
  std::ostringstream os;
  os << "statistics = " << statistics_name(st.statistics) << '\n';
  os << "dims = " << st.lattice.dims << '\n';
  os << "bands = " << st.lattice.bands << '\n';
  os << "extent =";
  if (st.lattice.extent.empty()) os << " infinite";
  for (int L : st.lattice.extent) os << ' ' << L;
  os << '\n';
  auto entries = [&](const auto& M) {
    std::string s;
    for (Eigen::Index p = 0; p < M.rows(); ++p)
      for (Eigen::Index q = 0; q < M.cols(); ++q)
        s += ' ' + fmt(M(p, q).real()) + ' ' + fmt(M(p, q).imag());
    return s;
  };
  for (const auto& [r, M] : st.h) os << "h " << fmt_disp(r) << " =" << entries(M) << '\n';
  for (std::size_t s = 0; s < st.ell.size(); ++s)
    for (const auto& [r, v] : st.ell[s]) os << "ell " << s << ' ' << fmt_disp(r) << " =" << entries(v.transpose()) << '\n';
  for (std::size_t u = 0; u < st.m.size(); ++u)
    for (const auto& [rr, M] : st.m[u])
      os << "m " << u << ' ' << fmt_disp(rr.first) << ' ' << fmt_disp(rr.second) << " =" << entries(M) << '\n';
  return os.str();
}

CouplingStencil build_preset(const std::string& name, const std::map<std::string, std::string>& params) {
  auto number = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_value(it->second);
  };
  auto extent = [&]() -> std::vector<int> {
    auto it = params.find("extent");
    return it == params.end() ? std::vector<int>{} : parse_extent(trim(it->second), 0);
  };
  auto check_keys = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw Error(ErrorKind::ParseError, "unknown parameter '" + k + "' for preset " + name);
    }
  };
  if (name == "xy_chain") {
    check_keys({"mu", "alpha", "eta", "phi", "zeta", "extent"});
    XYChainParams p;
    p.mu = number("mu", 0.0);
    p.alpha = number("alpha", 0.2);
    p.eta = number("eta", 1.0);
    p.phi = number("phi", 0.0);
    p.zeta = number("zeta", 0.0);
    p.extent = extent();
    return xy_chain_stencil(p);
  }
  if (name == "critical_boson") {
    check_keys({"D", "eta", "extent"});
    CriticalBosonParams p;
    const double D = number("D", 1.0);
    if (D != std::floor(D) || D < 1) throw Error(ErrorKind::ParseError, "D must be a positive integer");
    p.D = static_cast<int>(D);
    p.eta = number("eta", 1.0);
    p.extent = extent();
    return critical_boson_stencil(p);
  }
  throw Error(ErrorKind::ParseError, "unknown preset '" + name + "'");
}

}  // namespace lindcorr
