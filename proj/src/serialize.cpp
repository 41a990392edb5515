#include "lindcorr/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lindcorr {

namespace {

std::string format_double(double v, int digits) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void dump(const Json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << sep;
        dump(it.value(), os, indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          dump(j[i], os, indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        dump(j[i], os, indent, depth + 1);
      }
      os << nl << close << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>(), 17);
      return;
    default:
      os << j.dump();
  }
}

Json complex_json(cd z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

const char* library_version() { return "0.1.0"; }

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump(j, os, indent, 0);
  if (indent > 0) os << '\n';
  return os.str();
}

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v, 10);
}

std::string dump_csv(const Json& metadata, const Table& table) {
  std::ostringstream os;
  for (auto it = metadata.begin(); it != metadata.end(); ++it)
    os << "# " << it.key() << ": " << dump_json(it.value(), 0) << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_csv_number(row[i]);
    os << '\n';
  }
  return os.str();
}

Json to_json(const CovarianceField& field, bool include_momentum) {
  Json j;
  j["statistics"] = statistics_name(field.statistics);
  j["bands"] = field.bands;
  j["grid"] = field.grid.sizes();
  j["certificates"] = {{"method", field.method},
                       {"residual", field.residual},
                       {"residual_tolerance", field.residual_tolerance},
                       {"translation_spread", field.translation_spread},
                       {"imag_residue", field.imag_residue},
                       {"skipped_k", field.skipped_k}};
  if (field.has_real()) {
    Json blocks = Json::array();
    for (std::size_t i = 0; i < field.grid.points(); ++i) {
      const Displacement r = field.grid.at(i);
      const RMatrix g = field.gamma(r);
      Json rows = Json::array();
      for (Eigen::Index p = 0; p < g.rows(); ++p) {
        Json row = Json::array();
        for (Eigen::Index q = 0; q < g.cols(); ++q) row.push_back(g(p, q));
        rows.push_back(row);
      }
      blocks.push_back({{"r", r}, {"gamma", rows}});
    }
    j["real_space"] = blocks;
  }
  if (include_momentum && field.has_momentum()) {
    Json blocks = Json::array();
    for (std::size_t i = 0; i < field.grid.points(); ++i) {
      const CMatrix g = field.gamma_k(i);
      Json rows = Json::array();
      for (Eigen::Index p = 0; p < g.rows(); ++p) {
        Json row = Json::array();
        for (Eigen::Index q = 0; q < g.cols(); ++q) row.push_back(complex_json(g(p, q)));
        rows.push_back(row);
      }
      blocks.push_back({{"k", field.grid.momentum(i)}, {"gamma", rows}});
    }
    j["momentum_space"] = blocks;
  }
  return j;
}

Json to_json(const GapPoint& p) {
  return {{"parameter", p.parameter},
          {"gap", p.gap},
          {"argmax_k", p.argmax_k},
          {"top_eigenvalue", complex_json(p.top_eigenvalue)},
          {"degenerate", p.degenerate},
          {"g", p.g},
          {"kappa", p.kappa}};
}

Json to_json(const GapCurve& c) {
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return {{"parameter_name", c.parameter_name}, {"min_gap", c.min_gap()}, {"points", pts}};
}

Json to_json(const DecayModes& m) {
  Json modes = Json::array();
  for (std::size_t i = 0; i < m.modes.size(); ++i)
    modes.push_back({{"beta", complex_json(m.modes[i])},
                     {"modulus", std::abs(m.modes[i])},
                     {"multiplicity", m.multiplicity[i]}});
  Json marginal = Json::array();
  for (const cd b : m.marginal) marginal.push_back(complex_json(b));
  return {{"modes", modes}, {"marginal", marginal}};
}

Json to_json(const PoleScan& p) {
  Json poles = Json::array();
  for (const auto& q : p.poles)
    poles.push_back({{"zeta", complex_json(q.location)}, {"modulus", std::abs(q.location)}, {"residue", q.residue}});
  return {{"poles", poles},
          {"zeta_inner", p.zeta_inner},
          {"zeta_outer", p.zeta_outer},
          {"xi", p.xi},
          {"xi_negative", p.xi_negative},
          {"argmax_k", p.argmax_k},
          {"refinement_delta", p.refinement_delta},
          {"fit_error", p.fit_error}};
}

Json to_json(const FitResult& f) {
  return {{"rate", f.rate},          {"sign", f.sign},
          {"prefactor", f.prefactor}, {"rms", f.rms},
          {"oscillatory", f.oscillatory}, {"exponential", f.exponential},
          {"samples", f.samples}};
}

Json to_json(const DecayReport& r) {
  Json j;
  j["route"] = r.route;
  j["decay_modes"] = to_json(r.modes);
  j["poles"] = r.poles ? to_json(*r.poles) : Json(nullptr);
  j["xi_bound"] = r.xi_bound;
  j["fit"] = r.fit ? to_json(*r.fit) : Json(nullptr);
  j["difference_residual"] = r.difference_residual;
  return j;
}

Table field_table(const CovarianceField& field) {
  Table t;
  const int D = field.grid.dims();
  const int nb = field.block();
  for (int a = 0; a < D; ++a) t.columns.push_back("r" + std::to_string(a + 1));
  for (int p = 0; p < nb; ++p)
    for (int q = 0; q < nb; ++q) t.columns.push_back("g" + std::to_string(p) + std::to_string(q));
  if (!field.has_real()) return t;
  for (std::size_t i = 0; i < field.grid.points(); ++i) {
    const Displacement r = field.grid.at(i);
    const RMatrix g = field.gamma(r);
    std::vector<double> row(r.begin(), r.end());
    for (int p = 0; p < nb; ++p)
      for (int q = 0; q < nb; ++q) row.push_back(g(p, q));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table gap_table(const GapCurve& c) {
  Table t;
  t.columns = {c.parameter_name, "gap", "g", "kappa", "top_re", "top_im"};
  for (const auto& p : c.points)
    t.rows.push_back({p.parameter, p.gap, p.g, p.kappa, p.top_eigenvalue.real(), p.top_eigenvalue.imag()});
  return t;
}

}  // namespace lindcorr
