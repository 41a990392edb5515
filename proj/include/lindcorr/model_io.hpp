#pragma once

#include <map>
#include <string>

#include "lindcorr/stencil.hpp"

namespace lindcorr {

/// Text model format, one statement per line, '#' starts a comment:
///
///   statistics = fermion            # or boson
///   dims = 1
///   bands = 1
///   extent = infinite               # or one integer per dimension: 16 16
///   h [1] = re im re im ...         # (2b)^2 complex entries, row-major
///   ell 0 [0] = re im ...           # 2b entries of family 0
///   m 0 [0] [0] = re im ...         # (2b)^2 entries of family 0
///
/// Displacements are written [r1,r2,...]. Repeated coupling lines add up.
/// A preset file instead starts with `preset = <name>` followed by parameter
/// assignments (see build_preset). Unknown keys throw ParseError.
CouplingStencil parse_model(const std::string& text);
CouplingStencil load_model(const std::string& path);

/// Writes a stencil in the format read by parse_model (17 significant digits).
std::string format_model(const CouplingStencil& stencil);

/// Named presets:
///   xy_chain        mu, alpha, eta, phi, zeta, extent (defaults 0, 0.2, 1, 0, 0, infinite)
///   critical_boson  D, eta, extent
/// Values accept plain numbers and products/quotients with `pi` (2*pi/5).
/// `extent` is `infinite` (default) or integers separated by spaces or commas.
CouplingStencil build_preset(const std::string& name, const std::map<std::string, std::string>& params);

/// Parses a number or a product/quotient of numbers and `pi`.
double parse_value(const std::string& text);

}  // namespace lindcorr
