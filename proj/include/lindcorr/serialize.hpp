#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lindcorr/correlation.hpp"
#include "lindcorr/covariance_field.hpp"
#include "lindcorr/spectral.hpp"

namespace lindcorr {

using Json = nlohmann::ordered_json;

const char* library_version();

/// JSON text with every floating-point value printed with 17 significant
/// digits; NaN and infinities become null.
std::string dump_json(const Json& j, int indent = 2);

std::string format_csv_number(double v);  // 10 significant digits

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Metadata lines are written as "# key: <compact json>" ahead of the header row.
std::string dump_csv(const Json& metadata, const Table& table);

Json to_json(const CovarianceField& field, bool include_momentum = false);
Json to_json(const GapPoint& p);
Json to_json(const GapCurve& c);
Json to_json(const DecayModes& m);
Json to_json(const PoleScan& p);
Json to_json(const FitResult& f);
Json to_json(const DecayReport& r);

/// Real-space blocks as rows r_1..r_D, then the (2b)^2 entries gamma_pq.
Table field_table(const CovarianceField& field);
Table gap_table(const GapCurve& c);

}  // namespace lindcorr
