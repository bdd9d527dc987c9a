#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qfourier/fourier.hpp"

namespace qfourier {

using Json = nlohmann::ordered_json;

enum class Format { json, csv, text };
Format parse_format(const std::string& name);

// A valuation as a JSON value: an integer, "a/b", or ">=A" when unresolved.
Json valuation_json(const ValuationBound& v);
// Like valuation_json, but an unresolved bound reads "inf".
Json stable_json(const ValuationBound& v);

// Little-endian base-p digits. Base-field values give a flat list of the
// unit digits; other values give one list per coefficient of c_i / p^shift.
void put_value(Json& out, const CycloElement& a);

// "2 + 1*3 + 1*9", or "(c_0) + (c_1)*z + ..." outside the base field.
std::string value_text(const CycloElement& a);

struct BernoulliRow {
  int m = 0;
  mpq_class exact;
  CycloElement computed;
  ValuationBound agree;
};

struct InverseSample {
  std::int64_t x = 0;
  CycloElement value;
  ValuationBound residual;
};

struct RunParams {
  std::uint32_t p = 3;
  int M = 16;
  std::string q = "1";
  std::int64_t l = 1;
  std::string f;
  std::string g;
};

std::string emit_bernoulli(const std::vector<BernoulliRow>& rows, const RunParams& params, int N,
                           Format format);
std::string emit_integral(const IntegralResult& r, Format format);
std::string emit_table(const SpectralTable& t, const RunParams& params,
                       const std::optional<InverseSample>& inverse, Format format);
struct VerificationRun {
  VerificationReport report;
  RunParams params;
};
std::string emit_verification(const std::vector<VerificationRun>& runs, Format format);

}  // namespace qfourier
