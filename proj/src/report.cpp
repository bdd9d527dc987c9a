#include "qfourier/report.hpp"

#include <sstream>

namespace qfourier {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "text") return Format::text;
  throw DomainError("unknown format '" + name + "' (json, csv, text)");
}

Json valuation_json(const ValuationBound& v) {
  if (!v.resolved) return ">=" + v.value.to_string();
  if (v.value.is_integer()) return v.value.num();
  return v.value.to_string();
}

Json stable_json(const ValuationBound& v) {
  if (!v.resolved) return "inf";
  return valuation_json(v);
}

namespace {

std::vector<unsigned> shifted_digits(const PadicScalar& c, int shift) {
  std::vector<unsigned> d;
  if (c.is_zero()) return d;
  d.assign(static_cast<std::size_t>(c.valuation() - shift), 0u);
  for (unsigned x : c.digits()) d.push_back(x);
  return d;
}

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string csv_value(const CycloElement& a) {
  std::string s = value_text(a);
  return "\"" + s + "\"";
}

}  // namespace

void put_value(Json& out, const CycloElement& a) {
  if (a.in_base_field()) {
    const PadicScalar& c = a.coeff(0);
    out["value_digits"] = c.digits();
    out["valuation"] = c.is_zero() ? Json(">=" + std::to_string(c.precision())) : Json(c.valuation());
    return;
  }
  int shift = kInfiniteValuation;
  for (const auto& c : a.coeffs()) shift = std::min(shift, c.valuation());
  if (shift == kInfiniteValuation) shift = 0;
  Json digits = Json::array();
  for (const auto& c : a.coeffs()) digits.push_back(shifted_digits(c, shift));
  out["value_digits"] = digits;
  out["shift"] = shift;
  out["valuation"] = valuation_json(a.valuation_bound());
}

std::string value_text(const CycloElement& a) {
  if (a.in_base_field()) return a.coeff(0).to_text();
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    const PadicScalar& c = a.coeffs()[i];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_text() << ")";
    if (i == 1) os << "*z";
    if (i > 1) os << "*z^" << i;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

Json params_json(const RunParams& p) {
  Json j;
  j["p"] = p.p;
  j["M"] = p.M;
  j["q"] = p.q;
  j["l"] = p.l;
  if (!p.f.empty()) j["f"] = p.f;
  if (!p.g.empty()) j["g"] = p.g;
  return j;
}

std::string vtext(const ValuationBound& v) { return v.to_string(); }

}  // namespace

std::string emit_bernoulli(const std::vector<BernoulliRow>& rows, const RunParams& params, int N,
                           Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::json: {
      Json j;
      j["p"] = params.p;
      j["M"] = params.M;
      j["N"] = N;
      Json arr = Json::array();
      for (const auto& r : rows) {
        Json row;
        row["m"] = r.m;
        row["exact"] = r.exact.get_str();
        Json v;
        put_value(v, r.computed);
        row["computed_digits"] = v["value_digits"];
        row["computed_valuation"] = v["valuation"];
        row["agree_digits"] = stable_json(r.agree);
        arr.push_back(row);
      }
      j["rows"] = arr;
      os << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << "m,exact,computed,agree_digits\n";
      for (const auto& r : rows) {
        os << r.m << "," << r.exact.get_str() << "," << csv_value(r.computed) << ","
           << scalar_text(stable_json(r.agree)) << "\n";
      }
      break;
    case Format::text:
      os << "Volkenborn moments, p = " << params.p << ", N = " << N << ", M = " << params.M << "\n";
      for (const auto& r : rows) {
        os << "B_" << r.m << " = " << r.exact.get_str() << "  computed " << value_text(r.computed)
           << "  agree " << vtext(r.agree) << "\n";
      }
      break;
  }
  return os.str();
}

std::string emit_integral(const IntegralResult& r, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::json: {
      Json j;
      put_value(j, r.value);
      // Keep the documented field order: value_digits, [shift,] valuation, stable_digits, level.
      j["stable_digits"] = stable_json(r.stable_digits);
      j["level"] = r.level;
      os << j.dump() << "\n";
      break;
    }
    case Format::csv: {
      Json v;
      put_value(v, r.value);
      const Json s = stable_json(r.stable_digits);
      os << "level,valuation,stable_digits,value\n";
      os << r.level << "," << scalar_text(v["valuation"]) << "," << scalar_text(s) << ","
         << csv_value(r.value) << "\n";
      break;
    }
    case Format::text:
      os << "value " << value_text(r.value) << "\n";
      os << "level " << r.level << ", stable digits " << vtext(r.stable_digits) << "\n";
      break;
  }
  return os.str();
}

std::string emit_table(const SpectralTable& t, const RunParams& params,
                       const std::optional<InverseSample>& inverse, Format format) {
  std::ostringstream os;
  const std::vector<CycloElement> entries = t.entries();
  switch (format) {
    case Format::json: {
      Json j;
      j["p"] = params.p;
      j["n"] = t.n;
      j["N"] = t.N;
      j["q"] = params.q;
      j["twist"] = to_string(t.twist);
      Json arr = Json::array();
      for (std::size_t i = 0; i < entries.size(); ++i) {
        Json e;
        e["k"] = t.characters[i].exponent();
        put_value(e, entries[i]);
        arr.push_back(e);
      }
      j["entries"] = arr;
      if (inverse) {
        Json inv;
        inv["x"] = inverse->x;
        put_value(inv, inverse->value);
        inv["residual_valuation"] = valuation_json(inverse->residual);
        j["inverse"] = inv;
      }
      os << j.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << "k,valuation,value\n";
      for (std::size_t i = 0; i < entries.size(); ++i) {
        os << t.characters[i].exponent() << "," << vtext(entries[i].valuation_bound()) << ","
           << csv_value(entries[i]) << "\n";
      }
      break;
    case Format::text:
      os << "transform n = " << t.n << ", N = " << t.N << ", twist " << to_string(t.twist) << "\n";
      for (std::size_t i = 0; i < entries.size(); ++i) {
        os << "w = " << t.characters[i].to_string() << ": " << value_text(entries[i]) << "  (v "
           << vtext(entries[i].valuation_bound()) << ")\n";
      }
      if (inverse) {
        os << "inverse at x = " << inverse->x << ": " << value_text(inverse->value) << ", residual v "
           << vtext(inverse->residual) << "\n";
      }
      break;
  }
  return os.str();
}

std::string emit_verification(const std::vector<VerificationRun>& runs, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::json: {
      Json arr = Json::array();
      for (const auto& run : runs) {
        const VerificationReport& r = run.report;
        Json j;
        j["identity"] = to_string(r.identity);
        j["literal_residual_valuation"] = valuation_json(r.literal);
        j["corrected_residual_valuation"] = valuation_json(r.corrected);
        if (r.ratio) j["ratio_residual_valuation"] = valuation_json(*r.ratio);
        Json levels;
        levels["n"] = r.n;
        levels["N"] = r.N;
        if (r.outer_level > 0) levels["outer"] = r.outer_level;
        j["levels"] = levels;
        j["params"] = params_json(run.params);
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(j);
      }
      os << arr.dump(2) << "\n";
      break;
    }
    case Format::csv:
      os << "identity,f,g,literal,corrected,ratio,n,N\n";
      for (const auto& run : runs) {
        const VerificationReport& r = run.report;
        os << to_string(r.identity) << ",\"" << run.params.f << "\",\"" << run.params.g << "\","
           << vtext(r.literal) << "," << vtext(r.corrected) << "," << (r.ratio ? vtext(*r.ratio) : "")
           << "," << r.n << "," << r.N << "\n";
      }
      break;
    case Format::text:
      for (const auto& run : runs) {
        const VerificationReport& r = run.report;
        os << to_string(r.identity) << " f = " << run.params.f << ", g = " << run.params.g
           << ": literal " << vtext(r.literal) << ", corrected " << vtext(r.corrected);
        if (r.ratio) os << ", ratio " << vtext(*r.ratio);
        os << " (n = " << r.n << ", N = " << r.N << ")\n";
      }
      break;
  }
  return os.str();
}

}  // namespace qfourier
