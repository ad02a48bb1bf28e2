#include "dwig/kernel_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dwig/errors.hpp"

namespace dwig {

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end()) throw InputError(std::string("kernel document: missing field '") + field + "'");
  return *it;
}

int as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) throw InputError(std::string("kernel document: ") + what + " must be an integer");
  return v.get<int>();
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) throw InputError(std::string("kernel document: ") + what + " must be a number");
  return v.get<double>();
}

LagMap read_triples(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty())
    throw InputError(std::string("kernel document: '") + field + "' must be a non-empty array");
  LagMap out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3)
      throw InputError(std::string("kernel document: rows of '") + field + "' must be [k, l, value]");
    out[Lag{as_int(row[0], "lag"), as_int(row[1], "lag")}] += as_double(row[2], "value");
  }
  return out;
}

SeqMap read_pairs(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty())
    throw InputError(std::string("kernel document: '") + field + "' must be a non-empty array");
  SeqMap out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 2)
      throw InputError(std::string("kernel document: rows of '") + field + "' must be [k, value]");
    out[as_int(row[0], "lag")] += as_double(row[1], "value");
  }
  return out;
}

void require_valid(const CovKernel& k) {
  const auto diag = validate(k);
  if (!diag.ok()) throw InputError("kernel failed validation:\n" + diag.to_text());
}

}  // namespace

std::string to_string(KernelSpec::Type t) {
  switch (t) {
    case KernelSpec::Type::coeffs: return "coeffs";
    case KernelSpec::Type::explicit_values: return "explicit";
    case KernelSpec::Type::separable: return "separable";
  }
  return "unknown";
}

KernelSpec parse_kernel_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw InputError("kernel document is empty: missing field 'type'");
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("kernel document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("kernel document must be a JSON object: missing field 'type'");
  const json& type = require(doc, "type");
  if (!type.is_string()) throw InputError("kernel document: 'type' must be a string");
  const std::string t = type.get<std::string>();

  KernelSpec spec;
  try {
    if (t == "coeffs") {
      spec.type = KernelSpec::Type::coeffs;
      spec.coeffs = LinearCoeffs::from_entries(read_triples(require(doc, "entries"), "entries"));
      spec.kernel = kernel_from_coeffs(*spec.coeffs);
    } else if (t == "explicit") {
      spec.type = KernelSpec::Type::explicit_values;
      spec.kernel = CovKernel::from_values(read_triples(require(doc, "entries"), "entries"));
    } else if (t == "separable") {
      spec.type = KernelSpec::Type::separable;
      const char* field = doc.contains("rho") || !doc.contains("entries") ? "rho" : "entries";
      const json& rows = require(doc, field);
      SeqMap rho;
      if (rows.is_array() && !rows.empty() && rows.front().is_array() && rows.front().size() == 3) {
        const CovKernel full = CovKernel::from_values(read_triples(rows, field));
        if (!full.is_separable())
          throw InputError("kernel document: separable entries do not factor as R(u,0) R(0,v)");
        rho = full.row_factor();
      } else {
        rho = read_pairs(rows, field);
      }
      int radius = 0;
      for (const auto& [k, v] : rho) radius = std::max(radius, std::abs(k));
      if (doc.contains("radius")) radius = as_int(doc["radius"], "radius");
      spec.kernel = separable_kernel(rho, radius);
    } else {
      throw InputError("kernel document: unknown type '" + t + "' (expected coeffs, separable or explicit)");
    }
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("kernel document: ") + e.what());
  }
  require_valid(spec.kernel);
  return spec;
}

KernelSpec load_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open kernel file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kernel_json(buf.str());
}

LinearCoeffs simulation_coeffs(const KernelSpec& spec) {
  if (spec.coeffs) return *spec.coeffs;
  std::optional<SeqMap> rho = spec.kernel.separable_factor();
  if (!rho && spec.kernel.is_separable()) rho = spec.kernel.row_factor();
  if (!rho)
    throw InputError("simulation needs a 'coeffs' kernel or a separable kernel; got a non-separable explicit kernel");
  return LinearCoeffs::separable(spectral_sqrt_factor(*rho));
}

}  // namespace dwig
