#pragma once

// JSON forms of spectra, matrices, ensemble specs and results.
//
// Matrix schema: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
// Spectrum schema: {"values": [..]} (sorted non-increasing on load).

#include "designlab/ensembles.hpp"
#include "designlab/entropy.hpp"
#include "designlab/exact.hpp"
#include "designlab/moments.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace designlab {

using Json = nlohmann::json;

inline Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline CMatrix matrix_from_json(const Json& j) {
  const long long r = j.at("rows").get<long long>();
  const long long c = j.at("cols").get<long long>();
  const auto& data = j.at("data");
  if (r < 1 || c < 1 || static_cast<long long>(data.size()) != r * c)
    throw std::invalid_argument("matrix JSON: data length differs from rows * cols");
  CMatrix m(r, c);
  for (long long k = 0; k < r * c; ++k) {
    const auto& e = data.at(k);
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("matrix JSON: entries must be [re, im] pairs");
    m(k / c, k % c) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

inline Json spectrum_to_json(const Spectrum& s) { return {{"values", s.values()}}; }

inline Spectrum spectrum_from_json(const Json& j) { return Spectrum(j.at("values").get<std::vector<double>>(), 1e-10); }

inline Json to_json(const EnsembleSpec& s) {
  Json j{{"kind", to_string(s.kind)}, {"seed", s.seed}};
  switch (s.kind) {
    case EnsembleKind::haar_unitary: j["d"] = s.d; break;
    case EnsembleKind::haar_state: j["dA"] = s.dA; j["dB"] = s.dB; break;
    case EnsembleKind::pauli:
    case EnsembleKind::clifford: j["n"] = s.n; break;
    case EnsembleKind::local_circuit: j["n"] = s.n; j["depth"] = s.depth; j["topology"] = "1d-open-chain"; break;
    case EnsembleKind::partial_scrambler:
      j["d"] = s.d;
      j["D"] = s.block;
      if (s.inner) j["inner"] = to_json(*s.inner);
      break;
  }
  return j;
}

/// Parses and validates an ensemble spec; throws std::invalid_argument on malformed input.
inline EnsembleSpec ensemble_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("ensemble spec must be a JSON object");
  EnsembleSpec s;
  try {
    s.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
    s.seed = j.value("seed", kDefaultSeed);
    s.n = j.value("n", 0);
    s.d = j.value("d", 0);
    s.dA = j.value("dA", 0);
    s.dB = j.value("dB", 0);
    s.depth = j.value("depth", 0);
    s.block = j.value("D", 0);
    if (s.kind == EnsembleKind::partial_scrambler && s.block > 0) {
      if (j.contains("inner")) s.inner = std::make_shared<EnsembleSpec>(ensemble_from_json(j.at("inner")));
      else s.inner = std::make_shared<EnsembleSpec>(haar_unitary_spec(s.block * s.block));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ensemble spec: ") + e.what());
  }
  s.validate();
  return s;
}

inline Json to_json(const MomentEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.stderr()}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

inline Json to_json(const BoundReport& b) {
  Json j{{"name", b.name}, {"preconditions_met", b.preconditions_met}, {"statement", b.location}, {"provenance", "bound"}};
  if (std::isfinite(b.value)) j["value"] = b.value;
  else j["value"] = nullptr;
  return j;
}

inline Json to_json(const ChoiPartition& p) { return Json::array({p.dA, p.dB, p.dC, p.dD}); }

inline Json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"value", to_double(q)}, {"provenance", "exact"}}; }

}  // namespace designlab
