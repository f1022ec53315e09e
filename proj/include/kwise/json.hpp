#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <variant>
#include <vector>

#include "kwise/errors.hpp"
#include "kwise/extremal_lp.hpp"
#include "kwise/independence.hpp"
#include "kwise/interval.hpp"
#include "kwise/moments.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"
#include "kwise/sampler.hpp"

// JSON forms. Rationals are "num/den" strings (integers too: "64/1"); interval endpoints are
// decimal strings rounded outward, with the working precision alongside.

namespace kwise {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("expected a \"num/den\" string");
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const Interval& v) {
  return Json{{"lo", v.lo().to_decimal(MPFR_RNDD)}, {"hi", v.hi().to_decimal(MPFR_RNDU)}, {"precision", v.precision()}};
}

inline Json to_json(const MomentValue& v) {
  if (const auto* q = std::get_if<Rational>(&v)) return to_json(*q);
  return to_json(std::get<Interval>(v));
}

inline Json to_json(const SampleSpace& space) {
  Json atoms = Json::array();
  for (const Atom& atom : space.atoms())
    atoms.push_back(Json{{"signs", SignVector(space.dimension(), atom.bits).to_string()}, {"prob", to_json(atom.prob)}});
  return Json{{"n", space.dimension()}, {"atoms", std::move(atoms)}};
}

inline SampleSpace sample_space_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<unsigned>();
    std::vector<Atom> atoms;
    for (const Json& a : j.at("atoms")) {
      const SignVector v = SignVector::parse(a.at("signs").get<std::string>());
      if (v.size() != n) throw DimensionMismatch("atom sign string length differs from n");
      atoms.push_back({v.bits(), rational_from_json(a.at("prob"))});
    }
    return {n, std::move(atoms)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed sample space JSON: ") + e.what());
  }
}

inline Json to_json(const WeightProfile& wp) {
  Json q = Json::array();
  for (unsigned m = 0; m <= wp.dimension(); ++m) q.push_back(to_json(wp[m]));
  return Json{{"n", wp.dimension()}, {"q", std::move(q)}};
}

inline WeightProfile weight_profile_from_json(const Json& j) {
  try {
    std::vector<Rational> q;
    for (const Json& v : j.at("q")) q.push_back(rational_from_json(v));
    return {j.at("n").get<unsigned>(), std::move(q)};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed weight profile JSON: ") + e.what());
  }
}

inline Json to_json(const IndependenceReport& r) {
  Json witness = nullptr;
  if (r.witness) witness = Json{{"T", r.witness->coords}, {"coefficient", to_json(r.witness->coefficient)}};
  return Json{{"k_requested", r.requested_k}, {"k_verified", r.k_verified}, {"witness", std::move(witness)}};
}

inline Json to_json(const MomentResult& r) {
  return Json{{"p", to_string(r.p)}, {"value", to_json(r.value)}, {"ratio", to_json(r.ratio)}};
}

inline Json to_json(const LpSolution& s) {
  Json optimizer = std::visit([](const auto& o) { return to_json(o); }, s.optimizer);
  Json dual = Json::array();
  for (const Rational& y : s.dual) dual.push_back(to_json(y));
  Json out{{"n", s.n},
           {"k", s.k},
           {"p", to_string(s.p)},
           {"value", to_json(s.optimal_value)},
           {"ratio", to_json(s.ratio)},
           {"optimizer", std::move(optimizer)},
           {"dual", std::move(dual)},
           {"unique", s.unique ? Json(*s.unique) : Json(nullptr)},
           {"certificate_ok", s.certificate_ok}};
  if (s.note) out["note"] = *s.note;
  return out;
}

inline Json to_json(const EqualityReport& r) {
  return Json{{"holds", r.holds},
              {"reason", to_string(r.reason)},
              {"offending_atom", r.offending_atom ? Json(*r.offending_atom) : Json(nullptr)}};
}

inline Json to_json(const McEstimate& e) {
  return Json{{"mean", e.mean.to_decimal(MPFR_RNDN, 17)},
              {"std_error", e.std_error.to_decimal(MPFR_RNDN, 17)},
              {"samples", e.samples}};
}

}  // namespace kwise
