#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "curvflow/evolution.hpp"
#include "curvflow/expr_io.hpp"
#include "curvflow/sieve.hpp"

namespace curvflow {

using Json = nlohmann::ordered_json;

inline Json to_json(const Witness& w) {
  return Json{{"l1", to_string(w.l1)}, {"l2", to_string(w.l2)}, {"sign", w.sign}};
}

inline Json to_json(const std::optional<Witness>& w) { return w ? to_json(*w) : Json(nullptr); }

inline Json to_json(const SignCertificate& c, const std::string& target) {
  Json wits = Json::array();
  for (const auto& w : c.witnesses) wits.push_back(to_json(w));
  return Json{{"target", target}, {"verdict", verdict_name(c.verdict)}, {"method", method_name(c.method)}, {"witnesses", wits}};
}

inline Json evolution_json(const EvolutionResult& r) {
  return Json{{"velocity", print(r.velocity)},
              {"quantity", print(r.quantity)},
              {"quantity_HA", print(r.quantity_HA)},
              {"a1", print(r.ratio.a1)},
              {"C_w", print_factored(r.Cw)},
              {"G1", print_factored(r.G1)},
              {"G2", print_factored(r.G2)}};
}

inline Json to_json(const MonotonicityReport& rep) {
  Json j{{"velocity", print(rep.evolution.velocity)},
         {"candidate", print(rep.evolution.quantity)},
         {"verdict", verdict_name(rep.verdict)},
         {"C_w", print_factored(rep.evolution.Cw)},
         {"G1", print_factored(rep.evolution.G1)},
         {"G2", print_factored(rep.evolution.G2)},
         {"certificates", Json::array({to_json(rep.cert_Cw, "C_w"), to_json(rep.cert_G1, "G1")})},
         {"witness", to_json(rep.witness)}};
  if (!rep.failing.empty()) j["failing"] = rep.failing;
  return j;
}

/// One line of the search report stream. Timing is opt-in so that reports stay
/// byte-identical across runs.
inline Json to_json(const CandidateReport& r, const RationalFn& velocity, bool with_timing = false) {
  Json j{{"index", r.index}, {"velocity", print(velocity)}, {"candidate", print(r.candidate)}};
  if (r.verified()) {
    const Verification& v = *r.verification;
    j["verdict"] = "verified";
    j["C_w"] = print_factored(v.evolution.Cw);
    j["G1"] = print_factored(v.evolution.G1);
    j["certificates"] = Json::array({to_json(v.cert_Cw, "C_w"), to_json(v.cert_G1, "G1")});
    j["witness"] = nullptr;
  } else {
    j["verdict"] = "rejected";
    j["stage"] = stage_name(r.rejection->stage);
    j["reason"] = r.rejection->reason;
    j["witness"] = to_json(r.rejection->witness);
  }
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

inline Json to_json(const SearchSummary& s) {
  Json stages = Json::object();
  for (const auto& [k, v] : s.rejected_by_stage) stages[k] = v;
  return Json{{"candidates", s.candidates}, {"verified", s.verified}, {"rejected_by_stage", stages}};
}

}  // namespace curvflow
